#include "ctgp/learn.hpp"

#include <cmath>

#include "ctgp/blocktri.hpp"
#include "ctgp/gp_traj.hpp"
#include "ctgp/preint.hpp"

namespace ctgp {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr int kMaxIterations = 500;
constexpr double kGradTol = 1e-6;
constexpr double kArmijoC = 1e-4;
constexpr int kMaxHalvings = 60;

double spd_log_det(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("covariance in objective is not SPD");
  return 2.0 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();
}

// Alpha-dependent primitives of the noiseless NLL, so sigma2 can be swept
// without touching the data again:
//   J = head + dim/2 ln 2pi
//       + (quad_unit / sigma2 + k_total (3 ln sigma2 + logdet_qbar)) / 2
//   dJ/dalpha = sum_w_de / sigma2 - sum_wdqw / (2 sigma2) + k_total * half_tr
struct NoiselessEval {
  double quad_unit = 0.0;
  double sum_w_de = 0.0;
  double sum_wdqw = 0.0;
  double half_tr = 0.0;
  double logdet_qbar = 0.0;
  double head_const = 0.0;
  long k_total = 0;
  long dim_total = 0;

  double value(double sigma2) const {
    return head_const + 0.5 * dim_total * kLog2Pi +
           0.5 * (quad_unit / sigma2 + k_total * (3.0 * std::log(sigma2) + logdet_qbar));
  }
  double grad_alpha(double sigma2) const {
    return sum_w_de / sigma2 - sum_wdqw / (2.0 * sigma2) + k_total * half_tr;
  }
  double grad_sigma2(double sigma2) const {
    return 1.5 * k_total / sigma2 - quad_unit / (2.0 * sigma2 * sigma2);
  }
  double sigma2_opt() const { return quad_unit / (3.0 * k_total); }
};

NoiselessEval noiseless_eval(const std::vector<std::vector<Eigen::Vector3d>>& states, double dt,
                             const Eigen::Vector3d& x0_mean, const Eigen::Matrix3d& p0,
                             double alpha) {
  if (states.empty()) throw DegenerateData("no training trajectories");
  const Eigen::Matrix3d phi = singer_phi(dt, alpha);
  const Eigen::Matrix3d qbar = singer_q(dt, alpha, 1.0);
  const QAlphaJacobian jac = q_alpha_jacobian(dt, alpha);
  Eigen::LLT<Eigen::Matrix3d> llt(qbar);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("unit-variance kernel block is not SPD");

  NoiselessEval ev;
  ev.logdet_qbar = 2.0 * Eigen::Matrix3d(llt.matrixL()).diagonal().array().log().sum();
  ev.half_tr = 0.5 * llt.solve(jac.dq).trace();

  Eigen::LLT<Eigen::Matrix3d> llt0(p0);
  if (llt0.info() != Eigen::Success) throw NotPositiveDefinite("initial covariance is not SPD");
  const double logdet_p0 = 2.0 * Eigen::Matrix3d(llt0.matrixL()).diagonal().array().log().sum();

  for (const auto& x : states) {
    if (x.size() < 2) throw DegenerateData("trajectory too short to train on");
    const Eigen::Vector3d e0 = x.front() - x0_mean;
    ev.head_const += 0.5 * (logdet_p0 + e0.dot(llt0.solve(e0)));
    for (std::size_t k = 1; k < x.size(); ++k) {
      const Eigen::Vector3d e = x[k] - phi * x[k - 1];
      const Eigen::Vector3d w = llt.solve(e);
      const Eigen::Vector3d de = -jac.dphi * x[k - 1];
      ev.quad_unit += e.dot(w);
      ev.sum_w_de += w.dot(de);
      ev.sum_wdqw += w.dot(jac.dq * w);
      ev.k_total += 1;
    }
    ev.dim_total += 3 * static_cast<long>(x.size());
  }
  return ev;
}

// Observation covariance of the noisy ground-truth model and its parameter
// derivatives. Shared across trajectories on a common grid.
struct NoisyModel {
  BlockTriDiagSPD cov;
  BlockTriDiagSPD dcov_alpha;
  BlockTriDiagSPD dcov_sigma2;
  Eigen::Matrix3d phi;
  Eigen::Matrix3d dphi;
};

NoisyModel noisy_model(std::size_t n, double dt, double r_gt, const Eigen::Matrix3d& p0,
                       double alpha, double sigma2) {
  NoisyModel m{BlockTriDiagSPD(n, 3), BlockTriDiagSPD(n, 3), BlockTriDiagSPD(n, 3),
               singer_phi(dt, alpha), Eigen::Matrix3d::Zero()};
  const Eigen::Matrix3d qbar = singer_q(dt, alpha, 1.0);
  const QAlphaJacobian jac = q_alpha_jacobian(dt, alpha);
  m.dphi = jac.dphi;
  const Eigen::Matrix3d r = r_gt * Eigen::Matrix3d::Identity();

  m.cov.diag[0] = p0 + r;
  for (std::size_t k = 1; k < n; ++k) {
    m.cov.diag[k] = r + m.phi * r * m.phi.transpose() + sigma2 * qbar;
    m.dcov_alpha.diag[k] = m.dphi * r * m.phi.transpose() + m.phi * r * m.dphi.transpose() +
                           sigma2 * jac.dq;
    m.dcov_sigma2.diag[k] = qbar;
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    m.cov.offdiag[k] = -m.phi * r;
    m.dcov_alpha.offdiag[k] = -m.dphi * r;
  }
  return m;
}

double tridiag_inner(const BlockTriDiagSPD& a, const BlockTriDiagSPD& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.diag.size(); ++k)
    s += a.diag[k].cwiseProduct(b.diag[k]).sum();
  for (std::size_t k = 0; k < a.offdiag.size(); ++k)
    s += 2.0 * a.offdiag[k].cwiseProduct(b.offdiag[k]).sum();
  return s;
}

}  // namespace

SingerObjective singer_noiseless_objective(const std::vector<std::vector<Eigen::Vector3d>>& states,
                                           double dt, const Eigen::Vector3d& x0_mean,
                                           const Eigen::Matrix3d& p0, double alpha, double sigma2) {
  if (!(sigma2 > 0.0)) throw NonFiniteObjective("sigma2 must be positive");
  const NoiselessEval ev = noiseless_eval(states, dt, x0_mean, p0, alpha);
  SingerObjective out;
  out.value = ev.value(sigma2);
  out.grad_alpha = ev.grad_alpha(sigma2);
  out.grad_sigma2 = ev.grad_sigma2(sigma2);
  out.grad_log = Eigen::Vector2d(alpha * out.grad_alpha, sigma2 * out.grad_sigma2);
  if (!std::isfinite(out.value)) throw NonFiniteObjective("noiseless objective is not finite");
  return out;
}

SingerObjective singer_noisy_objective(const std::vector<std::vector<Eigen::Vector3d>>& obs,
                                       double dt, double r_gt, const Eigen::Vector3d& x0_mean,
                                       const Eigen::Matrix3d& p0, double alpha, double sigma2) {
  if (obs.empty()) throw DegenerateData("no training observations");
  if (!(r_gt > 0.0)) throw NonFiniteObjective("observation variance must be positive");
  const std::size_t n = obs.front().size();
  if (n < 2) throw DegenerateData("observation sequence too short");
  for (const auto& y : obs)
    if (y.size() != n) throw DimensionMismatch("observation sequences must share one grid");

  const NoisyModel m = noisy_model(n, dt, r_gt, p0, alpha, sigma2);
  const BlockCholesky f = factorize(m.cov);
  const BlockTriDiagSPD pinv = partial_inverse(f);
  const double logdet = log_det(f);
  const double tr_alpha = tridiag_inner(pinv, m.dcov_alpha);
  const double tr_sigma2 = tridiag_inner(pinv, m.dcov_sigma2);

  SingerObjective out;
  const double t_count = static_cast<double>(obs.size());
  out.value = t_count * 0.5 * (logdet + 3.0 * n * kLog2Pi);
  out.grad_alpha = t_count * 0.5 * tr_alpha;
  out.grad_sigma2 = t_count * 0.5 * tr_sigma2;

  for (const auto& y : obs) {
    BlockVector e(n, 3);
    e.blocks[0] = y[0] - x0_mean;
    for (std::size_t k = 1; k < n; ++k) e.blocks[k] = y[k] - m.phi * y[k - 1];
    const BlockVector w = solve(f, e);

    const BlockVector bw_a = tridiag_mul(m.dcov_alpha, w);
    const BlockVector bw_s = tridiag_mul(m.dcov_sigma2, w);
    for (std::size_t k = 0; k < n; ++k) {
      out.value += 0.5 * e.blocks[k].dot(w.blocks[k]);
      out.grad_alpha -= 0.5 * w.blocks[k].dot(bw_a.blocks[k]);
      out.grad_sigma2 -= 0.5 * w.blocks[k].dot(bw_s.blocks[k]);
      if (k > 0) out.grad_alpha += w.blocks[k].dot(-m.dphi * y[k - 1]);
    }
  }
  out.grad_log = Eigen::Vector2d(alpha * out.grad_alpha, sigma2 * out.grad_sigma2);
  if (!std::isfinite(out.value)) throw NonFiniteObjective("noisy objective is not finite");
  return out;
}

TrainReport train_input_covariance(const std::vector<SimTrajectory>& trajs, const SimConfig& cfg) {
  if (trajs.empty()) throw DegenerateData("no training trajectories");

  // Everything except the scalar q factors out of the preintegrated windows,
  // so the search only re-evaluates a closed expression.
  double quad = 0.0;
  double sum_logdet_s = 0.0;
  double head_const = 0.0;
  long n_windows = 0;
  long dim_total = 0;

  const Eigen::Matrix2d p0 = cfg.p0.topLeftCorner<2, 2>();
  const Eigen::Vector2d x0 = cfg.x0_mean.head<2>();
  const double logdet_p0 = spd_log_det(p0);
  Eigen::LLT<Eigen::Matrix2d> llt0(p0);

  for (const auto& traj : trajs) {
    const auto& pos = traj.pos_meas.items;
    if (pos.size() < 2) throw DegenerateData("need at least two position times per trajectory");
    const Eigen::Vector2d e0 = traj.states[knot_index(traj.times, pos.front().time)].head<2>() - x0;
    head_const += 0.5 * (logdet_p0 + e0.dot(llt0.solve(e0)));
    dim_total += 2;
    for (std::size_t k = 0; k + 1 < pos.size(); ++k) {
      const InputPreintFactor f =
          classic_preintegrate(traj.acc_meas, pos[k].time, pos[k + 1].time, 1.0);
      const Eigen::Vector2d xa = traj.states[knot_index(traj.times, pos[k].time)].head<2>();
      const Eigen::Vector2d xb = traj.states[knot_index(traj.times, pos[k + 1].time)].head<2>();
      const Eigen::Vector2d e = xb - f.phi_window * xa - f.delta_x;
      Eigen::LLT<Eigen::Matrix2d> llt(Eigen::Matrix2d(f.sigma));
      if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("preintegrated window covariance is singular");
      quad += e.dot(llt.solve(e));
      sum_logdet_s += 2.0 * Eigen::Matrix2d(llt.matrixL()).diagonal().array().log().sum();
      n_windows += 1;
      dim_total += 2;
    }
  }
  if (quad <= 0.0) throw DegenerateData("all preintegration errors are zero");

  const auto objective = [&](double lnq) {
    return head_const + 0.5 * dim_total * kLog2Pi + n_windows * lnq + 0.5 * sum_logdet_s +
           0.5 * quad * std::exp(-lnq);
  };

  // Golden-section on ln q.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(1e-8), b = std::log(1e2);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c), fd = objective(d);
  TrainReport report;
  int iter = 0;
  while (b - a > 1e-10) {
    ++iter;
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
    TrainIteration ti;
    ti.iter = iter;
    ti.q_input = std::exp(0.5 * (a + b));
    ti.objective = std::min(fc, fd);
    report.trace.push_back(ti);
  }
  const double lnq = 0.5 * (a + b);
  report.q_input = std::exp(lnq);
  report.objective = objective(lnq);
  report.iterations = iter;
  report.grad_norm =
      std::abs(n_windows - 0.5 * quad * std::exp(-lnq));  // d/dlnq, zero at optimum
  report.converged = true;
  return report;
}

TrainReport train_singer_noiseless(const std::vector<SimTrajectory>& trajs, const SimConfig& cfg,
                                   SingerParams init) {
  if (!(init.alpha > 0.0)) throw ConfigParse("initial alpha must be positive for log-space descent");
  std::vector<std::vector<Eigen::Vector3d>> states;
  states.reserve(trajs.size());
  for (const auto& t : trajs) states.push_back(t.states);
  const double dt = 1.0 / cfg.acc_rate;

  double alpha = init.alpha;
  double sigma2 = init.sigma2;
  NoiselessEval ev = noiseless_eval(states, dt, cfg.x0_mean, cfg.p0, alpha);
  TrainReport report;
  for (int iter = 1; iter <= kMaxIterations; ++iter) {
    sigma2 = ev.sigma2_opt();
    double j0 = ev.value(sigma2);
    if (!std::isfinite(j0)) throw NonFiniteObjective("noiseless objective is not finite");
    const double g = alpha * ev.grad_alpha(sigma2);

    report.iterations = iter;
    report.grad_norm = std::abs(g);
    report.objective = j0;
    if (std::abs(g) < kGradTol) {
      report.converged = true;
      break;
    }

    double step = 1.0;
    bool accepted = false;
    for (int h = 0; h < kMaxHalvings; ++h) {
      const double cand = alpha * std::exp(-step * g);
      NoiselessEval ev_c = noiseless_eval(states, dt, cfg.x0_mean, cfg.p0, cand);
      const double j1 = ev_c.value(sigma2);
      if (std::isfinite(j1) && j1 <= j0 - kArmijoC * step * g * g) {
        alpha = cand;
        ev = std::move(ev_c);
        accepted = true;
        report.objective = j1;
        break;
      }
      step *= 0.5;
    }
    TrainIteration ti;
    ti.iter = iter;
    ti.objective = report.objective;
    ti.grad_norm = std::abs(g);
    ti.params = SingerParams{alpha, sigma2};
    report.trace.push_back(ti);
    if (!accepted) break;  // no decrease possible at double precision
  }
  report.params = SingerParams{alpha, sigma2};
  return report;
}

TrainReport train_singer_noisy_gt(const std::vector<std::vector<Eigen::Vector3d>>& obs, double dt,
                                  double r_gt, const Eigen::Vector3d& x0_mean,
                                  const Eigen::Matrix3d& p0, SingerParams init) {
  if (!(init.alpha > 0.0) || !(init.sigma2 > 0.0))
    throw ConfigParse("initial Singer parameters must be positive for log-space descent");
  Eigen::Vector2d v(std::log(init.alpha), std::log(init.sigma2));
  SingerObjective cur = singer_noisy_objective(obs, dt, r_gt, x0_mean, p0, std::exp(v(0)), std::exp(v(1)));

  TrainReport report;
  for (int iter = 1; iter <= kMaxIterations; ++iter) {
    const Eigen::Vector2d g = cur.grad_log;
    report.iterations = iter;
    report.grad_norm = g.norm();
    report.objective = cur.value;
    if (g.norm() < kGradTol) {
      report.converged = true;
      break;
    }

    double step = 1.0;
    bool accepted = false;
    for (int h = 0; h < kMaxHalvings; ++h) {
      const Eigen::Vector2d vc = v - step * g;
      SingerObjective next;
      bool finite = true;
      try {
        next = singer_noisy_objective(obs, dt, r_gt, x0_mean, p0, std::exp(vc(0)), std::exp(vc(1)));
      } catch (const NonFiniteObjective&) {
        finite = false;
      } catch (const NotPositiveDefinite&) {
        finite = false;
      }
      if (finite && next.value <= cur.value - kArmijoC * step * g.squaredNorm()) {
        v = vc;
        cur = next;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    TrainIteration ti;
    ti.iter = iter;
    ti.objective = cur.value;
    ti.grad_norm = g.norm();
    ti.params = SingerParams{std::exp(v(0)), std::exp(v(1))};
    report.trace.push_back(ti);
    if (!accepted) break;
  }
  report.params = SingerParams{std::exp(v(0)), std::exp(v(1))};
  report.objective = cur.value;
  return report;
}

Eigen::VectorXd finite_difference_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                           const Eigen::VectorXd& x, double step) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd hi = x, lo = x;
    hi(i) += step;
    lo(i) -= step;
    g(i) = (f(hi) - f(lo)) / (2.0 * step);
  }
  return g;
}

}  // namespace ctgp

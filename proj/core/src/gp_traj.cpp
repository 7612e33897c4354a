#include "ctgp/gp_traj.hpp"

#include <algorithm>
#include <cmath>

namespace ctgp {

namespace {

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("block expected to be positive definite is not");
  return llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
}

double knot_tolerance(const std::vector<double>& times) {
  const double span = std::max(std::abs(times.front()), std::abs(times.back()));
  return 1e-9 * std::max(1.0, span);
}

}  // namespace

std::size_t knot_index(const std::vector<double>& times, double t) {
  const double tol = knot_tolerance(times);
  auto it = std::lower_bound(times.begin(), times.end(), t - tol);
  if (it == times.end() || std::abs(*it - t) > tol)
    throw MeasurementOffGrid("time " + std::to_string(t) + " does not coincide with a knot");
  return static_cast<std::size_t>(it - times.begin());
}

IntervalModel interval_model(const LiftedPrior& p, double dt) {
  IntervalModel m;
  m.dt = dt;
  switch (p.kind) {
    case PriorKind::WNOA: {
      auto [phi, q] = wnoa_phi_q(dt, std::get<double>(p.params));
      m.phi = phi;
      m.q = q;
      break;
    }
    case PriorKind::WNOJ: {
      auto [phi, q] = wnoj_phi_q(dt, std::get<double>(p.params));
      m.phi = phi;
      m.q = q;
      break;
    }
    case PriorKind::Singer: {
      const auto& sp = std::get<SingerParams>(p.params);
      m.phi = singer_phi(dt, sp.alpha);
      m.q = singer_q(dt, sp.alpha, sp.sigma2);
      break;
    }
  }
  return m;
}

LiftedPrior build_prior(PriorKind kind, const PriorParamValue& params,
                        const std::vector<double>& times, const Eigen::VectorXd& x0_mean,
                        const Eigen::MatrixXd& p0) {
  if (times.empty()) throw InvalidGrid("knot grid is empty");
  for (std::size_t k = 0; k + 1 < times.size(); ++k)
    if (!(times[k + 1] > times[k])) throw InvalidGrid("knot times must be strictly increasing");
  const int d = state_dim(kind);
  if (x0_mean.size() != d || p0.rows() != d || p0.cols() != d)
    throw InvalidGrid("initial mean/covariance dimension does not match the prior kind");
  if (std::holds_alternative<std::monostate>(params))
    throw InvalidGrid("prior family parameters are required");

  LiftedPrior p;
  p.kind = kind;
  p.params = params;
  p.times = times;
  p.x0_mean = x0_mean;
  p.p0 = p0;
  p.intervals.reserve(times.size() - 1);
  p.mean_knots.reserve(times.size());
  p.cov_knots.reserve(times.size());
  p.mean_knots.push_back(x0_mean);
  p.cov_knots.push_back(p0);
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    IntervalModel m = interval_model(p, times[k + 1] - times[k]);
    p.mean_knots.push_back(m.phi * p.mean_knots.back());
    p.cov_knots.push_back(m.phi * p.cov_knots.back() * m.phi.transpose() + m.q);
    p.intervals.push_back(std::move(m));
  }
  return p;
}

BlockTriDiagSPD prior_information(const LiftedPrior& p) {
  const std::size_t n = p.times.size();
  const Eigen::Index d = p.dim();
  BlockTriDiagSPD info(n, d);

  info.diag[0] = spd_inverse(p.p0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const Eigen::MatrixXd qinv = spd_inverse(p.intervals[k].q);
    const Eigen::MatrixXd& phi = p.intervals[k].phi;
    info.diag[k] += phi.transpose() * qinv * phi;
    info.diag[k + 1] += qinv;
    info.offdiag[k] = -qinv * phi;
  }
  return info;
}

Posterior solve_posterior(const LiftedPrior& p, const MeasurementStream& meas) {
  const std::size_t n = p.times.size();
  const Eigen::Index d = p.dim();

  BlockTriDiagSPD info = prior_information(p);

  BlockVector mean_knots(n, d);
  for (std::size_t k = 0; k < n; ++k) mean_knots.blocks[k] = p.mean_knots[k];
  BlockVector rhs = tridiag_mul(info, mean_knots);

  for (const auto& item : meas.items) {
    const std::size_t k = knot_index(p.times, item.time);
    if (item.c.cols() != d) throw DimensionMismatch("measurement projection has wrong state dimension");
    const Eigen::MatrixXd rinv = spd_inverse(item.r);
    info.diag[k] += item.c.transpose() * rinv * item.c;
    rhs.blocks[k] += item.c.transpose() * rinv * item.y;
  }

  Posterior post;
  post.factor = factorize(info);
  post.mean = solve(post.factor, rhs);
  post.cov = partial_inverse(post.factor);
  post.info = std::move(info);
  return post;
}

InterpWeights interp_weights(const LiftedPrior& p, double tau) {
  const double tol = knot_tolerance(p.times);
  if (tau < p.times.front() - tol || tau > p.times.back() + tol)
    throw OutOfSpan("query time outside the trajectory span");
  const Eigen::Index d = p.dim();

  // Bracketing interval; a query at a knot belongs to the interval it starts.
  auto it = std::upper_bound(p.times.begin(), p.times.end(), tau);
  std::size_t k = (it == p.times.begin()) ? 0 : static_cast<std::size_t>(it - p.times.begin()) - 1;
  if (k + 1 >= p.times.size()) k = p.times.size() - 2;

  InterpWeights w;
  w.k = k;
  if (std::abs(tau - p.times[k]) <= tol) {
    w.lambda = Eigen::MatrixXd::Identity(d, d);
    w.psi = Eigen::MatrixXd::Zero(d, d);
    w.q_tau = Eigen::MatrixXd::Zero(d, d);
    return w;
  }
  if (std::abs(tau - p.times[k + 1]) <= tol) {
    w.lambda = Eigen::MatrixXd::Zero(d, d);
    w.psi = Eigen::MatrixXd::Identity(d, d);
    w.q_tau = p.intervals[k].q;
    return w;
  }

  const IntervalModel before = interval_model(p, tau - p.times[k]);
  const IntervalModel after = interval_model(p, p.times[k + 1] - tau);
  const Eigen::MatrixXd qk1_inv = spd_inverse(p.intervals[k].q);
  w.q_tau = before.q;
  w.psi = before.q * after.phi.transpose() * qk1_inv;
  w.lambda = before.phi - w.psi * p.intervals[k].phi;
  return w;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> interpolate(const Posterior& post,
                                                        const LiftedPrior& p, double tau) {
  const InterpWeights w = interp_weights(p, tau);
  const std::size_t k = w.k;
  const double tol = knot_tolerance(p.times);

  if (std::abs(tau - p.times[k]) <= tol)
    return {post.mean.blocks[k], post.cov.diag[k]};
  if (std::abs(tau - p.times[k + 1]) <= tol)
    return {post.mean.blocks[k + 1], post.cov.diag[k + 1]};

  const IntervalModel before = interval_model(p, tau - p.times[k]);
  const Eigen::VectorXd dk = post.mean.blocks[k] - p.mean_knots[k];
  const Eigen::VectorXd dk1 = post.mean.blocks[k + 1] - p.mean_knots[k + 1];
  const Eigen::VectorXd mean = before.phi * p.mean_knots[k] + w.lambda * dk + w.psi * dk1;

  // Prior covariance at tau and the bracketing posterior-minus-prior blocks.
  const Eigen::MatrixXd& phi_int = p.intervals[k].phi;
  const Eigen::MatrixXd p_tau =
      before.phi * p.cov_knots[k] * before.phi.transpose() + before.q;
  const Eigen::MatrixXd d_kk = post.cov.diag[k] - p.cov_knots[k];
  const Eigen::MatrixXd d_k1k1 = post.cov.diag[k + 1] - p.cov_knots[k + 1];
  const Eigen::MatrixXd d_kk1 =
      post.cov.offdiag[k].transpose() - p.cov_knots[k] * phi_int.transpose();

  Eigen::MatrixXd cov = p_tau + w.lambda * d_kk * w.lambda.transpose() +
                        w.lambda * d_kk1 * w.psi.transpose() +
                        w.psi * d_kk1.transpose() * w.lambda.transpose() +
                        w.psi * d_k1k1 * w.psi.transpose();
  cov = 0.5 * (cov + cov.transpose()).eval();
  return {mean, cov};
}

}  // namespace ctgp

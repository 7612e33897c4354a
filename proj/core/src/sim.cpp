#include "ctgp/sim.hpp"

#include <cmath>

#include "ctgp/errors.hpp"
#include "ctgp/priors.hpp"

namespace ctgp {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double v1, v2, s;
  do {
    v1 = 2.0 * uniform() - 1.0;
    v2 = 2.0 * uniform() - 1.0;
    s = v1 * v1 + v2 * v2;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v2 * f;
  has_spare_ = true;
  return v1 * f;
}

Eigen::VectorXd Rng::gaussian_vector(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = gaussian();
  return v;
}

void validate_config(const SimConfig& cfg) {
  if (!(cfg.duration > 0.0)) throw ConfigParse("duration must be positive");
  if (!(cfg.pos_rate > 0.0) || !(cfg.acc_rate > 0.0))
    throw ConfigParse("measurement rates must be positive");
  const double ratio = cfg.acc_rate / cfg.pos_rate;
  if (std::abs(ratio - std::round(ratio)) > 1e-9)
    throw ConfigParse("acc_rate must be an integer multiple of pos_rate");
  if (!(cfg.sigma_pos > 0.0) || !(cfg.sigma_acc > 0.0))
    throw ConfigParse("measurement noise levels must be positive");
  if (cfg.n_train < 0 || cfg.n_eval < 0) throw ConfigParse("trajectory counts must be non-negative");
  if (cfg.kind == PriorKind::Singer) {
    if (!std::holds_alternative<SingerParams>(cfg.params))
      throw ConfigParse("Singer config needs alpha and sigma2");
  } else if (!std::holds_alternative<double>(cfg.params)) {
    throw ConfigParse("white-noise config needs a scalar qc");
  }
}

namespace {

// Lower Cholesky factor that tolerates positive semidefinite input, so exact
// zero prior covariance still works.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal();
}

}  // namespace

SimTrajectory sample_trajectory(const SimConfig& cfg, Rng& rng) {
  validate_config(cfg);
  const double dt = 1.0 / cfg.acc_rate;
  const int n_steps = static_cast<int>(std::llround(cfg.duration * cfg.acc_rate));

  Eigen::Matrix3d phi, q;
  if (cfg.kind == PriorKind::Singer) {
    const auto sp = std::get<SingerParams>(cfg.params);
    phi = singer_phi(dt, sp.alpha);
    q = singer_q(dt, sp.alpha, sp.sigma2);
  } else {
    const double qc = std::get<double>(cfg.params);
    std::tie(phi, q) = wnoj_phi_q(dt, qc);
  }
  const Eigen::MatrixXd l0 = psd_sqrt(cfg.p0);
  const Eigen::MatrixXd lq = psd_sqrt(q);

  SimTrajectory traj;
  traj.times.resize(n_steps + 1);
  traj.states.resize(n_steps + 1);
  traj.times[0] = 0.0;
  traj.states[0] = cfg.x0_mean + l0 * rng.gaussian_vector(3);
  for (int k = 1; k <= n_steps; ++k) {
    traj.times[k] = k * dt;
    traj.states[k] = phi * traj.states[k - 1] + lq * rng.gaussian_vector(3);
  }
  return traj;
}

void corrupt_measurements(SimTrajectory& traj, const SimConfig& cfg, Rng& rng) {
  validate_config(cfg);
  const int stride = static_cast<int>(std::llround(cfg.acc_rate / cfg.pos_rate));
  traj.pos_meas.items.clear();
  traj.acc_meas.items.clear();

  Eigen::MatrixXd c_pos(1, 3), c_acc(1, 3);
  c_pos << 1.0, 0.0, 0.0;
  c_acc << 0.0, 0.0, 1.0;
  const Eigen::MatrixXd r_pos = Eigen::MatrixXd::Constant(1, 1, cfg.sigma_pos * cfg.sigma_pos);
  const Eigen::MatrixXd r_acc = Eigen::MatrixXd::Constant(1, 1, cfg.sigma_acc * cfg.sigma_acc);

  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    if (k % static_cast<std::size_t>(stride) == 0) {
      MeasurementItem item;
      item.time = traj.times[k];
      item.c = c_pos;
      item.y = Eigen::VectorXd::Constant(1, traj.states[k](0) + cfg.sigma_pos * rng.gaussian());
      item.r = r_pos;
      traj.pos_meas.items.push_back(std::move(item));
    }
    MeasurementItem item;
    item.time = traj.times[k];
    item.c = c_acc;
    item.y = Eigen::VectorXd::Constant(1, traj.states[k](2) + cfg.sigma_acc * rng.gaussian());
    item.r = r_acc;
    traj.acc_meas.items.push_back(std::move(item));
  }
}

std::pair<SimConfig, SimConfig> experiment_presets() {
  SimConfig wnoj;
  wnoj.kind = PriorKind::WNOJ;
  wnoj.params = 1.0;
  wnoj.x0_mean = Eigen::Vector3d(0.0, 0.0, 1.0);
  wnoj.p0 = 0.001 * Eigen::Matrix3d::Identity();

  SimConfig singer = wnoj;
  singer.kind = PriorKind::Singer;
  singer.params = SingerParams{10.0, 1.0};
  singer.x0_mean = Eigen::Vector3d(0.0, 1.0, 0.0);
  return {wnoj, singer};
}

}  // namespace ctgp

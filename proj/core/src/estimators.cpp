#include "ctgp/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "ctgp/gp_traj.hpp"

namespace ctgp {

namespace {

void check_config(const EstimatorConfig& cfg) {
  if (!(cfg.r_pos > 0.0) || !(cfg.r_acc > 0.0))
    throw ConfigParse("measurement variances must be positive");
}

std::vector<double> endpoint_times(const MeasurementStream& pos) {
  if (pos.items.size() < 2) throw DegenerateData("need at least two position measurements");
  std::vector<double> t;
  t.reserve(pos.items.size());
  for (const auto& item : pos.items) t.push_back(item.time);
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    if (t[i + 1] <= t[i]) throw InvalidGrid("position times must be strictly increasing");
  return t;
}

MeasurementStream position_unaries(const MeasurementStream& pos, Eigen::Index dim, double r_pos) {
  MeasurementStream out;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(1, dim);
  c(0, 0) = 1.0;
  const Eigen::MatrixXd r = Eigen::MatrixXd::Constant(1, 1, r_pos);
  for (const auto& item : pos.items) {
    MeasurementItem u;
    u.time = item.time;
    u.c = c;
    u.y = item.y;
    u.r = r;
    out.items.push_back(std::move(u));
  }
  return out;
}

Eigen::MatrixXd dense_covariance(const BlockTriDiagSPD& info) {
  const Eigen::MatrixXd a = dense_assemble(info);
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("endpoint information matrix is not SPD");
  return llt.solve(Eigen::MatrixXd::Identity(a.rows(), a.cols()));
}

EstimateResult pack_result(Method method, const std::vector<double>& times, const Posterior& post) {
  EstimateResult res;
  res.method = method;
  res.dim = static_cast<int>(post.info.block_dim());
  res.times = times;
  res.means = post.mean.blocks;
  res.covs = post.cov.diag;
  res.full_cov = dense_covariance(post.info);
  return res;
}

}  // namespace

EstimateResult run_input_estimator(const MeasurementStream& pos, const MeasurementStream& acc,
                                   const EstimatorConfig& cfg) {
  check_config(cfg);
  const std::vector<double> times = endpoint_times(pos);

  std::vector<InputPreintFactor> factors;
  factors.reserve(times.size() - 1);
  for (std::size_t k = 0; k + 1 < times.size(); ++k)
    factors.push_back(classic_preintegrate(acc, times[k], times[k + 1], cfg.q_input));

  const Posterior post =
      input_endpoint_graph(position_unaries(pos, 2, cfg.r_pos), factors,
                           cfg.p0.topLeftCorner<2, 2>(), cfg.x0_mean.head<2>());
  return pack_result(Method::InputPreint, times, post);
}

EstimateResult run_measurement_estimator(const MeasurementStream& pos, const MeasurementStream& acc,
                                         const EstimatorConfig& cfg) {
  check_config(cfg);
  const std::vector<double> times = endpoint_times(pos);
  const double span = std::max(1.0, std::abs(times.back()));
  const double tol = 1e-9 * span;

  Eigen::MatrixXd c_acc = Eigen::MatrixXd::Zero(1, 3);
  c_acc(0, 2) = 1.0;
  const Eigen::MatrixXd r_acc = Eigen::MatrixXd::Constant(1, 1, cfg.r_acc);

  // Window heads follow the prior marginals of the global trajectory, so the
  // reassembly's head subtraction is exact.
  Eigen::VectorXd head_mean = cfg.x0_mean;
  Eigen::MatrixXd head_cov = cfg.p0;

  std::vector<JointGaussianFactor> windows;
  windows.reserve(times.size() - 1);
  for (std::size_t w = 0; w + 1 < times.size(); ++w) {
    const double t_a = times[w], t_b = times[w + 1];

    std::vector<double> grid;
    grid.push_back(t_a);
    MeasurementStream unaries;
    for (const auto& item : acc.items) {
      const bool lower_ok = (w == 0) ? item.time >= t_a - tol : item.time > t_a + tol;
      if (!lower_ok || item.time > t_b + tol) continue;
      if (item.time > grid.back() + tol && item.time < t_b - tol) grid.push_back(item.time);
      MeasurementItem u;
      u.time = item.time;
      u.c = c_acc;
      u.y = item.y;
      u.r = r_acc;
      unaries.items.push_back(std::move(u));
    }
    grid.push_back(t_b);

    const LiftedPrior prior =
        build_prior(PriorKind::Singer, cfg.params, grid, head_mean, head_cov);
    windows.push_back(gp_preintegrate(prior, unaries));
    head_mean = prior.mean_knots.back();
    head_cov = prior.cov_knots.back();
  }

  const Posterior post = measurement_endpoint_graph(windows, position_unaries(pos, 3, cfg.r_pos),
                                                    cfg.x0_mean, cfg.p0);
  return pack_result(Method::MeasurementGP, times, post);
}

}  // namespace ctgp

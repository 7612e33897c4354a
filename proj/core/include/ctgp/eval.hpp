#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "ctgp/estimators.hpp"

namespace ctgp {

struct TrajectoryMetrics {
  double mean_err_pos = 0.0;
  double mean_err_vel = 0.0;
  double rmse_pos = 0.0;
  double rmse_vel = 0.0;
  double nees_marginal = 0.0;
  double nees_full = 0.0;
  int dof_marginal = 0;
  int dof_full = 0;
};

struct BoxStats {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double whisker_lo = 0.0;  // 2.5 percentile
  double whisker_hi = 0.0;  // 97.5 percentile
  double mean = 0.0;
  std::vector<double> outliers;
};

struct BiasTest {
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  bool pass = false;
};

// Average NEES over the endpoint knots with errors and covariances restricted
// to the (p, v) marginals, so both methods are scored on the same quantity.
// truth holds the full ground-truth state at each endpoint time.
std::pair<double, int> nees_marginal(const EstimateResult& result,
                                     const std::vector<Eigen::Vector3d>& truth);

// NEES of the stacked endpoint error against the dense full covariance, in
// each method's own state dimension.
std::pair<double, int> nees_full(const EstimateResult& result,
                                 const std::vector<Eigen::Vector3d>& truth);

// Inverse chi-squared CDF by bisection on the regularized incomplete gamma
// function, absolute tolerance 1e-9.
double chi2_bound(double p, int dof);

// Normal-approximation confidence interval for the mean of per-trajectory
// mean errors; passes when zero lies inside.
BiasTest bias_test(const std::vector<double>& per_traj_means, double level = 0.95);

// Quartiles by linear interpolation between order statistics, whiskers at the
// exact 2.5 and 97.5 percentiles, outliers beyond the whiskers.
BoxStats box_stats(std::vector<double> values);

TrajectoryMetrics trajectory_metrics(const EstimateResult& result,
                                     const std::vector<Eigen::Vector3d>& truth);

}  // namespace ctgp

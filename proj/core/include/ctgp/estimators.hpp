#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ctgp/preint.hpp"
#include "ctgp/sim.hpp"

namespace ctgp {

enum class Method { InputPreint, MeasurementGP };

struct EstimatorConfig {
  Method method = Method::InputPreint;
  double q_input = 1.0;     // InputPreint only
  SingerParams params;      // MeasurementGP only
  double r_pos = 1e-4;
  double r_acc = 1e-4;
  Eigen::Vector3d x0_mean = Eigen::Vector3d::Zero();
  Eigen::Matrix3d p0 = Eigen::Matrix3d::Identity();
};

// Posterior at the endpoint grid (the position-measurement times). The input
// method estimates (p, v), the measurement method (p, v, a); full_cov is the
// dense endpoint covariance kept for whole-trajectory consistency checks.
struct EstimateResult {
  Method method = Method::InputPreint;
  int dim = 2;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> means;
  std::vector<Eigen::MatrixXd> covs;
  Eigen::MatrixXd full_cov;
};

// Classic preintegration of the accelerations between consecutive position
// times, then the endpoint graph over (p, v).
EstimateResult run_input_estimator(const MeasurementStream& pos, const MeasurementStream& acc,
                                   const EstimatorConfig& cfg);

// Singer prior over each window's acceleration grid, acceleration unaries as
// state measurements, window posteriors compressed to endpoint factors and
// reassembled. An empty acceleration stream degrades to position-only
// smoothing under the prior.
EstimateResult run_measurement_estimator(const MeasurementStream& pos, const MeasurementStream& acc,
                                         const EstimatorConfig& cfg);

}  // namespace ctgp

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "ctgp/gp_traj.hpp"
#include "ctgp/rng.hpp"

namespace ctgp {

struct SimConfig {
  PriorKind kind = PriorKind::WNOJ;
  PriorParamValue params = 1.0;  // qc for WNOA/WNOJ, SingerParams for Singer
  Eigen::Vector3d x0_mean = Eigen::Vector3d::Zero();
  Eigen::Matrix3d p0 = Eigen::Matrix3d::Identity();
  double duration = 1.0;
  double pos_rate = 10.0;
  double acc_rate = 100.0;
  double sigma_pos = 0.01;
  double sigma_acc = 0.01;
  int n_train = 100;
  int n_eval = 1000;
  std::uint64_t seed = 123456789;
};

// Ground truth on the fine grid plus the synthesized measurement streams.
struct SimTrajectory {
  std::vector<double> times;
  std::vector<Eigen::Vector3d> states;
  MeasurementStream pos_meas;
  MeasurementStream acc_meas;
};

// Throws ConfigParse if rates or noise levels are unusable.
void validate_config(const SimConfig& cfg);

// Draws x0 from N(x0_mean, p0) and propagates x_{k+1} = Phi x_k + w_k over
// the fine grid. Measurement streams are left empty.
SimTrajectory sample_trajectory(const SimConfig& cfg, Rng& rng);

// Fills traj.pos_meas and traj.acc_meas with noisy projections of the truth.
// Position rows [1 0 0] at pos_rate including t=0, acceleration rows [0 0 1]
// at every fine-grid point including t=0. The IMU-as-input path skips the
// t=0 acceleration sample by construction (windows own (start, end]), the
// IMU-as-measurement path attaches it to the first window.
void corrupt_measurements(SimTrajectory& traj, const SimConfig& cfg, Rng& rng);

// The two experiment configurations: white-noise-on-jerk with qc = 1 and a
// Singer prior with alpha = 10, sigma2 = 1.
std::pair<SimConfig, SimConfig> experiment_presets();

}  // namespace ctgp

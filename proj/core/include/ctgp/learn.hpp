#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "ctgp/priors.hpp"
#include "ctgp/sim.hpp"

namespace ctgp {

struct TrainIteration {
  int iter = 0;
  double objective = 0.0;
  double grad_norm = 0.0;
  double q_input = 0.0;
  SingerParams params;
};

struct TrainReport {
  double q_input = 0.0;
  SingerParams params;
  double objective = 0.0;
  int iterations = 0;
  double grad_norm = 0.0;
  bool converged = false;
  std::vector<TrainIteration> trace;
};

// Negative log likelihood and gradients of a Singer prior over one uniform
// grid, shared by the trainers and the finite-difference checks. grad_log
// holds derivatives with respect to (ln alpha, ln sigma2).
struct SingerObjective {
  double value = 0.0;
  double grad_alpha = 0.0;
  double grad_sigma2 = 0.0;
  Eigen::Vector2d grad_log = Eigen::Vector2d::Zero();
};

// Whole-trajectory NLL of noiseless states under the Singer prior, summed
// over trajectories. Every trajectory must share the grid step dt. The head
// term uses (x0_mean, p0) and is constant in (alpha, sigma2).
SingerObjective singer_noiseless_objective(const std::vector<std::vector<Eigen::Vector3d>>& states,
                                           double dt, const Eigen::Vector3d& x0_mean,
                                           const Eigen::Matrix3d& p0, double alpha, double sigma2);

// NLL of noisy ground-truth observations y_k = x_k + n_k, n_k ~ N(0, r_gt I).
// The state is marginalized analytically, leaving a block-tridiagonal
// covariance over the observations; the trace term of the gradient runs in
// O(K) through the partial inverse of its factorization.
SingerObjective singer_noisy_objective(const std::vector<std::vector<Eigen::Vector3d>>& obs,
                                       double dt, double r_gt, const Eigen::Vector3d& x0_mean,
                                       const Eigen::Matrix3d& p0, double alpha, double sigma2);

// Maximum-likelihood scalar q for preintegrated window covariances q * S_k,
// by golden-section search on ln q. Windows follow the position-measurement
// grid; errors compare noiseless ground truth against preintegrated deltas.
TrainReport train_input_covariance(const std::vector<SimTrajectory>& trajs, const SimConfig& cfg);

// Gradient descent on ln alpha with sigma2 set to its closed-form optimum at
// each iteration, on noiseless full-grid ground truth.
TrainReport train_singer_noiseless(const std::vector<SimTrajectory>& trajs, const SimConfig& cfg,
                                   SingerParams init);

// Joint gradient descent on (ln alpha, ln sigma2) for noisy ground truth with
// known observation variance r_gt.
TrainReport train_singer_noisy_gt(const std::vector<std::vector<Eigen::Vector3d>>& obs, double dt,
                                  double r_gt, const Eigen::Vector3d& x0_mean,
                                  const Eigen::Matrix3d& p0, SingerParams init);

// Central finite differences, one objective call pair per coordinate.
Eigen::VectorXd finite_difference_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                           const Eigen::VectorXd& x, double step);

}  // namespace ctgp

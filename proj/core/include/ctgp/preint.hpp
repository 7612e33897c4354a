#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "ctgp/gp_traj.hpp"

namespace ctgp {

// Window of integrated inputs between two endpoints, for the model that treats
// acceleration samples as control inputs of a constant-velocity chain.
struct InputPreintFactor {
  double t_start = 0.0;
  double t_end = 0.0;
  Eigen::VectorXd delta_x;      // integrated relative motion
  Eigen::MatrixXd phi_window;   // product of substep transitions
  Eigen::MatrixXd sigma;        // propagated input covariance
};

// Joint Gaussian on the two endpoint states of a window, produced by querying
// the window posterior. head_mean/head_cov record the prior this window was
// conditioned on at its first knot; assembly into a global graph subtracts the
// head again so that chaining windows never double counts it.
struct JointGaussianFactor {
  double t_start = 0.0;
  double t_end = 0.0;
  Eigen::VectorXd x_tilde_start;
  Eigen::VectorXd x_tilde_end;
  Eigen::MatrixXd p_tilde;      // 2D x 2D symmetric joint covariance
  Eigen::VectorXd head_mean;
  Eigen::MatrixXd head_cov;
};

struct ReducedSystem {
  std::vector<std::size_t> kept_indices;
  BlockTriDiagSPD l_small;
  BlockVector r_small;
};

// Integrates acceleration samples in (t_start, t_end] into one relative factor.
// A boundary sample exactly at t_start belongs to the previous window and is
// ignored here.
InputPreintFactor classic_preintegrate(const MeasurementStream& accel, double t_start,
                                       double t_end, double q_input);

// Endpoint graph for the input treatment: the prior mean between endpoints is
// shifted by each window's integrated input and the process noise is the
// propagated input covariance.
Posterior input_endpoint_graph(const MeasurementStream& pos_meas,
                               const std::vector<InputPreintFactor>& factors,
                               const Eigen::MatrixXd& p0, const Eigen::VectorXd& x0);

// Posterior of the window grid queried at its first and last knots. The window
// prior's (x0_mean, p0) act as the head.
JointGaussianFactor gp_preintegrate(const LiftedPrior& window_prior,
                                    const MeasurementStream& meas);

// Eliminates all knots not in `keep` from L x = r. Eliminated runs are
// contiguous segments between kept knots, each handled by its own
// block-tridiagonal solve, so the reduced system stays block-tridiagonal.
ReducedSystem schur_marginalize(const BlockTriDiagSPD& l, const BlockVector& r,
                                const std::vector<std::size_t>& keep);

// Assembles per-window joint Gaussians and endpoint position measurements into
// the endpoint posterior. head_mean/head_cov is the prior on the first knot of
// the first window.
Posterior measurement_endpoint_graph(const std::vector<JointGaussianFactor>& windows,
                                     const MeasurementStream& pos_meas,
                                     const Eigen::VectorXd& head_mean,
                                     const Eigen::MatrixXd& head_cov);

}  // namespace ctgp

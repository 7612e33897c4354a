#pragma once

#include <Eigen/Dense>
#include <utility>

#include "ctgp/errors.hpp"

namespace ctgp {

// Exponentially correlated acceleration prior, one scalar pair per axis.
// alpha is the inverse length scale (1/s), sigma2 the variance of the
// driving process. alpha -> 0 recovers white noise on jerk with qc = sigma2;
// alpha -> inf recovers white noise on acceleration with qc = alpha^2 sigma2.
struct SingerParams {
  double alpha = 0.0;
  double sigma2 = 1.0;
};

enum class PriorKind { WNOA, WNOJ, Singer };

// Per-axis state dimension implied by the prior family.
inline int state_dim(PriorKind kind) { return kind == PriorKind::WNOA ? 2 : 3; }

struct IntervalModel {
  double dt = 0.0;
  Eigen::MatrixXd phi;
  Eigen::MatrixXd q;
};

// Transition over dt for the (p, v, a) state. Entries use the closed forms in
// exp(-alpha dt); below the series threshold on alpha*dt they switch to a
// Taylor expansion about alpha = 0, which is exact at alpha = 0.
Eigen::Matrix3d singer_phi(double dt, double alpha);

// Process noise over dt: sigma2 times the closed-form covariance table.
Eigen::Matrix3d singer_q(double dt, double alpha, double sigma2);

std::pair<Eigen::Matrix3d, Eigen::Matrix3d> wnoj_phi_q(double dt, double qc);
std::pair<Eigen::Matrix2d, Eigen::Matrix2d> wnoa_phi_q(double dt, double qc);

// Partials with respect to alpha at unit sigma2. dq is the derivative of the
// covariance table (multiply by sigma2 for the full process-noise partial);
// dphi has its only nonzero entries in the third column, so the motion-error
// partial is -dphi * x_{k-1}.
struct QAlphaJacobian {
  Eigen::Matrix3d dq;
  Eigen::Matrix3d dphi;
};
QAlphaJacobian q_alpha_jacobian(double dt, double alpha);

// Branch internals exposed for the consistency tests in the overlap region.
namespace detail {
Eigen::Matrix3d singer_phi_closed(double dt, double alpha);
Eigen::Matrix3d singer_phi_series(double dt, double alpha);
Eigen::Matrix3d singer_qbar_closed(double dt, double alpha);
Eigen::Matrix3d singer_qbar_series(double dt, double alpha);
QAlphaJacobian q_alpha_jacobian_closed(double dt, double alpha);
QAlphaJacobian q_alpha_jacobian_series(double dt, double alpha);
}  // namespace detail

}  // namespace ctgp

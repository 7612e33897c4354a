#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <variant>
#include <vector>

#include "ctgp/blocktri.hpp"
#include "ctgp/priors.hpp"

namespace ctgp {

struct MeasurementItem {
  double time = 0.0;
  Eigen::MatrixXd c;  // projection rows onto the local state
  Eigen::VectorXd y;
  Eigen::MatrixXd r;  // SPD measurement covariance
};

struct MeasurementStream {
  std::vector<MeasurementItem> items;
};

// Scalar qc for WNOA/WNOJ, (alpha, sigma2) for Singer. Monostate marks priors
// assembled from externally supplied interval models (no interpolation).
using PriorParamValue = std::variant<std::monostate, double, SingerParams>;

// Markov prior over a knot grid. mean_knots and cov_knots hold the prior
// marginals at every knot so interpolation stays O(1).
struct LiftedPrior {
  PriorKind kind = PriorKind::WNOJ;
  PriorParamValue params;
  std::vector<double> times;            // K+1, strictly increasing
  std::vector<IntervalModel> intervals; // K
  Eigen::VectorXd x0_mean;
  Eigen::MatrixXd p0;
  std::vector<Eigen::VectorXd> mean_knots;
  std::vector<Eigen::MatrixXd> cov_knots;

  std::size_t num_knots() const { return times.size(); }
  Eigen::Index dim() const { return x0_mean.size(); }
};

struct Posterior {
  BlockVector mean;
  BlockTriDiagSPD info;     // Hessian
  BlockCholesky factor;
  BlockTriDiagSPD cov;      // block-tridiagonal part of the inverse Hessian
};

struct InterpWeights {
  std::size_t k = 0;        // bracketing interval index
  Eigen::MatrixXd lambda;
  Eigen::MatrixXd psi;
  Eigen::MatrixXd q_tau;    // process noise accumulated from t_k to tau
};

// Interval transition and process noise for this prior family over a
// sub-interval of length dt.
IntervalModel interval_model(const LiftedPrior& p, double dt);

LiftedPrior build_prior(PriorKind kind, const PriorParamValue& params,
                        const std::vector<double>& times, const Eigen::VectorXd& x0_mean,
                        const Eigen::MatrixXd& p0);

// Inverse kernel matrix assembled directly in block-tridiagonal form.
BlockTriDiagSPD prior_information(const LiftedPrior& p);

// Solves (P^-1 + C^T R^-1 C) x = P^-1 xbar + C^T R^-1 y. Every measurement
// must sit on a knot; off-knot measurements are handled upstream.
Posterior solve_posterior(const LiftedPrior& p, const MeasurementStream& meas);

InterpWeights interp_weights(const LiftedPrior& p, double tau);

std::pair<Eigen::VectorXd, Eigen::MatrixXd> interpolate(const Posterior& post,
                                                        const LiftedPrior& p, double tau);

// Index of the knot matching t, or throws MeasurementOffGrid.
std::size_t knot_index(const std::vector<double>& times, double t);

}  // namespace ctgp

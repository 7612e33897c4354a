#pragma once

// Independent reference implementations the tests compare against. Everything
// here goes through dense Eigen routines or generic numerics on purpose; none
// of it shares code with the library paths under test.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "ctgp/gp_traj.hpp"

namespace oracle {

inline double rel_err(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = std::max({a.norm(), b.norm(), 1e-300});
  return (a - b).norm() / scale;
}

inline double rel_err(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

// Matrix exponential by scaling and squaring with a Taylor series on the
// scaled matrix. Norm after scaling is below 0.25, so 24 terms reach well
// past double precision.
inline Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
  const double nrm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  double scale = 1.0;
  while (nrm * scale > 0.25) {
    scale *= 0.5;
    ++squarings;
  }
  const Eigen::MatrixXd x = a * scale;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::MatrixXd term = sum;
  for (int k = 1; k <= 24; ++k) {
    term = (term * x) / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

namespace detail {
inline Eigen::MatrixXd simpson_rec(const std::function<Eigen::MatrixXd(double)>& f, double a,
                                   double b, const Eigen::MatrixXd& fa, const Eigen::MatrixXd& fm,
                                   const Eigen::MatrixXd& fb, const Eigen::MatrixXd& whole,
                                   double tol, int depth) {
  const double m = 0.5 * (a + b);
  const Eigen::MatrixXd fl = f(0.5 * (a + m));
  const Eigen::MatrixXd fr = f(0.5 * (m + b));
  const Eigen::MatrixXd left = (m - a) / 6.0 * (fa + 4.0 * fl + fm);
  const Eigen::MatrixXd right = (b - m) / 6.0 * (fm + 4.0 * fr + fb);
  const Eigen::MatrixXd delta = left + right - whole;
  if (depth <= 0 || delta.norm() <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, fl, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, fr, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

// Adaptive Simpson quadrature on a matrix-valued integrand.
inline Eigen::MatrixXd integrate(const std::function<Eigen::MatrixXd(double)>& f, double a,
                                 double b, double tol) {
  const Eigen::MatrixXd fa = f(a);
  const Eigen::MatrixXd fm = f(0.5 * (a + b));
  const Eigen::MatrixXd fb = f(b);
  const Eigen::MatrixXd whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

// Process-noise covariance of the LTI SDE dx = A x dt + L dw over dt, with
// white-noise power spectral density psd on the single input channel.
inline Eigen::MatrixXd q_by_quadrature(const Eigen::MatrixXd& a, const Eigen::VectorXd& l,
                                       double psd, double dt, double tol) {
  auto integrand = [&](double s) -> Eigen::MatrixXd {
    const Eigen::MatrixXd phi = expm(a * (dt - s));
    const Eigen::VectorXd col = phi * l;
    return psd * col * col.transpose();
  };
  return integrate(integrand, 0.0, dt, tol);
}

inline Eigen::MatrixXd random_spd(int d, std::mt19937_64& gen, double jitter = 0.1) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = normal(gen);
  return g * g.transpose() + jitter * Eigen::MatrixXd::Identity(d, d);
}

inline Eigen::VectorXd random_vec(int d, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = normal(gen);
  return v;
}

// Dense prior covariance of the lifted chain: x = xbar + A w with
// w ~ N(0, blkdiag(P0, Q_1..Q_K)) and A(i,j) = Phi(t_i, t_j) for i >= j.
inline Eigen::MatrixXd dense_lifted_cov(const ctgp::LiftedPrior& p) {
  const Eigen::Index d = p.dim();
  const Eigen::Index n = static_cast<Eigen::Index>(p.num_knots());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n * d, n * d);
  for (Eigen::Index i = 0; i < n; ++i) {
    a.block(i * d, i * d, d, d) = Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(d, d);
    for (Eigen::Index j = i; j > 0; --j) {
      prod = prod * p.intervals[static_cast<std::size_t>(j - 1)].phi;
      a.block(i * d, (j - 1) * d, d, d) = prod;
    }
  }
  Eigen::MatrixXd qblk = Eigen::MatrixXd::Zero(n * d, n * d);
  qblk.topLeftCorner(d, d) = p.p0;
  for (Eigen::Index k = 1; k < n; ++k)
    qblk.block(k * d, k * d, d, d) = p.intervals[static_cast<std::size_t>(k - 1)].q;
  return a * qblk * a.transpose();
}

inline Eigen::VectorXd dense_lifted_mean(const ctgp::LiftedPrior& p) {
  const Eigen::Index d = p.dim();
  Eigen::VectorXd mean(static_cast<Eigen::Index>(p.num_knots()) * d);
  for (std::size_t k = 0; k < p.num_knots(); ++k)
    mean.segment(static_cast<Eigen::Index>(k) * d, d) = p.mean_knots[k];
  return mean;
}

// Gaussian conditioning in covariance form, valid even for singular priors:
// mean + P C^T (C P C^T + R)^-1 (y - C mean). Measurements are given as
// stacked rows of a global C with block-diagonal R.
struct DenseMeasurements {
  Eigen::MatrixXd c;
  Eigen::VectorXd y;
  Eigen::MatrixXd r;
};

inline std::pair<Eigen::VectorXd, Eigen::MatrixXd> condition(const Eigen::VectorXd& mean,
                                                             const Eigen::MatrixXd& cov,
                                                             const DenseMeasurements& m) {
  if (m.c.rows() == 0) return {mean, cov};
  const Eigen::MatrixXd s = m.c * cov * m.c.transpose() + m.r;
  const Eigen::MatrixXd gain = cov * m.c.transpose() * s.ldlt().solve(
                                                           Eigen::MatrixXd::Identity(s.rows(), s.cols()));
  const Eigen::VectorXd post_mean = mean + gain * (m.y - m.c * mean);
  Eigen::MatrixXd post_cov = cov - gain * m.c * cov;
  post_cov = 0.5 * (post_cov + post_cov.transpose()).eval();
  return {post_mean, post_cov};
}

// Collects knot-level unary measurements into one stacked dense block.
inline DenseMeasurements stack_measurements(const ctgp::MeasurementStream& meas,
                                            const std::vector<double>& times, Eigen::Index d) {
  Eigen::Index rows = 0;
  for (const auto& item : meas.items) rows += item.y.size();
  DenseMeasurements out;
  out.c = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(times.size()) * d);
  out.y = Eigen::VectorXd::Zero(rows);
  out.r = Eigen::MatrixXd::Zero(rows, rows);
  Eigen::Index at = 0;
  for (const auto& item : meas.items) {
    const std::size_t k = ctgp::knot_index(times, item.time);
    const Eigen::Index m = item.y.size();
    out.c.block(at, static_cast<Eigen::Index>(k) * d, m, d) = item.c;
    out.y.segment(at, m) = item.y;
    out.r.block(at, at, m, m) = item.r;
    at += m;
  }
  return out;
}

inline Eigen::VectorXd central_difference(const std::function<double(double)>& f, double x,
                                          double h) {
  Eigen::VectorXd g(1);
  g(0) = (f(x + h) - f(x - h)) / (2.0 * h);
  return g;
}

}  // namespace oracle

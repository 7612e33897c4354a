#include "ctgp/eval.hpp"

#include <algorithm>
#include <cmath>

#include "ctgp/errors.hpp"

namespace ctgp {

namespace {

void check_truth(const EstimateResult& result, const std::vector<Eigen::Vector3d>& truth) {
  if (truth.size() != result.means.size())
    throw DimensionMismatch("truth and estimate cover different endpoint counts");
  if (result.means.empty()) throw DegenerateData("empty estimate");
}

// Regularized lower incomplete gamma P(a, x), series for x < a + 1 and
// continued fraction otherwise.
double gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - lg);
  }
  // Lentz continued fraction for the upper tail.
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 - std::exp(-x + a * std::log(x) - lg) * h;
}

double percentile_linear(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = p * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

std::pair<double, int> nees_marginal(const EstimateResult& result,
                                     const std::vector<Eigen::Vector3d>& truth) {
  check_truth(result, truth);
  double sum = 0.0;
  for (std::size_t k = 0; k < result.means.size(); ++k) {
    const Eigen::Vector2d e = result.means[k].head<2>() - truth[k].head<2>();
    Eigen::LLT<Eigen::Matrix2d> llt(Eigen::Matrix2d(result.covs[k].topLeftCorner<2, 2>()));
    if (llt.info() != Eigen::Success)
      throw SingularCovariance("marginal covariance is not invertible");
    sum += e.dot(llt.solve(e));
  }
  const int dof = 2 * static_cast<int>(result.means.size());
  return {sum / dof, dof};
}

std::pair<double, int> nees_full(const EstimateResult& result,
                                 const std::vector<Eigen::Vector3d>& truth) {
  check_truth(result, truth);
  const int d = result.dim;
  const Eigen::Index n = static_cast<Eigen::Index>(result.means.size()) * d;
  if (result.full_cov.rows() != n)
    throw DimensionMismatch("full covariance does not match the endpoint grid");
  Eigen::VectorXd e(n);
  for (std::size_t k = 0; k < result.means.size(); ++k)
    e.segment(k * d, d) = result.means[k] - truth[k].head(d);
  Eigen::LLT<Eigen::MatrixXd> llt(result.full_cov);
  if (llt.info() != Eigen::Success)
    throw SingularCovariance("full endpoint covariance is not invertible");
  return {e.dot(llt.solve(e)) / n, static_cast<int>(n)};
}

double chi2_bound(double p, int dof) {
  if (!(p > 0.0 && p < 1.0) || dof < 1) throw ConfigParse("chi2_bound needs 0 < p < 1, dof >= 1");
  const double a = 0.5 * dof;
  double hi = static_cast<double>(dof);
  while (gamma_p(a, 0.5 * hi) < p) hi *= 2.0;
  double lo = 0.0;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    if (gamma_p(a, 0.5 * mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

BiasTest bias_test(const std::vector<double>& per_traj_means, double level) {
  const std::size_t n = per_traj_means.size();
  if (n < 2) throw DegenerateData("bias test needs at least two trajectories");
  double mean = 0.0;
  for (double v : per_traj_means) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : per_traj_means) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n - 1);
  const double z = std::sqrt(chi2_bound(level, 1));
  const double half = z * std::sqrt(var / static_cast<double>(n));
  BiasTest out;
  out.ci_lo = mean - half;
  out.ci_hi = mean + half;
  out.pass = out.ci_lo <= 0.0 && 0.0 <= out.ci_hi;
  return out;
}

BoxStats box_stats(std::vector<double> values) {
  if (values.empty()) throw DegenerateData("box_stats on empty sample");
  std::sort(values.begin(), values.end());
  BoxStats s;
  s.median = percentile_linear(values, 0.5);
  s.q1 = percentile_linear(values, 0.25);
  s.q3 = percentile_linear(values, 0.75);
  s.whisker_lo = percentile_linear(values, 0.025);
  s.whisker_hi = percentile_linear(values, 0.975);
  double mean = 0.0;
  for (double v : values) {
    mean += v;
    if (v < s.whisker_lo || v > s.whisker_hi) s.outliers.push_back(v);
  }
  s.mean = mean / static_cast<double>(values.size());
  return s;
}

TrajectoryMetrics trajectory_metrics(const EstimateResult& result,
                                     const std::vector<Eigen::Vector3d>& truth) {
  check_truth(result, truth);
  TrajectoryMetrics m;
  double sq_pos = 0.0, sq_vel = 0.0;
  for (std::size_t k = 0; k < result.means.size(); ++k) {
    const double ep = result.means[k](0) - truth[k](0);
    const double ev = result.means[k](1) - truth[k](1);
    m.mean_err_pos += ep;
    m.mean_err_vel += ev;
    sq_pos += ep * ep;
    sq_vel += ev * ev;
  }
  const double n = static_cast<double>(result.means.size());
  m.mean_err_pos /= n;
  m.mean_err_vel /= n;
  m.rmse_pos = std::sqrt(sq_pos / n);
  m.rmse_vel = std::sqrt(sq_vel / n);
  std::tie(m.nees_marginal, m.dof_marginal) = nees_marginal(result, truth);
  std::tie(m.nees_full, m.dof_full) = nees_full(result, truth);
  return m;
}

}  // namespace ctgp

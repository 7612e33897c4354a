#include "ctgp/preint.hpp"

#include <algorithm>
#include <cmath>

namespace ctgp {

namespace {

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("block expected to be positive definite is not");
  return llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
}

}  // namespace

InputPreintFactor classic_preintegrate(const MeasurementStream& accel, double t_start,
                                       double t_end, double q_input) {
  if (!(t_end > t_start)) throw InvalidInterval("window end must be after window start");
  const double tol = 1e-9 * std::max(1.0, std::max(std::abs(t_start), std::abs(t_end)));

  std::vector<const MeasurementItem*> samples;
  for (const auto& item : accel.items) {
    if (item.time > t_start + tol && item.time <= t_end + tol) samples.push_back(&item);
  }
  if (samples.empty()) throw EmptyWindow("no acceleration samples in window");
  for (std::size_t i = 0; i + 1 < samples.size(); ++i)
    if (samples[i + 1]->time <= samples[i]->time)
      throw InvalidInterval("acceleration samples must be strictly increasing in time");

  Eigen::Vector2d delta = Eigen::Vector2d::Zero();
  Eigen::Matrix2d s = Eigen::Matrix2d::Zero();
  const double tau_j = samples.back()->time;
  double prev = t_start;
  for (const auto* item : samples) {
    const double step = item->time - prev;
    const double lead = tau_j - item->time;
    // Phi(tau_J, tau_n) * B_n for the constant-velocity chain.
    Eigen::Vector2d pb(0.5 * step * step + lead * step, step);
    delta += pb * item->y(0);
    s += pb * pb.transpose();
    prev = item->time;
  }

  // Propagate to the window end if the last sample falls short of it.
  if (t_end - tau_j > tol) {
    Eigen::Matrix2d tail = Eigen::Matrix2d::Identity();
    tail(0, 1) = t_end - tau_j;
    delta = tail * delta;
    s = tail * s * tail.transpose();
  }

  InputPreintFactor f;
  f.t_start = t_start;
  f.t_end = t_end;
  f.delta_x = delta;
  f.phi_window = Eigen::Matrix2d::Identity();
  f.phi_window(0, 1) = t_end - t_start;
  f.sigma = q_input * s;
  return f;
}

Posterior input_endpoint_graph(const MeasurementStream& pos_meas,
                               const std::vector<InputPreintFactor>& factors,
                               const Eigen::MatrixXd& p0, const Eigen::VectorXd& x0) {
  if (factors.empty()) throw GraphMismatch("no preintegration factors");
  const Eigen::Index d = x0.size();
  if (p0.rows() != d || p0.cols() != d) throw DimensionMismatch("prior covariance dimension mismatch");

  LiftedPrior p;
  p.kind = PriorKind::WNOA;
  p.params = std::monostate{};
  p.x0_mean = x0;
  p.p0 = p0;
  p.times.push_back(factors.front().t_start);
  p.mean_knots.push_back(x0);
  p.cov_knots.push_back(p0);
  for (const auto& f : factors) {
    const double tol = 1e-9 * std::max(1.0, std::abs(f.t_end));
    if (std::abs(f.t_start - p.times.back()) > tol)
      throw GraphMismatch("preintegration windows are not contiguous");
    if (f.delta_x.size() != d || f.phi_window.rows() != d || f.sigma.rows() != d)
      throw DimensionMismatch("factor dimension mismatch");
    IntervalModel m;
    m.dt = f.t_end - f.t_start;
    m.phi = f.phi_window;
    m.q = f.sigma;
    p.mean_knots.push_back(f.phi_window * p.mean_knots.back() + f.delta_x);
    p.cov_knots.push_back(f.phi_window * p.cov_knots.back() * f.phi_window.transpose() + f.sigma);
    p.intervals.push_back(std::move(m));
    p.times.push_back(f.t_end);
  }
  return solve_posterior(p, pos_meas);
}

JointGaussianFactor gp_preintegrate(const LiftedPrior& window_prior,
                                    const MeasurementStream& meas) {
  const std::size_t n = window_prior.num_knots();
  if (n < 2) throw EmptyWindow("window grid needs at least its two endpoint knots");
  const Eigen::Index d = window_prior.dim();

  Posterior post = solve_posterior(window_prior, meas);

  // Cross-covariance between the two endpoints: block row of the inverse
  // Hessian at the first knot, read off at the last knot.
  Eigen::MatrixXd e0 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n) * d, d);
  e0.topRows(d).setIdentity();
  const Eigen::MatrixXd col0 = solve_multi(post.factor, e0);

  JointGaussianFactor f;
  f.t_start = window_prior.times.front();
  f.t_end = window_prior.times.back();
  f.x_tilde_start = post.mean.blocks.front();
  f.x_tilde_end = post.mean.blocks.back();
  f.p_tilde.resize(2 * d, 2 * d);
  f.p_tilde.topLeftCorner(d, d) = post.cov.diag.front();
  f.p_tilde.bottomRightCorner(d, d) = post.cov.diag.back();
  f.p_tilde.bottomLeftCorner(d, d) = col0.bottomRows(d);
  f.p_tilde.topRightCorner(d, d) = col0.bottomRows(d).transpose();
  f.head_mean = window_prior.x0_mean;
  f.head_cov = window_prior.p0;
  return f;
}

ReducedSystem schur_marginalize(const BlockTriDiagSPD& l, const BlockVector& r,
                                const std::vector<std::size_t>& keep) {
  const std::size_t n = l.num_knots();
  const Eigen::Index d = l.block_dim();
  if (keep.empty()) throw GraphMismatch("kept index set is empty");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= n) throw GraphMismatch("kept index out of range");
    if (i > 0 && keep[i] <= keep[i - 1]) throw GraphMismatch("kept indices must be sorted and unique");
  }
  if (r.blocks.size() != n) throw DimensionMismatch("right-hand side size mismatch");

  const std::size_t nk = keep.size();
  ReducedSystem red;
  red.kept_indices = keep;
  red.l_small = BlockTriDiagSPD(nk, d);
  red.r_small = BlockVector(nk, d);
  for (std::size_t i = 0; i < nk; ++i) {
    red.l_small.diag[i] = l.diag[keep[i]];
    red.r_small.blocks[i] = r.blocks[keep[i]];
    if (i + 1 < nk && keep[i + 1] == keep[i] + 1)
      red.l_small.offdiag[i] = l.offdiag[keep[i]];
  }

  // One elimination per contiguous run of dropped knots. `left`/`right` are
  // the kept positions bounding the run, if any.
  struct Segment {
    std::size_t s, e;
    int left = -1, right = -1;
  };
  std::vector<Segment> segments;
  if (keep.front() > 0) segments.push_back({0, keep.front() - 1, -1, 0});
  for (std::size_t i = 0; i + 1 < nk; ++i)
    if (keep[i + 1] > keep[i] + 1)
      segments.push_back({keep[i] + 1, keep[i + 1] - 1, static_cast<int>(i), static_cast<int>(i + 1)});
  if (keep.back() + 1 < n)
    segments.push_back({keep.back() + 1, n - 1, static_cast<int>(nk - 1), -1});

  for (const auto& seg : segments) {
    const std::size_t m = seg.e - seg.s + 1;
    BlockTriDiagSPD sub(m, d);
    for (std::size_t i = 0; i < m; ++i) sub.diag[i] = l.diag[seg.s + i];
    for (std::size_t i = 0; i + 1 < m; ++i) sub.offdiag[i] = l.offdiag[seg.s + i];
    const BlockCholesky f = factorize(sub);

    // Couplings into the run: only its first and last knots touch kept ones.
    const Eigen::Index cols = (seg.left >= 0 ? d : 0) + (seg.right >= 0 ? d : 0) + 1;
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m) * d, cols);
    Eigen::Index c = 0;
    if (seg.left >= 0) {
      rhs.block(0, c, d, d) = l.offdiag[seg.s - 1];  // block (s, s-1)
      c += d;
    }
    if (seg.right >= 0) {
      rhs.block((m - 1) * d, c, d, d) = l.offdiag[seg.e].transpose();  // block (e, e+1)
      c += d;
    }
    for (std::size_t i = 0; i < m; ++i) rhs.block(i * d, c, d, 1) = r.blocks[seg.s + i];

    const Eigen::MatrixXd x = solve_multi(f, rhs);
    c = 0;
    Eigen::MatrixXd xa, xb;
    if (seg.left >= 0) {
      xa = x.middleCols(c, d);
      c += d;
    }
    if (seg.right >= 0) {
      xb = x.middleCols(c, d);
      c += d;
    }
    const Eigen::VectorXd xr = x.col(c);

    if (seg.left >= 0) {
      const Eigen::MatrixXd las = l.offdiag[seg.s - 1].transpose();  // block (s-1, s)
      red.l_small.diag[seg.left] -= las * xa.topRows(d);
      red.r_small.blocks[seg.left] -= las * xr.head(d);
    }
    if (seg.right >= 0) {
      const Eigen::MatrixXd lbs = l.offdiag[seg.e];  // block (e+1, e)
      red.l_small.diag[seg.right] -= lbs * xb.bottomRows(d);
      red.r_small.blocks[seg.right] -= lbs * xr.tail(d);
      if (seg.left >= 0) red.l_small.offdiag[seg.left] -= lbs * xa.bottomRows(d);
    }
  }
  return red;
}

Posterior measurement_endpoint_graph(const std::vector<JointGaussianFactor>& windows,
                                     const MeasurementStream& pos_meas,
                                     const Eigen::VectorXd& head_mean,
                                     const Eigen::MatrixXd& head_cov) {
  if (windows.empty()) throw GraphMismatch("no preintegrated windows");
  const Eigen::Index d = head_mean.size();
  const std::size_t n = windows.size() + 1;

  std::vector<double> times;
  times.reserve(n);
  times.push_back(windows.front().t_start);
  for (const auto& w : windows) {
    const double tol = 1e-9 * std::max(1.0, std::abs(w.t_end));
    if (std::abs(w.t_start - times.back()) > tol)
      throw GraphMismatch("windows must share endpoints without gaps or overlap");
    if (!(w.t_end > w.t_start)) throw GraphMismatch("window endpoints out of order");
    if (w.x_tilde_start.size() != d || w.p_tilde.rows() != 2 * d)
      throw DimensionMismatch("window dimension mismatch");
    times.push_back(w.t_end);
  }

  BlockTriDiagSPD info(n, d);
  BlockVector rhs(n, d);
  info.diag[0] = spd_inverse(head_cov);
  rhs.blocks[0] = info.diag[0] * head_mean;

  for (std::size_t w = 0; w < windows.size(); ++w) {
    const auto& jg = windows[w];
    const Eigen::MatrixXd j = spd_inverse(jg.p_tilde);
    Eigen::VectorXd xt(2 * d);
    xt << jg.x_tilde_start, jg.x_tilde_end;
    const Eigen::VectorXd eta = j * xt;

    // The window posterior already contains its head prior once; subtract it
    // so chaining windows leaves every factor counted exactly once.
    const Eigen::MatrixXd head_inv = spd_inverse(jg.head_cov);
    info.diag[w] += j.topLeftCorner(d, d) - head_inv;
    info.diag[w + 1] += j.bottomRightCorner(d, d);
    info.offdiag[w] += j.bottomLeftCorner(d, d);
    rhs.blocks[w] += eta.head(d) - head_inv * jg.head_mean;
    rhs.blocks[w + 1] += eta.tail(d);
  }

  for (const auto& item : pos_meas.items) {
    const std::size_t k = knot_index(times, item.time);
    if (item.c.cols() != d) throw DimensionMismatch("measurement projection has wrong state dimension");
    const Eigen::MatrixXd rinv = spd_inverse(item.r);
    info.diag[k] += item.c.transpose() * rinv * item.c;
    rhs.blocks[k] += item.c.transpose() * rinv * item.y;
  }

  Posterior post;
  post.factor = factorize(info);
  post.mean = solve(post.factor, rhs);
  post.cov = partial_inverse(post.factor);
  post.info = std::move(info);
  return post;
}

}  // namespace ctgp

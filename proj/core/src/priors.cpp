#include "ctgp/priors.hpp"

#include <array>
#include <cmath>

namespace ctgp {

namespace {

void check_interval(double dt) {
  if (!(dt > 0.0)) throw InvalidInterval("interval length must be positive, got " + std::to_string(dt));
}

// The closed forms are combinations of {u^j, u^j e^-u, u^j e^-2u} in u = alpha*dt.
// Near u = 0 they cancel to high order, so each one is also represented by its
// Taylor coefficients: c_n = poly[n] + sum_j e1[j] (-1)^(n-j)/(n-j)! + sum_j e2[j] (-2)^(n-j)/(n-j)!.
// All coefficients below `lead` cancel exactly and are skipped.
struct Bracket {
  std::array<double, 4> poly{};  // 1, u, u^2, u^3
  std::array<double, 4> e1{};    // e^-u, u e^-u, u^2 e^-u, u^3 e^-u
  std::array<double, 4> e2{};    // e^-2u, ...
  int lead = 0;
};

double series_eval(const Bracket& b, double u) {
  // (-1)^m/m! and (-2)^m/m! kept incrementally; coefficients of u^n collected
  // from all basis functions shifted by j.
  constexpr int kMaxTerms = 64;
  std::array<double, kMaxTerms + 4> em1, em2;
  em1[0] = 1.0;
  em2[0] = 1.0;
  for (int m = 1; m < kMaxTerms + 4; ++m) {
    em1[m] = em1[m - 1] * (-1.0) / m;
    em2[m] = em2[m - 1] * (-2.0) / m;
  }
  double sum = 0.0;
  double upow = 1.0;
  for (int n = b.lead; n < b.lead + kMaxTerms; ++n) {
    double c = (n < 4) ? b.poly[n] : 0.0;
    for (int j = 0; j < 4 && j <= n; ++j) {
      c += b.e1[j] * em1[n - j];
      c += b.e2[j] * em2[n - j];
    }
    const double term = c * upow;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && n > b.lead + 3) break;
    upow *= u;
  }
  return sum;
}

// Brackets for the covariance table at unit sigma2: Qbar_ij = 0.5 dt^lead * B(u)/u^lead.
const Bracket kB11{{1.0, 2.0, -2.0, 2.0 / 3.0}, {0.0, -4.0, 0.0, 0.0}, {-1.0, 0.0, 0.0, 0.0}, 5};
const Bracket kB12{{1.0, -2.0, 1.0, 0.0}, {-2.0, 2.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0}, 4};
const Bracket kB13{{1.0, 0.0, 0.0, 0.0}, {0.0, -2.0, 0.0, 0.0}, {-1.0, 0.0, 0.0, 0.0}, 3};
const Bracket kB22{{-3.0, 2.0, 0.0, 0.0}, {4.0, 0.0, 0.0, 0.0}, {-1.0, 0.0, 0.0, 0.0}, 3};
const Bracket kB23{{1.0, 0.0, 0.0, 0.0}, {-2.0, 0.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0}, 2};
const Bracket kB33{{1.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}, {-1.0, 0.0, 0.0, 0.0}, 1};

// Brackets for the alpha partials of the table: dQbar_ij/dalpha = dt^lead * D(u)/u^lead.
const Bracket kD11{{-2.5, -4.0, 3.0, -2.0 / 3.0}, {0.0, 8.0, 2.0, 0.0}, {2.5, 1.0, 0.0, 0.0}, 6};
const Bracket kD12{{-2.0, 3.0, -1.0, 0.0}, {4.0, -2.0, -1.0, 0.0}, {-2.0, -1.0, 0.0, 0.0}, 5};
const Bracket kD13{{-1.5, 0.0, 0.0, 0.0}, {0.0, 2.0, 1.0, 0.0}, {1.5, 1.0, 0.0, 0.0}, 4};
const Bracket kD22{{4.5, -2.0, 0.0, 0.0}, {-6.0, -2.0, 0.0, 0.0}, {1.5, 1.0, 0.0, 0.0}, 4};
const Bracket kD23{{-1.0, 0.0, 0.0, 0.0}, {2.0, 1.0, 0.0, 0.0}, {-1.0, -1.0, 0.0, 0.0}, 3};
const Bracket kD33{{-0.5, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}, {0.5, 1.0, 0.0, 0.0}, 2};

// Transition third column and its alpha partials: F(u)/u^lead scaled by dt powers.
const Bracket kF13{{-1.0, 1.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}, 2};
const Bracket kF23{{1.0, 0.0, 0.0, 0.0}, {-1.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}, 1};
const Bracket kE13{{2.0, -1.0, 0.0, 0.0}, {-2.0, -1.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}, 3};
const Bracket kE23{{-1.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}, 2};

// Cancellation in the closed forms grows as u shrinks; switch points chosen so
// each branch carries comfortably more accuracy than the consistency tests ask
// for on either side.
constexpr double kSeriesSwitchQ = 1.0;
constexpr double kSeriesSwitchJac = 2.0;

}  // namespace

namespace detail {

Eigen::Matrix3d singer_phi_closed(double dt, double alpha) {
  const double u = alpha * dt;
  const double e1 = std::exp(-u);
  Eigen::Matrix3d phi = Eigen::Matrix3d::Identity();
  phi(0, 1) = dt;
  phi(0, 2) = (u - 1.0 + e1) / (alpha * alpha);
  phi(1, 2) = (1.0 - e1) / alpha;
  phi(2, 2) = e1;
  return phi;
}

Eigen::Matrix3d singer_phi_series(double dt, double alpha) {
  const double u = alpha * dt;
  Eigen::Matrix3d phi = Eigen::Matrix3d::Identity();
  phi(0, 1) = dt;
  phi(0, 2) = dt * dt * series_eval(kF13, u);
  phi(1, 2) = dt * series_eval(kF23, u);
  phi(2, 2) = std::exp(-u);
  return phi;
}

Eigen::Matrix3d singer_qbar_closed(double dt, double alpha) {
  const double u = alpha * dt;
  const double e1 = std::exp(-u);
  const double e2 = std::exp(-2.0 * u);
  const double a1 = 1.0 / alpha;
  const double a2 = a1 * a1;
  const double a3 = a2 * a1;
  const double a4 = a3 * a1;
  const double a5 = a4 * a1;

  Eigen::Matrix3d q;
  q(0, 0) = 0.5 * a5 * (1.0 - e2 + 2.0 * u + (2.0 / 3.0) * u * u * u - 2.0 * u * u - 4.0 * u * e1);
  q(0, 1) = 0.5 * a4 * (e2 + 1.0 - 2.0 * e1 + 2.0 * u * e1 - 2.0 * u + u * u);
  q(0, 2) = 0.5 * a3 * (1.0 - e2 - 2.0 * u * e1);
  q(1, 1) = 0.5 * a3 * (4.0 * e1 - 3.0 - e2 + 2.0 * u);
  q(1, 2) = 0.5 * a2 * (e2 + 1.0 - 2.0 * e1);
  q(2, 2) = 0.5 * a1 * (1.0 - e2);
  q(1, 0) = q(0, 1);
  q(2, 0) = q(0, 2);
  q(2, 1) = q(1, 2);
  return q;
}

Eigen::Matrix3d singer_qbar_series(double dt, double alpha) {
  const double u = alpha * dt;
  const double t2 = dt * dt;
  const double t3 = t2 * dt;
  Eigen::Matrix3d q;
  q(0, 0) = 0.5 * t3 * t2 * series_eval(kB11, u);
  q(0, 1) = 0.5 * t2 * t2 * series_eval(kB12, u);
  q(0, 2) = 0.5 * t3 * series_eval(kB13, u);
  q(1, 1) = 0.5 * t3 * series_eval(kB22, u);
  q(1, 2) = 0.5 * t2 * series_eval(kB23, u);
  q(2, 2) = 0.5 * dt * series_eval(kB33, u);
  q(1, 0) = q(0, 1);
  q(2, 0) = q(0, 2);
  q(2, 1) = q(1, 2);
  return q;
}

QAlphaJacobian q_alpha_jacobian_closed(double dt, double alpha) {
  const double u = alpha * dt;
  const double e1 = std::exp(-u);
  const double e2 = std::exp(-2.0 * u);
  const double a1 = 1.0 / alpha;
  const double a2 = a1 * a1;
  const double a3 = a2 * a1;
  const double a4 = a3 * a1;
  const double a5 = a4 * a1;
  const double a6 = a5 * a1;
  const double t = dt;
  const double t2 = t * t;
  const double t3 = t2 * t;

  QAlphaJacobian j;
  j.dq.setZero();
  j.dq(0, 0) = -2.0 * t3 / 3.0 * a3 + t2 * (2.0 * e1 + 3.0) * a4 + 2.5 * (e2 - 1.0) * a6 +
               t * (e2 + 8.0 * e1 - 4.0) * a5;
  j.dq(0, 1) = -t2 * (e1 + 1.0) * a3 + t * (3.0 - e2 - 2.0 * e1) * a4 +
               (4.0 * e1 - 2.0 * e2 - 2.0) * a5;
  j.dq(0, 2) = t2 * e1 * a2 + 1.5 * (e2 - 1.0) * a4 + t * (e2 + 2.0 * e1) * a3;
  j.dq(1, 1) = 0.5 * (3.0 * e2 - 12.0 * e1 + 9.0) * a4 + t * (e2 - 2.0 * e1 - 2.0) * a3;
  j.dq(1, 2) = (2.0 * e1 - e2 - 1.0) * a3 + t * (e1 - e2) * a2;
  j.dq(2, 2) = 0.5 * (e2 - 1.0) * a2 + t * e2 * a1;
  j.dq(1, 0) = j.dq(0, 1);
  j.dq(2, 0) = j.dq(0, 2);
  j.dq(2, 1) = j.dq(1, 2);

  j.dphi.setZero();
  j.dphi(0, 2) = 2.0 * (1.0 - e1) * a3 - t * (e1 + 1.0) * a2;
  j.dphi(1, 2) = (e1 - 1.0) * a2 + t * e1 * a1;
  j.dphi(2, 2) = -t * e1;
  return j;
}

QAlphaJacobian q_alpha_jacobian_series(double dt, double alpha) {
  const double u = alpha * dt;
  const double t2 = dt * dt;
  const double t3 = t2 * dt;
  QAlphaJacobian j;
  j.dq.setZero();
  j.dq(0, 0) = t3 * t3 * series_eval(kD11, u);
  j.dq(0, 1) = t3 * t2 * series_eval(kD12, u);
  j.dq(0, 2) = t2 * t2 * series_eval(kD13, u);
  j.dq(1, 1) = t2 * t2 * series_eval(kD22, u);
  j.dq(1, 2) = t3 * series_eval(kD23, u);
  j.dq(2, 2) = t2 * series_eval(kD33, u);
  j.dq(1, 0) = j.dq(0, 1);
  j.dq(2, 0) = j.dq(0, 2);
  j.dq(2, 1) = j.dq(1, 2);

  j.dphi.setZero();
  j.dphi(0, 2) = t3 * series_eval(kE13, u);
  j.dphi(1, 2) = t2 * series_eval(kE23, u);
  j.dphi(2, 2) = -dt * std::exp(-u);
  return j;
}

}  // namespace detail

Eigen::Matrix3d singer_phi(double dt, double alpha) {
  check_interval(dt);
  if (alpha < 0.0 || !std::isfinite(alpha)) throw InvalidInterval("alpha must be finite and nonnegative");
  const double u = alpha * dt;
  if (u < kSeriesSwitchQ) return detail::singer_phi_series(dt, alpha);
  return detail::singer_phi_closed(dt, alpha);
}

Eigen::Matrix3d singer_q(double dt, double alpha, double sigma2) {
  check_interval(dt);
  if (alpha < 0.0 || !std::isfinite(alpha)) throw InvalidInterval("alpha must be finite and nonnegative");
  if (!(sigma2 > 0.0)) throw InvalidInterval("sigma2 must be positive");
  const double u = alpha * dt;
  Eigen::Matrix3d qbar =
      (u < kSeriesSwitchQ) ? detail::singer_qbar_series(dt, alpha) : detail::singer_qbar_closed(dt, alpha);
  return sigma2 * qbar;
}

QAlphaJacobian q_alpha_jacobian(double dt, double alpha) {
  check_interval(dt);
  if (alpha < 0.0 || !std::isfinite(alpha)) throw InvalidInterval("alpha must be finite and nonnegative");
  const double u = alpha * dt;
  if (u < kSeriesSwitchJac) return detail::q_alpha_jacobian_series(dt, alpha);
  return detail::q_alpha_jacobian_closed(dt, alpha);
}

std::pair<Eigen::Matrix3d, Eigen::Matrix3d> wnoj_phi_q(double dt, double qc) {
  check_interval(dt);
  const double t2 = dt * dt;
  const double t3 = t2 * dt;
  const double t4 = t3 * dt;
  const double t5 = t4 * dt;
  Eigen::Matrix3d phi = Eigen::Matrix3d::Identity();
  phi(0, 1) = dt;
  phi(0, 2) = 0.5 * t2;
  phi(1, 2) = dt;
  Eigen::Matrix3d q;
  q << t5 / 20.0, t4 / 8.0, t3 / 6.0,
       t4 / 8.0, t3 / 3.0, t2 / 2.0,
       t3 / 6.0, t2 / 2.0, dt;
  return {phi, qc * q};
}

std::pair<Eigen::Matrix2d, Eigen::Matrix2d> wnoa_phi_q(double dt, double qc) {
  check_interval(dt);
  const double t2 = dt * dt;
  Eigen::Matrix2d phi = Eigen::Matrix2d::Identity();
  phi(0, 1) = dt;
  Eigen::Matrix2d q;
  q << t2 * dt / 3.0, t2 / 2.0,
       t2 / 2.0, dt;
  return {phi, qc * q};
}

}  // namespace ctgp

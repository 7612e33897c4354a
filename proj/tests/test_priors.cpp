#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "ctgp/priors.hpp"
#include "oracles.hpp"

namespace {

Eigen::Matrix3d drift(double alpha) {
  Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
  a(0, 1) = 1.0;
  a(1, 2) = 1.0;
  a(2, 2) = -alpha;
  return a;
}

const Eigen::Vector3d kInput(0.0, 0.0, 1.0);

Eigen::Matrix3d wnoj_q_ref(double dt, double qc) {
  Eigen::Matrix3d q;
  const double t2 = dt * dt, t3 = t2 * dt, t4 = t3 * dt, t5 = t4 * dt;
  q << t5 / 20.0, t4 / 8.0, t3 / 6.0, t4 / 8.0, t3 / 3.0, t2 / 2.0, t3 / 6.0, t2 / 2.0, dt;
  return qc * q;
}

}  // namespace

TEST_SUITE("priors") {

TEST_CASE("transition at alpha zero is the constant-acceleration transition") {
  const Eigen::Matrix3d phi = ctgp::singer_phi(0.1, 0.0);
  CHECK(phi(0, 0) == 1.0);
  CHECK(phi(0, 1) == 0.1);
  CHECK(phi(0, 2) == doctest::Approx(0.005).epsilon(1e-15));
  CHECK(phi(1, 2) == 0.1);
  CHECK(phi(2, 2) == 1.0);
  CHECK(phi(1, 0) == 0.0);
  // Exact agreement with the dedicated kernel, not just approximate.
  const auto [wphi, wq] = ctgp::wnoj_phi_q(0.1, 1.0);
  CHECK((phi - wphi).norm() == 0.0);
}

TEST_CASE("transition large-alpha limit drops the acceleration column") {
  const Eigen::Matrix3d phi = ctgp::singer_phi(1.0, 1e8);
  CHECK(std::abs(phi(0, 2)) < 1e-6);
  CHECK(std::abs(phi(1, 2)) < 1e-6);
  CHECK(std::abs(phi(2, 2)) < 1e-6);
}

TEST_CASE("transition matches the matrix exponential") {
  CHECK(oracle::rel_err(ctgp::singer_phi(0.5, 10.0), oracle::expm(drift(10.0) * 0.5)) < 1e-10);
  for (double alpha : {1e-3, 0.1, 1.0, 5.0, 20.0, 100.0}) {
    for (double dt : {1e-3, 0.01, 0.1, 1.0, 10.0}) {
      CHECK(oracle::rel_err(ctgp::singer_phi(dt, alpha), oracle::expm(drift(alpha) * dt)) < 1e-10);
    }
  }
}

TEST_CASE("transition semigroup") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.05, 1.5);
  for (double alpha : {0.0, 0.3, 2.0, 15.0, 200.0}) {
    for (int i = 0; i < 5; ++i) {
      const double a = u(gen), b = u(gen);
      const Eigen::Matrix3d lhs = ctgp::singer_phi(a + b, alpha);
      const Eigen::Matrix3d rhs = ctgp::singer_phi(b, alpha) * ctgp::singer_phi(a, alpha);
      CHECK(oracle::rel_err(lhs, rhs) < 1e-12);
    }
  }
}

TEST_CASE("process noise tends to the jerk kernel as alpha goes to zero") {
  const Eigen::Matrix3d q = ctgp::singer_q(1.0, 1e-8, 1.0);
  Eigen::Matrix3d ref;
  ref << 1.0 / 20, 1.0 / 8, 1.0 / 6, 1.0 / 8, 1.0 / 3, 1.0 / 2, 1.0 / 6, 1.0 / 2, 1.0;
  CHECK(oracle::rel_err(q, ref) < 1e-6);
  for (double dt : {0.01, 0.1, 0.5, 2.0}) {
    for (double s2 : {1.0, 3.5}) {
      CHECK(oracle::rel_err(ctgp::singer_q(dt, 1e-8, s2), wnoj_q_ref(dt, s2)) < 1e-6);
    }
  }
}

TEST_CASE("process noise large-alpha velocity variance") {
  // For large alpha the acceleration decorrelates instantly and the velocity
  // random walk has effective density sigma2/alpha^2.
  const double q22 = ctgp::singer_q(1.0, 1e4, 1.0)(1, 1);
  CHECK(oracle::rel_err(q22, 1e-8) < 1e-3);
}

TEST_CASE("process noise matches quadrature") {
  // The variance parameter is the white-noise density of the driving jerk
  // SDE: that normalization is pinned by the alpha -> 0 limit above.
  const Eigen::Matrix3d q = ctgp::singer_q(0.01, 10.0, 2.0);
  const Eigen::Matrix3d ref = oracle::q_by_quadrature(drift(10.0), kInput, 2.0, 0.01, 1e-13 * q.norm());
  CHECK(oracle::rel_err(q, ref) < 1e-8);
  for (double alpha : {0.3, 1.0, 3.0, 30.0}) {
    for (double dt : {0.05, 0.5, 2.0}) {
      const Eigen::Matrix3d got = ctgp::singer_q(dt, alpha, 1.0);
      const Eigen::Matrix3d want =
          oracle::q_by_quadrature(drift(alpha), kInput, 1.0, dt, 1e-13 * got.norm());
      CHECK(oracle::rel_err(got, want) < 1e-8);
    }
  }
}

TEST_CASE("process noise accumulates across subintervals") {
  for (double alpha : {0.0, 0.7, 8.0}) {
    const double a = 0.3, b = 0.45;
    const Eigen::Matrix3d phi_b = ctgp::singer_phi(b, alpha);
    const Eigen::Matrix3d lhs = ctgp::singer_q(a + b, alpha, 1.3);
    const Eigen::Matrix3d rhs =
        phi_b * ctgp::singer_q(a, alpha, 1.3) * phi_b.transpose() + ctgp::singer_q(b, alpha, 1.3);
    CHECK(oracle::rel_err(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("variance scales linearly") {
  const Eigen::Matrix3d q1 = ctgp::singer_q(0.13, 4.2, 1.0);
  const Eigen::Matrix3d q2 = ctgp::singer_q(0.13, 4.2, 2.5);
  CHECK(oracle::rel_err(q2, Eigen::Matrix3d(2.5 * q1)) < 1e-15);
}

TEST_CASE("constant-velocity kernel") {
  const auto [phi, q] = ctgp::wnoa_phi_q(1.0, 1.0);
  Eigen::Matrix2d phi_ref;
  phi_ref << 1.0, 1.0, 0.0, 1.0;
  CHECK((phi - phi_ref).norm() == 0.0);
  Eigen::Matrix2d a = Eigen::Matrix2d::Zero();
  a(0, 1) = 1.0;
  const Eigen::MatrixXd q_ref =
      oracle::q_by_quadrature(a, Eigen::Vector2d(0.0, 1.0), 1.0, 1.0, 1e-15);
  CHECK(oracle::rel_err(q, q_ref) < 1e-10);
  CHECK(q(0, 0) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(q(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(q(1, 1) == doctest::Approx(1.0).epsilon(1e-14));

  const auto [pa, qa] = ctgp::wnoa_phi_q(0.4, 1.0);
  const auto [pb, qb] = ctgp::wnoa_phi_q(0.35, 1.0);
  const auto [pc, qc] = ctgp::wnoa_phi_q(0.75, 1.0);
  CHECK(oracle::rel_err(pc, Eigen::Matrix2d(pb * pa)) < 1e-15);
}

TEST_CASE("constant-acceleration kernel") {
  const auto [phi, q] = ctgp::wnoj_phi_q(2.0, 1.0);
  CHECK(q(0, 0) == doctest::Approx(1.6).epsilon(1e-14));
  CHECK(oracle::rel_err(q, wnoj_q_ref(2.0, 1.0)) < 1e-14);
  CHECK(oracle::rel_err(q, oracle::q_by_quadrature(drift(0.0), kInput, 1.0, 2.0, 1e-14)) < 1e-10);
}

TEST_CASE("series and closed branches agree on the overlap") {
  // Switch points sit at u = 1 (covariance) and u = 2 (partials); both
  // branches hold far more than 1e-8 on either side of them.
  for (double u : {0.5, 0.8, 0.9, 1.0, 1.1, 1.5, 2.0, 3.0}) {
    for (double dt : {0.1, 1.0}) {
      const double alpha = u / dt;
      CHECK(oracle::rel_err(ctgp::detail::singer_qbar_closed(dt, alpha),
                            ctgp::detail::singer_qbar_series(dt, alpha)) < 1e-8);
      CHECK(oracle::rel_err(ctgp::detail::singer_phi_closed(dt, alpha),
                            ctgp::detail::singer_phi_series(dt, alpha)) < 1e-10);
    }
  }
  for (double u : {1.5, 2.0, 2.5, 3.5, 4.0, 4.5}) {
    for (double dt : {0.1, 1.0}) {
      const double alpha = u / dt;
      const auto closed = ctgp::detail::q_alpha_jacobian_closed(dt, alpha);
      const auto series = ctgp::detail::q_alpha_jacobian_series(dt, alpha);
      CHECK(oracle::rel_err(closed.dq, series.dq) < 1e-8);
      CHECK(oracle::rel_err(closed.dphi, series.dphi) < 1e-8);
    }
  }
}

TEST_CASE("process noise positive definite across the parameter grid") {
  for (double dt : {2e-4, 1e-3, 1e-2, 0.1, 1.0, 10.0}) {
    for (double alpha : {0.0, 0.5, 1.0, 10.0, 100.0, 1000.0}) {
      for (double s2 : {0.01, 1.0, 100.0}) {
        const Eigen::Matrix3d q = ctgp::singer_q(dt, alpha, s2);
        CHECK((q - q.transpose()).norm() == 0.0);
        Eigen::LLT<Eigen::Matrix3d> llt(q);
        CHECK(llt.info() == Eigen::Success);
      }
    }
  }
}

TEST_CASE("alpha partials match finite differences") {
  auto check_point = [](double dt, double alpha, double tol) {
    const auto jac = ctgp::q_alpha_jacobian(dt, alpha);
    const double h = std::max(1e-6, 1e-6 * alpha);
    const Eigen::Matrix3d dq_fd =
        (ctgp::singer_q(dt, alpha + h, 1.0) - ctgp::singer_q(dt, alpha - h, 1.0)) / (2.0 * h);
    const Eigen::Matrix3d dphi_fd =
        (ctgp::singer_phi(dt, alpha + h) - ctgp::singer_phi(dt, alpha - h)) / (2.0 * h);
    CHECK(oracle::rel_err(jac.dq, dq_fd) < tol);
    CHECK(oracle::rel_err(jac.dphi, dphi_fd) < tol);
  };

  check_point(0.1, 6.0, 1e-5);
  check_point(0.1, 0.5, 1e-4);

  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> logalpha(std::log(0.2), std::log(50.0));
  std::uniform_real_distribution<double> dts(0.005, 0.2);
  for (int i = 0; i < 20; ++i) check_point(dts(gen), std::exp(logalpha(gen)), 1e-4);
}

TEST_CASE("sigma2 partial is the unit-variance table") {
  const double dt = 0.07, alpha = 3.0, h = 1e-6;
  const Eigen::Matrix3d fd =
      (ctgp::singer_q(dt, alpha, 1.0 + h) - ctgp::singer_q(dt, alpha, 1.0 - h)) / (2.0 * h);
  CHECK(oracle::rel_err(fd, ctgp::singer_q(dt, alpha, 1.0)) < 1e-9);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(ctgp::singer_phi(0.0, 1.0), ctgp::InvalidInterval);
  CHECK_THROWS_AS(ctgp::singer_phi(-0.1, 1.0), ctgp::InvalidInterval);
  CHECK_THROWS_AS(ctgp::singer_phi(0.1, -1.0), ctgp::InvalidInterval);
  CHECK_THROWS_AS(ctgp::singer_q(0.1, 1.0, 0.0), ctgp::InvalidInterval);
  CHECK_THROWS_AS(ctgp::singer_q(0.1, 1.0, -2.0), ctgp::InvalidInterval);
  CHECK_THROWS_AS(ctgp::wnoa_phi_q(0.0, 1.0), ctgp::InvalidInterval);
  CHECK_THROWS_AS(ctgp::wnoj_phi_q(-1.0, 1.0), ctgp::InvalidInterval);
  CHECK_THROWS_AS(ctgp::q_alpha_jacobian(0.0, 1.0), ctgp::InvalidInterval);
}

}  // TEST_SUITE

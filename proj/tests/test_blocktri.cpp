#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "ctgp/blocktri.hpp"
#include "oracles.hpp"

using ctgp::BlockCholesky;
using ctgp::BlockTriDiagSPD;
using ctgp::BlockVector;

namespace {

// Random SPD block-tridiagonal built from a random lower block-bidiagonal
// factor with positive diagonal, so M = G G^T is SPD by construction.
BlockTriDiagSPD random_instance(std::size_t knots, int d, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  std::vector<Eigen::MatrixXd> gdiag(knots), goff(knots > 0 ? knots - 1 : 0);
  for (std::size_t k = 0; k < knots; ++k) {
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < i; ++j) l(i, j) = 0.3 * normal(gen);
      l(i, i) = 0.5 + std::abs(normal(gen));
    }
    gdiag[k] = l;
    if (k + 1 < knots) {
      goff[k] = Eigen::MatrixXd::NullaryExpr(d, d, [&](Eigen::Index, Eigen::Index) {
        return 0.3 * normal(gen);
      });
    }
  }
  BlockTriDiagSPD m(knots, d);
  for (std::size_t k = 0; k < knots; ++k) {
    m.diag[k] = gdiag[k] * gdiag[k].transpose();
    if (k > 0) m.diag[k] += goff[k - 1] * goff[k - 1].transpose();
    if (k + 1 < knots) m.offdiag[k] = goff[k] * gdiag[k].transpose();
  }
  return m;
}

BlockVector random_rhs(std::size_t knots, int d, std::mt19937_64& gen) {
  BlockVector b(knots, d);
  for (auto& blk : b.blocks) blk = oracle::random_vec(d, gen);
  return b;
}

BlockTriDiagSPD scalar_tridiag_211() {
  BlockTriDiagSPD m(3, 1);
  for (auto& blk : m.diag) blk(0, 0) = 2.0;
  for (auto& blk : m.offdiag) blk(0, 0) = -1.0;
  return m;
}

}  // namespace

TEST_SUITE("blocktri") {

TEST_CASE("scalar factorization") {
  BlockTriDiagSPD m(1, 1);
  m.diag[0](0, 0) = 4.0;
  const BlockCholesky f = ctgp::factorize(m);
  CHECK(f.diag[0](0, 0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("identity factorizes to identity") {
  BlockTriDiagSPD m(4, 3);
  for (auto& blk : m.diag) blk = Eigen::Matrix3d::Identity();
  const BlockCholesky f = ctgp::factorize(m);
  for (const auto& blk : f.diag) CHECK(oracle::rel_err(blk, Eigen::Matrix3d::Identity()) < 1e-15);
  for (const auto& blk : f.off) CHECK(blk.norm() < 1e-15);
  CHECK(ctgp::log_det(f) == doctest::Approx(0.0));
}

TEST_CASE("log det of scalar e") {
  BlockTriDiagSPD m(1, 1);
  m.diag[0](0, 0) = std::exp(1.0);
  CHECK(ctgp::log_det(ctgp::factorize(m)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("tridiag(2,-1) worked example") {
  const BlockTriDiagSPD m = scalar_tridiag_211();
  const BlockCholesky f = ctgp::factorize(m);

  BlockVector b(3, 1);
  b.blocks[0](0) = 1.0;
  const BlockVector x = ctgp::solve(f, b);
  CHECK(x.blocks[0](0) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(x.blocks[1](0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(x.blocks[2](0) == doctest::Approx(0.25).epsilon(1e-14));

  const BlockTriDiagSPD inv = ctgp::partial_inverse(f);
  CHECK(inv.diag[0](0, 0) == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(inv.diag[1](0, 0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(inv.diag[2](0, 0) == doctest::Approx(0.75).epsilon(1e-13));
}

TEST_CASE("identity solve returns rhs and identity partial inverse") {
  std::mt19937_64 gen(11);
  BlockTriDiagSPD m(5, 2);
  for (auto& blk : m.diag) blk = Eigen::Matrix2d::Identity();
  const BlockCholesky f = ctgp::factorize(m);
  const BlockVector b = random_rhs(5, 2, gen);
  const BlockVector x = ctgp::solve(f, b);
  for (std::size_t k = 0; k < 5; ++k) CHECK((x.blocks[k] - b.blocks[k]).norm() < 1e-15);
  const BlockTriDiagSPD inv = ctgp::partial_inverse(f);
  for (const auto& blk : inv.diag) CHECK(oracle::rel_err(blk, Eigen::Matrix2d::Identity()) < 1e-14);
  for (const auto& blk : inv.offdiag) CHECK(blk.norm() < 1e-14);
}

TEST_CASE("factor reconstructs the input") {
  std::mt19937_64 gen(42);
  const BlockTriDiagSPD m = random_instance(6, 3, gen);
  const BlockCholesky f = ctgp::factorize(m);
  // Reassemble L L^T densely.
  const Eigen::Index n = 6 * 3;
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < 6; ++k) {
    l.block(3 * k, 3 * k, 3, 3) = f.diag[k];
    if (k + 1 < 6) l.block(3 * (k + 1), 3 * k, 3, 3) = f.off[k];
  }
  CHECK(oracle::rel_err(l * l.transpose(), ctgp::dense_assemble(m)) < 1e-12);
}

TEST_CASE("dense oracle grid") {
  // solve, log_det, and partial_inverse against dense factorizations for
  // every K <= 8, D <= 4.
  std::mt19937_64 gen(7);
  for (std::size_t knots = 1; knots <= 9; ++knots) {
    for (int d = 1; d <= 4; ++d) {
      const BlockTriDiagSPD m = random_instance(knots, d, gen);
      const Eigen::MatrixXd dense = ctgp::dense_assemble(m);
      const BlockCholesky f = ctgp::factorize(m);

      const BlockVector b = random_rhs(knots, d, gen);
      const Eigen::VectorXd x = ctgp::solve(f, b).stacked();
      const Eigen::VectorXd x_ref = dense.ldlt().solve(b.stacked());
      CHECK(oracle::rel_err(x, x_ref) < 1e-10);

      const Eigen::MatrixXd dense_l = dense.llt().matrixL();
      const double logdet_ref = 2.0 * dense_l.diagonal().array().log().sum();
      CHECK(oracle::rel_err(ctgp::log_det(f), logdet_ref) < 1e-10);

      const Eigen::MatrixXd inv_ref = dense.inverse();
      const BlockTriDiagSPD inv = ctgp::partial_inverse(f);
      for (std::size_t k = 0; k < knots; ++k) {
        CHECK(oracle::rel_err(inv.diag[k], inv_ref.block(k * d, k * d, d, d)) < 1e-10);
        if (k + 1 < knots)
          CHECK(oracle::rel_err(inv.offdiag[k], inv_ref.block((k + 1) * d, k * d, d, d)) < 1e-10);
      }
    }
  }
}

TEST_CASE("solve_multi matches per-column solves") {
  std::mt19937_64 gen(13);
  const BlockTriDiagSPD m = random_instance(5, 3, gen);
  const BlockCholesky f = ctgp::factorize(m);
  Eigen::MatrixXd rhs(15, 4);
  for (int c = 0; c < 4; ++c) rhs.col(c) = oracle::random_vec(15, gen);
  const Eigen::MatrixXd x = ctgp::solve_multi(f, rhs);
  for (int c = 0; c < 4; ++c) {
    BlockVector b(5, 3);
    for (std::size_t k = 0; k < 5; ++k) b.blocks[k] = rhs.col(c).segment(3 * k, 3);
    CHECK(oracle::rel_err(Eigen::MatrixXd(x.col(c)),
                          Eigen::MatrixXd(ctgp::solve(f, b).stacked())) < 1e-13);
  }
}

TEST_CASE("solve residual") {
  std::mt19937_64 gen(99);
  const BlockTriDiagSPD m = random_instance(40, 3, gen);
  const BlockCholesky f = ctgp::factorize(m);
  const BlockVector b = random_rhs(40, 3, gen);
  const BlockVector x = ctgp::solve(f, b);
  const BlockVector mx = ctgp::tridiag_mul(m, x);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < 40; ++k) {
    num += (mx.blocks[k] - b.blocks[k]).squaredNorm();
    den += b.blocks[k].squaredNorm();
  }
  CHECK(std::sqrt(num / den) < 1e-10);
}

TEST_CASE("dense_assemble layout and round trip") {
  BlockTriDiagSPD m(2, 1);
  m.diag[0](0, 0) = 2.0;
  m.diag[1](0, 0) = 2.0;
  m.offdiag[0](0, 0) = -1.0;
  Eigen::MatrixXd expected(2, 2);
  expected << 2.0, -1.0, -1.0, 2.0;
  CHECK((ctgp::dense_assemble(m) - expected).norm() == 0.0);

  BlockTriDiagSPD single(1, 2);
  single.diag[0] << 3.0, 1.0, 1.0, 2.0;
  CHECK((ctgp::dense_assemble(single) - single.diag[0]).norm() == 0.0);

  std::mt19937_64 gen(3);
  const BlockTriDiagSPD r = random_instance(4, 2, gen);
  const Eigen::MatrixXd dense = ctgp::dense_assemble(r);
  CHECK((dense - dense.transpose()).norm() == 0.0);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK((dense.block(2 * k, 2 * k, 2, 2) - r.diag[k]).norm() == 0.0);
    if (k + 1 < 4) CHECK((dense.block(2 * (k + 1), 2 * k, 2, 2) - r.offdiag[k]).norm() == 0.0);
  }
}

TEST_CASE("tridiag_mul matches dense product") {
  std::mt19937_64 gen(17);
  const BlockTriDiagSPD m = random_instance(7, 3, gen);
  const BlockVector v = random_rhs(7, 3, gen);
  const Eigen::VectorXd ref = ctgp::dense_assemble(m) * v.stacked();
  CHECK(oracle::rel_err(Eigen::MatrixXd(ctgp::tridiag_mul(m, v).stacked()),
                        Eigen::MatrixXd(ref)) < 1e-14);
}

TEST_CASE("indefinite matrix is rejected") {
  BlockTriDiagSPD m(2, 1);
  m.diag[0](0, 0) = 1.0;
  m.diag[1](0, 0) = 1.0;
  m.offdiag[0](0, 0) = 2.0;
  CHECK_THROWS_AS(ctgp::factorize(m), ctgp::NotPositiveDefinite);
}

TEST_CASE("shape errors") {
  CHECK_THROWS_AS(ctgp::factorize(BlockTriDiagSPD{}), ctgp::DimensionMismatch);

  BlockTriDiagSPD ragged(3, 2);
  ragged.diag[1] = Eigen::Matrix3d::Identity();
  ragged.diag[0] = Eigen::Matrix2d::Identity();
  ragged.diag[2] = Eigen::Matrix2d::Identity();
  CHECK_THROWS_AS(ctgp::factorize(ragged), ctgp::DimensionMismatch);

  BlockTriDiagSPD m(3, 2);
  for (auto& blk : m.diag) blk = Eigen::Matrix2d::Identity();
  const BlockCholesky f = ctgp::factorize(m);
  CHECK_THROWS_AS(ctgp::solve(f, BlockVector(2, 2)), ctgp::DimensionMismatch);
  BlockVector wrong(3, 3);
  CHECK_THROWS_AS(ctgp::solve(f, wrong), ctgp::DimensionMismatch);
}

}  // TEST_SUITE

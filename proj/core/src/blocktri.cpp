#include "ctgp/blocktri.hpp"

#include <cmath>

namespace ctgp {

namespace {

void check_shape(const BlockTriDiagSPD& m) {
  if (m.diag.empty()) throw DimensionMismatch("block-tridiagonal matrix has no blocks");
  if (m.offdiag.size() + 1 != m.diag.size())
    throw DimensionMismatch("off-diagonal block count must be one less than diagonal count");
  const Eigen::Index d = m.diag.front().rows();
  for (const auto& b : m.diag)
    if (b.rows() != d || b.cols() != d) throw DimensionMismatch("ragged diagonal blocks");
  for (const auto& b : m.offdiag)
    if (b.rows() != d || b.cols() != d) throw DimensionMismatch("ragged off-diagonal blocks");
}

}  // namespace

BlockCholesky factorize(const BlockTriDiagSPD& m) {
  check_shape(m);
  const std::size_t n = m.diag.size();

  BlockCholesky f;
  f.diag.resize(n);
  f.off.resize(n - 1);

  // S starts as M_00; after each step it is the Schur-complement pivot.
  Eigen::MatrixXd s = m.diag[0];
  for (std::size_t k = 0; k < n; ++k) {
    Eigen::LLT<Eigen::MatrixXd> llt(s);
    if (llt.info() != Eigen::Success)
      throw NotPositiveDefinite("pivot block " + std::to_string(k) + " is not positive definite");
    f.diag[k] = llt.matrixL();
    if (k + 1 < n) {
      // L_{k+1,k} = M_{k+1,k} L_kk^{-T}
      f.off[k] = f.diag[k]
                     .triangularView<Eigen::Lower>()
                     .solve(m.offdiag[k].transpose())
                     .transpose();
      s = m.diag[k + 1] - f.off[k] * f.off[k].transpose();
    }
  }
  return f;
}

BlockVector solve(const BlockCholesky& f, const BlockVector& b) {
  if (b.blocks.size() != f.diag.size())
    throw DimensionMismatch("right-hand side has wrong number of blocks");
  const std::size_t n = f.diag.size();
  const Eigen::Index d = f.diag.front().rows();
  for (const auto& blk : b.blocks)
    if (blk.size() != d) throw DimensionMismatch("right-hand side block size mismatch");

  BlockVector y(n, d);
  y.blocks[0] = f.diag[0].triangularView<Eigen::Lower>().solve(b.blocks[0]);
  for (std::size_t k = 1; k < n; ++k)
    y.blocks[k] = f.diag[k].triangularView<Eigen::Lower>().solve(
        b.blocks[k] - f.off[k - 1] * y.blocks[k - 1]);

  BlockVector x(n, d);
  x.blocks[n - 1] =
      f.diag[n - 1].transpose().triangularView<Eigen::Upper>().solve(y.blocks[n - 1]);
  for (std::size_t k = n - 1; k-- > 0;)
    x.blocks[k] = f.diag[k].transpose().triangularView<Eigen::Upper>().solve(
        y.blocks[k] - f.off[k].transpose() * x.blocks[k + 1]);
  return x;
}

Eigen::MatrixXd solve_multi(const BlockCholesky& f, const Eigen::MatrixXd& b) {
  const std::size_t n = f.diag.size();
  const Eigen::Index d = f.diag.front().rows();
  if (b.rows() != static_cast<Eigen::Index>(n) * d)
    throw DimensionMismatch("right-hand side has wrong row count");

  Eigen::MatrixXd y(b.rows(), b.cols());
  y.middleRows(0, d) = f.diag[0].triangularView<Eigen::Lower>().solve(b.middleRows(0, d));
  for (std::size_t k = 1; k < n; ++k)
    y.middleRows(k * d, d) = f.diag[k].triangularView<Eigen::Lower>().solve(
        b.middleRows(k * d, d) - f.off[k - 1] * y.middleRows((k - 1) * d, d));

  Eigen::MatrixXd x(b.rows(), b.cols());
  x.middleRows((n - 1) * d, d) = f.diag[n - 1]
                                     .transpose()
                                     .triangularView<Eigen::Upper>()
                                     .solve(y.middleRows((n - 1) * d, d));
  for (std::size_t k = n - 1; k-- > 0;)
    x.middleRows(k * d, d) = f.diag[k].transpose().triangularView<Eigen::Upper>().solve(
        y.middleRows(k * d, d) - f.off[k].transpose() * x.middleRows((k + 1) * d, d));
  return x;
}

double log_det(const BlockCholesky& f) {
  double acc = 0.0;
  for (const auto& l : f.diag) acc += l.diagonal().array().log().sum();
  return 2.0 * acc;
}

BlockTriDiagSPD partial_inverse(const BlockCholesky& f) {
  const std::size_t n = f.diag.size();
  const Eigen::Index d = f.diag.front().rows();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);

  BlockTriDiagSPD inv(n, d);
  // Last block: (M^{-1})_KK = L_KK^{-T} L_KK^{-1}.
  {
    Eigen::MatrixXd linv = f.diag[n - 1].triangularView<Eigen::Lower>().solve(eye);
    inv.diag[n - 1] = linv.transpose() * linv;
  }
  for (std::size_t k = n - 1; k-- > 0;) {
    // G = L_{k+1,k} L_kk^{-1}
    Eigen::MatrixXd g = f.diag[k]
                            .transpose()
                            .triangularView<Eigen::Upper>()
                            .solve(f.off[k].transpose())
                            .transpose();
    inv.offdiag[k] = -inv.diag[k + 1] * g;
    Eigen::MatrixXd linv = f.diag[k].triangularView<Eigen::Lower>().solve(eye);
    inv.diag[k] = linv.transpose() * linv + g.transpose() * inv.diag[k + 1] * g;
    // Symmetrize against roundoff drift.
    inv.diag[k] = 0.5 * (inv.diag[k] + inv.diag[k].transpose()).eval();
  }
  return inv;
}

Eigen::MatrixXd dense_assemble(const BlockTriDiagSPD& m) {
  check_shape(m);
  const std::size_t n = m.diag.size();
  const Eigen::Index d = m.diag.front().rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n * d, n * d);
  for (std::size_t k = 0; k < n; ++k) out.block(k * d, k * d, d, d) = m.diag[k];
  for (std::size_t k = 0; k + 1 < n; ++k) {
    out.block((k + 1) * d, k * d, d, d) = m.offdiag[k];
    out.block(k * d, (k + 1) * d, d, d) = m.offdiag[k].transpose();
  }
  return out;
}

BlockVector tridiag_mul(const BlockTriDiagSPD& m, const BlockVector& v) {
  check_shape(m);
  if (v.blocks.size() != m.diag.size())
    throw DimensionMismatch("vector has wrong number of blocks");
  const std::size_t n = m.diag.size();
  BlockVector out(n, m.block_dim());
  for (std::size_t k = 0; k < n; ++k) {
    out.blocks[k] = m.diag[k] * v.blocks[k];
    if (k > 0) out.blocks[k] += m.offdiag[k - 1] * v.blocks[k - 1];
    if (k + 1 < n) out.blocks[k] += m.offdiag[k].transpose() * v.blocks[k + 1];
  }
  return out;
}

}  // namespace ctgp

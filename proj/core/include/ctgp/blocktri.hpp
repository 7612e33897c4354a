#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "ctgp/errors.hpp"

namespace ctgp {

// Symmetric block-tridiagonal matrix with K+1 diagonal blocks of size D x D.
// Only the lower off-diagonal blocks are stored: offdiag[k] is the block at
// row k+1, column k. The upper blocks are their transposes.
struct BlockTriDiagSPD {
  std::vector<Eigen::MatrixXd> diag;
  std::vector<Eigen::MatrixXd> offdiag;

  BlockTriDiagSPD() = default;
  BlockTriDiagSPD(std::size_t num_knots, Eigen::Index block_dim)
      : diag(num_knots, Eigen::MatrixXd::Zero(block_dim, block_dim)),
        offdiag(num_knots == 0 ? 0 : num_knots - 1,
                Eigen::MatrixXd::Zero(block_dim, block_dim)) {}

  std::size_t num_knots() const { return diag.size(); }
  Eigen::Index block_dim() const { return diag.empty() ? 0 : diag.front().rows(); }
};

struct BlockVector {
  std::vector<Eigen::VectorXd> blocks;

  BlockVector() = default;
  BlockVector(std::size_t num_knots, Eigen::Index block_dim)
      : blocks(num_knots, Eigen::VectorXd::Zero(block_dim)) {}

  std::size_t num_knots() const { return blocks.size(); }

  Eigen::VectorXd stacked() const {
    Eigen::Index d = blocks.empty() ? 0 : blocks.front().size();
    Eigen::VectorXd out(static_cast<Eigen::Index>(blocks.size()) * d);
    for (std::size_t k = 0; k < blocks.size(); ++k) out.segment(k * d, d) = blocks[k];
    return out;
  }
};

// Lower block-bidiagonal Cholesky factor: diag[k] is lower triangular,
// off[k] sits at row k+1, column k, so that M = L * L^T.
struct BlockCholesky {
  std::vector<Eigen::MatrixXd> diag;
  std::vector<Eigen::MatrixXd> off;

  std::size_t num_knots() const { return diag.size(); }
};

// Block Cholesky factorization in O(K). Throws NotPositiveDefinite if a pivot
// block fails its dense factorization.
BlockCholesky factorize(const BlockTriDiagSPD& m);

// Solves M x = b with two block-bidiagonal sweeps.
BlockVector solve(const BlockCholesky& f, const BlockVector& b);

// Multi-column variant, one column per right-hand side.
Eigen::MatrixXd solve_multi(const BlockCholesky& f, const Eigen::MatrixXd& b);

// log |M| = 2 sum of log diagonal entries of L.
double log_det(const BlockCholesky& f);

// Block-tridiagonal part of M^{-1} (diagonal and first off-diagonal blocks),
// by the backward recursion from the last block. O(K).
BlockTriDiagSPD partial_inverse(const BlockCholesky& f);

Eigen::MatrixXd dense_assemble(const BlockTriDiagSPD& m);

// y = M * v, used to form information-weighted right-hand sides.
BlockVector tridiag_mul(const BlockTriDiagSPD& m, const BlockVector& v);

}  // namespace ctgp

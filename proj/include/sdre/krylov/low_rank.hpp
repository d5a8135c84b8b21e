#pragma once

#include "sdre/types.hpp"

namespace sdre {

/// Symmetric matrix in factored form M = Z·Y·Zᵀ with Z tall and Y small
/// symmetric. Galerkin solvers produce Z with orthonormal columns.
struct LowRankSym {
  DenseMatrix Z;  // d × k
  DenseMatrix Y;  // k × k symmetric

  Index dim() const { return Z.rows(); }
  Index rank() const { return Z.cols(); }

  static LowRankSym zero(Index d) { return {DenseMatrix::Zero(d, 0), DenseMatrix::Zero(0, 0)}; }

  DenseMatrix apply(const DenseMatrix& X) const {
    if (rank() == 0) return DenseMatrix::Zero(dim(), X.cols());
    return Z * (Y * (Z.transpose() * X));
  }

  DenseMatrix dense() const {
    if (rank() == 0) return DenseMatrix::Zero(dim(), dim());
    return Z * Y * Z.transpose();
  }

  /// Frobenius norm without assembling the dense matrix.
  double norm_fro() const;

  /// Drops core eigenvalues below rel_tol·max|λ|; Z is re-orthonormalized first
  /// if needed. Used to keep downstream right-hand-side ranks small.
  LowRankSym truncated(double rel_tol) const;
};

}  // namespace sdre

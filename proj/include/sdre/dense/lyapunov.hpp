#pragma once

#include "sdre/dense/schur.hpp"
#include "sdre/types.hpp"

namespace sdre {

/// Bartels–Stewart solver for AᵀX + XA + Q = 0 with A stable. The Schur
/// reduction is computed once at construction so repeated solves with the same
/// coefficient matrix (different Q) cost only the back-substitution. Thread-safe
/// after construction.
class SchurLyapunovSolver {
 public:
  explicit SchurLyapunovSolver(const DenseMatrix& A);

  /// Q must be symmetric (to 1e-12 relative); the result is symmetrized.
  DenseMatrix solve(const DenseMatrix& Q) const;

  Index dim() const { return schur_.T.rows(); }

 private:
  SchurDecomposition schur_;
};

DenseMatrix solve_dense_lyapunov(const DenseMatrix& A, const DenseMatrix& Q);

/// ‖AᵀX + XA + Q‖_F
double lyapunov_residual(const DenseMatrix& A, const DenseMatrix& X, const DenseMatrix& Q);

}  // namespace sdre

#pragma once

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <memory>

#include "sdre/types.hpp"

namespace sdre {

enum class FactorKind { SPD, General };

/// Direct factorization of a square sparse matrix, reusable for many
/// multi-right-hand-side solves (and transposed solves). SPD kind accepts
/// symmetric definite input of either sign. Immutable after construction,
/// shareable across threads.
class SparseFactorization {
 public:
  SparseFactorization(const SparseMatrix& A, FactorKind kind);

  DenseMatrix solve(const DenseMatrix& V) const;
  DenseMatrix solve_transpose(const DenseMatrix& V) const;

  Index rows() const { return n_; }
  FactorKind kind() const { return kind_; }

 private:
  using ColMajorSparse = Eigen::SparseMatrix<double>;

  FactorKind kind_;
  Index n_ = 0;
  std::shared_ptr<Eigen::SimplicialLDLT<ColMajorSparse>> ldlt_;
  std::shared_ptr<Eigen::SparseLU<ColMajorSparse>> lu_;
};

SparseFactorization factorize(const SparseMatrix& A, FactorKind kind);

/// Factorizes with the cheapest kind that fits: SPD for symmetric definite
/// matrices, general LU otherwise (or when the definite attempt fails).
SparseFactorization factorize_auto(const SparseMatrix& A);

}  // namespace sdre

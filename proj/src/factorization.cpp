#include "sdre/linalg/factorization.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <cmath>

#include "sdre/linalg/sparse.hpp"

namespace sdre {

namespace {

// Singular input diagnostics: an empty (or numerically empty) row or column
// is the cheapest pivot witness we can name.
Index find_degenerate_index(const Eigen::SparseMatrix<double>& A) {
  const Index n = A.rows();
  Vector colmax = Vector::Zero(n), rowmax = Vector::Zero(n);
  for (Index k = 0; k < A.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) {
      colmax[it.col()] = std::max(colmax[it.col()], std::abs(it.value()));
      rowmax[it.row()] = std::max(rowmax[it.row()], std::abs(it.value()));
    }
  }
  for (Index i = 0; i < n; ++i)
    if (colmax[i] == 0.0 || rowmax[i] == 0.0) return i;
  return -1;
}

}  // namespace

SparseFactorization::SparseFactorization(const SparseMatrix& A, FactorKind kind)
    : kind_(kind), n_(A.rows()) {
  require(A.rows() == A.cols(), "factorize: matrix must be square");
  ColMajorSparse Ac(A);
  Ac.makeCompressed();
  if (kind == FactorKind::SPD) {
    ldlt_ = std::make_shared<Eigen::SimplicialLDLT<ColMajorSparse>>();
    ldlt_->compute(Ac);
    if (ldlt_->info() != Eigen::Success) {
      Index bad = find_degenerate_index(Ac);
      std::string msg = "factorize(SPD): factorization failed (matrix not definite?)";
      if (bad >= 0) msg += ", zero pivot at index " + std::to_string(bad);
      throw SolverError(msg);
    }
    const Vector& d = ldlt_->vectorD();
    const double dmax = d.cwiseAbs().maxCoeff();
    int sign = 0;
    for (Index i = 0; i < d.size(); ++i) {
      if (std::abs(d[i]) <= 1e-14 * std::max(1.0, dmax))
        throw SolverError("factorize(SPD): zero pivot at index " + std::to_string(i));
      int s = d[i] > 0 ? 1 : -1;
      if (sign == 0) sign = s;
      if (s != sign)
        throw SolverError("factorize(SPD): indefinite input, sign change at pivot index " +
                          std::to_string(i));
    }
  } else {
    lu_ = std::make_shared<Eigen::SparseLU<ColMajorSparse>>();
    lu_->compute(Ac);
    if (lu_->info() != Eigen::Success) {
      Index bad = find_degenerate_index(Ac);
      std::string msg = "factorize(General): singular matrix";
      if (bad >= 0) msg += ", zero pivot at index " + std::to_string(bad);
      msg += " (" + lu_->lastErrorMessage() + ")";
      throw SolverError(msg);
    }
  }
}

DenseMatrix SparseFactorization::solve(const DenseMatrix& V) const {
  require(V.rows() == n_, "SparseFactorization::solve: dimension mismatch");
  if (ldlt_) return ldlt_->solve(V);
  return lu_->solve(V);
}

DenseMatrix SparseFactorization::solve_transpose(const DenseMatrix& V) const {
  require(V.rows() == n_, "SparseFactorization::solve_transpose: dimension mismatch");
  if (ldlt_) return ldlt_->solve(V);  // symmetric factor
  return lu_->transpose().solve(V);
}

SparseFactorization factorize(const SparseMatrix& A, FactorKind kind) {
  return SparseFactorization(A, kind);
}

SparseFactorization factorize_auto(const SparseMatrix& A) {
  if (is_symmetric(A)) {
    try {
      return SparseFactorization(A, FactorKind::SPD);
    } catch (const SolverError&) {
      // symmetric but indefinite: fall through to LU
    }
  }
  return SparseFactorization(A, FactorKind::General);
}

}  // namespace sdre

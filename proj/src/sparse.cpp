#include "sdre/linalg/sparse.hpp"

#include <cmath>
#include <vector>

namespace sdre {

SparseMatrix sparse_identity(Index n) {
  SparseMatrix I(n, n);
  I.setIdentity();
  return I;
}

SparseMatrix sparse_diag(const Vector& d) {
  const Index n = d.size();
  SparseMatrix D(n, n);
  D.reserve(Eigen::VectorXi::Constant(static_cast<int>(n), 1));
  for (Index i = 0; i < n; ++i) D.insert(i, i) = d[i];
  D.makeCompressed();
  return D;
}

SparseMatrix sparse_tridiag(std::array<double, 3> stencil, Index n) {
  require(n >= 1, "sparse_tridiag: n must be positive");
  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(3 * n));
  for (Index i = 0; i < n; ++i) {
    if (i > 0 && stencil[0] != 0.0) trip.emplace_back(i, i - 1, stencil[0]);
    if (stencil[1] != 0.0) trip.emplace_back(i, i, stencil[1]);
    if (i + 1 < n && stencil[2] != 0.0) trip.emplace_back(i, i + 1, stencil[2]);
  }
  SparseMatrix T(n, n);
  T.setFromTriplets(trip.begin(), trip.end());
  T.makeCompressed();
  return T;
}

SparseMatrix sparse_kron(const SparseMatrix& A, const SparseMatrix& B) {
  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(A.nonZeros()) * static_cast<size_t>(B.nonZeros()));
  for (Index ia = 0; ia < A.outerSize(); ++ia) {
    for (SparseMatrix::InnerIterator a_it(A, ia); a_it; ++a_it) {
      for (Index ib = 0; ib < B.outerSize(); ++ib) {
        for (SparseMatrix::InnerIterator b(B, ib); b; ++b) {
          trip.emplace_back(a_it.row() * B.rows() + b.row(),
                            a_it.col() * B.cols() + b.col(), a_it.value() * b.value());
        }
      }
    }
  }
  SparseMatrix K(A.rows() * B.rows(), A.cols() * B.cols());
  K.setFromTriplets(trip.begin(), trip.end());
  K.makeCompressed();
  return K;
}

namespace {

bool is_laplacian_stencil(const std::array<double, 3>& s) {
  return s[0] == s[2] && s[0] != 0.0 && s[1] == -2.0 * s[0];
}

bool is_backward_stencil(const std::array<double, 3>& s) {
  return s[2] == 0.0 && s[0] != 0.0 && s[1] == -s[0];
}

SparseMatrix tridiag_1d_bc(std::array<double, 3> stencil, Index n, BoundaryKind bc) {
  SparseMatrix T = sparse_tridiag(stencil, n);
  if (bc == BoundaryKind::Neumann) {
    // zero-flux rows: row sums vanish and symmetry is preserved
    T.coeffRef(0, 0) = -stencil[0];
    T.coeffRef(n - 1, n - 1) = -stencil[0];
    T.makeCompressed();
  }
  return T;
}

}  // namespace

SparseMatrix laplacian_1d(Index n, double h, BoundaryKind bc) {
  require(n >= 3 && h > 0, "laplacian_1d: need n >= 3 and h > 0");
  SparseMatrix T = tridiag_1d_bc({1.0, -2.0, 1.0}, n, bc);
  return SparseMatrix((1.0 / (h * h)) * T);
}

SparseMatrix kron_tridiag_2d(Index n1, Index n2, std::array<double, 3> stencil,
                             double h, BoundaryKind bc) {
  require(n1 >= 2 && n2 >= 2 && h > 0, "kron_tridiag_2d: need n1,n2 >= 2 and h > 0");
  if (is_laplacian_stencil(stencil)) {
    SparseMatrix T1 = tridiag_1d_bc(stencil, n1, bc);
    SparseMatrix T2 = tridiag_1d_bc(stencil, n2, bc);
    SparseMatrix L = sparse_kron(sparse_identity(n2), T1) +
                     sparse_kron(T2, sparse_identity(n1));
    return SparseMatrix((1.0 / (h * h)) * L);
  }
  if (is_backward_stencil(stencil)) {
    if (bc != BoundaryKind::Dirichlet)
      throw SolverError("kron_tridiag_2d: gradient stencil requires Dirichlet boundary");
    SparseMatrix B1 = sparse_tridiag(stencil, n1);
    SparseMatrix B2 = sparse_tridiag(stencil, n2);
    SparseMatrix D = sparse_kron(sparse_identity(n2), B1) +
                     sparse_kron(B2, sparse_identity(n1));
    return SparseMatrix((-1.0 / h) * D);
  }
  throw SolverError("kron_tridiag_2d: unsupported stencil " +
                    std::to_string(stencil[0]) + "," + std::to_string(stencil[1]) +
                    "," + std::to_string(stencil[2]));
}

DenseMatrix spmv(const SparseMatrix& A, const DenseMatrix& X) {
  require(A.cols() == X.rows(), "spmv: dimension mismatch");
  return A * X;
}

bool is_symmetric(const SparseMatrix& A, double tol) {
  if (A.rows() != A.cols()) return false;
  SparseMatrix D = SparseMatrix(A.transpose()) - A;
  double scale = std::max(1.0, A.coeffs().size() > 0 ? A.coeffs().cwiseAbs().maxCoeff() : 0.0);
  for (Index k = 0; k < D.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(D, k); it; ++it)
      if (std::abs(it.value()) > tol * scale) return false;
  return true;
}

}  // namespace sdre

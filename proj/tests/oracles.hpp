#pragma once

// Test-only reference implementations, independent of the library solvers
// they are used to check.

#include <Eigen/Dense>

#include <random>

#include "sdre/types.hpp"

namespace sdre::test {

inline DenseMatrix kron_dense(const DenseMatrix& A, const DenseMatrix& B) {
  DenseMatrix K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j)
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

// AᵀX + XA + Q = 0 through the vectorized Kronecker system.
inline DenseMatrix lyapunov_kron_oracle(const DenseMatrix& A, const DenseMatrix& Q) {
  const Index n = A.rows();
  DenseMatrix I = DenseMatrix::Identity(n, n);
  DenseMatrix M = kron_dense(I, A.transpose()) + kron_dense(A.transpose(), I);
  Eigen::Map<const Vector> q(Q.data(), n * n);
  Vector x = M.fullPivLu().solve(-q);
  return Eigen::Map<const DenseMatrix>(x.data(), n, n);
}

// Newton–Kleinman iteration for AᵀX + XA − XSX + Q = 0 from a stabilizing
// start (X0 = 0 requires A stable).
inline DenseMatrix newton_kleinman_oracle(const DenseMatrix& A, const DenseMatrix& S,
                                          const DenseMatrix& Q,
                                          int max_iter = 60, double tol = 1e-13) {
  const Index n = A.rows();
  DenseMatrix X = DenseMatrix::Zero(n, n);
  for (int it = 0; it < max_iter; ++it) {
    DenseMatrix Acl = A - S * X;
    DenseMatrix rhs = Q + X * S * X;
    DenseMatrix Xn = lyapunov_kron_oracle(Acl, rhs);
    double diff = (Xn - X).cwiseAbs().maxCoeff();
    X = 0.5 * (Xn + Xn.transpose());
    if (diff < tol * std::max(1.0, X.cwiseAbs().maxCoeff())) break;
  }
  return X;
}

// Random stable dense matrix: random entries shifted to make eigenvalues
// strictly left of −margin.
inline DenseMatrix random_stable_dense(Index n, std::mt19937& rng, double margin = 0.5) {
  std::normal_distribution<double> g(0.0, 1.0);
  DenseMatrix A(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) A(i, j) = g(rng);
  Eigen::EigenSolver<DenseMatrix> es(A, false);
  double shift = es.eigenvalues().real().maxCoeff();
  A.diagonal().array() -= (shift + margin);
  return A;
}

inline DenseMatrix random_dense(Index r, Index c, std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  DenseMatrix M(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) M(i, j) = g(rng);
  return M;
}

}  // namespace sdre::test

#include "sdre/dense/lyapunov.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <vector>

namespace sdre {

namespace {

// Quasi-triangular block starts of a real Schur factor (sentinel n appended).
std::vector<Index> block_starts(const DenseMatrix& T) {
  std::vector<Index> starts;
  const Index n = T.rows();
  Index i = 0;
  while (i < n) {
    starts.push_back(i);
    if (i + 1 < n && T(i + 1, i) != 0.0) i += 2;
    else i += 1;
  }
  starts.push_back(n);
  return starts;
}

// A·Xb + Xb·B = r with A, B at most 2×2, solved through the Kronecker system
// (I⊗A + Bᵀ⊗I)vec(Xb) = vec(r).
DenseMatrix solve_tiny_sylvester(const DenseMatrix& A, const DenseMatrix& B,
                                 DenseMatrix r) {
  const Index wi = A.rows(), wj = B.rows();
  DenseMatrix M = DenseMatrix::Zero(wi * wj, wi * wj);
  for (Index cb = 0; cb < wj; ++cb) {
    M.block(cb * wi, cb * wi, wi, wi) += A;
    for (Index rb = 0; rb < wj; ++rb)
      M.block(rb * wi, cb * wi, wi, wi).diagonal().array() += B(cb, rb);
  }
  Eigen::Map<Vector> rv(r.data(), wi * wj);
  Vector xv = M.partialPivLu().solve(rv);
  return Eigen::Map<DenseMatrix>(xv.data(), wi, wj);
}

}  // namespace

SchurLyapunovSolver::SchurLyapunovSolver(const DenseMatrix& A) : schur_(real_schur(A)) {
  const double tol = 1e-12 * std::max(1.0, A.norm());
  for (const auto& ev : schur_.eigenvalues) {
    if (ev.real() >= -tol) {
      std::ostringstream os;
      os << "solve_dense_lyapunov: A is not stable, eigenvalue " << ev.real();
      if (ev.imag() != 0.0) os << (ev.imag() > 0 ? "+" : "") << ev.imag() << "i";
      os << " has nonnegative real part";
      throw SolverError(os.str());
    }
  }
}

DenseMatrix SchurLyapunovSolver::solve(const DenseMatrix& Q) const {
  const Index n = dim();
  require(Q.rows() == n && Q.cols() == n, "solve_dense_lyapunov: Q dimension mismatch");
  const double qscale = std::max(1.0, Q.cwiseAbs().maxCoeff());
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * qscale)
    throw SolverError("solve_dense_lyapunov: Q is not symmetric");
  DenseMatrix Qs = 0.5 * (Q + Q.transpose());

  const DenseMatrix& U = schur_.U;
  const DenseMatrix& T = schur_.T;
  DenseMatrix Qt = U.transpose() * Qs * U;

  // Forward block sweep for Tᵀ X̃ + X̃ T = −Q̃ (Tᵀ lower quasi-triangular).
  std::vector<Index> bs = block_starts(T);
  const Index nblocks = static_cast<Index>(bs.size()) - 1;
  DenseMatrix X = DenseMatrix::Zero(n, n);
  for (Index jb = 0; jb < nblocks; ++jb) {
    const Index j0 = bs[jb], wj = bs[jb + 1] - j0;
    DenseMatrix rhs = -Qt.middleCols(j0, wj);
    if (j0 > 0) rhs.noalias() -= X.leftCols(j0) * T.block(0, j0, j0, wj);
    for (Index ib = 0; ib < nblocks; ++ib) {
      const Index i0 = bs[ib], wi = bs[ib + 1] - i0;
      DenseMatrix r = rhs.middleRows(i0, wi);
      if (i0 > 0)
        r.noalias() -= T.block(0, i0, i0, wi).transpose() * X.block(0, j0, i0, wj);
      X.block(i0, j0, wi, wj) = solve_tiny_sylvester(
          T.block(i0, i0, wi, wi).transpose(), T.block(j0, j0, wj, wj), r);
    }
  }

  DenseMatrix sol = U * X * U.transpose();
  return 0.5 * (sol + sol.transpose());
}

DenseMatrix solve_dense_lyapunov(const DenseMatrix& A, const DenseMatrix& Q) {
  return SchurLyapunovSolver(A).solve(Q);
}

double lyapunov_residual(const DenseMatrix& A, const DenseMatrix& X, const DenseMatrix& Q) {
  require(A.rows() == A.cols() && X.rows() == A.rows() && X.cols() == A.rows() &&
              Q.rows() == A.rows() && Q.cols() == A.rows(),
          "lyapunov_residual: dimension mismatch");
  return (A.transpose() * X + X * A + Q).norm();
}

}  // namespace sdre

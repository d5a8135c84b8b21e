#include "sdre/dense/riccati.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

#include "sdre/dense/schur.hpp"

namespace sdre {

namespace {

void check_symmetric(const DenseMatrix& M, const char* name) {
  const double scale = std::max(1.0, M.size() > 0 ? M.cwiseAbs().maxCoeff() : 0.0);
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw SolverError(std::string("solve_dense_riccati: ") + name + " is not symmetric");
}

}  // namespace

DenseMatrix solve_dense_riccati(const DenseMatrix& A, const DenseMatrix& S,
                                const DenseMatrix& Q) {
  const Index n = A.rows();
  require(A.cols() == n && S.rows() == n && S.cols() == n && Q.rows() == n && Q.cols() == n,
          "solve_dense_riccati: dimension mismatch");
  check_symmetric(S, "S");
  check_symmetric(Q, "Q");

  DenseMatrix H(2 * n, 2 * n);
  H << A, -0.5 * (S + S.transpose()), -0.5 * (Q + Q.transpose()), -A.transpose();

  SchurDecomposition sch = ordered_real_schur_stable_first(H);

  const double axis_tol = 1e-10 * std::max(1.0, H.norm());
  for (const auto& ev : sch.eigenvalues) {
    if (std::abs(ev.real()) <= axis_tol) {
      std::ostringstream os;
      os << "solve_dense_riccati: Hamiltonian eigenvalue " << ev.real() << "+"
         << ev.imag() << "i on the imaginary axis; no stabilizing solution "
            "(gamma below gamma* in H-infinity usage)";
      throw SolverError(os.str());
    }
  }
  if (sch.stable_count != n)
    throw SolverError("solve_dense_riccati: Hamiltonian has " +
                      std::to_string(sch.stable_count) + " stable eigenvalues, expected " +
                      std::to_string(n) + "; no stabilizing solution");

  DenseMatrix U1 = sch.U.topLeftCorner(n, n);
  DenseMatrix U2 = sch.U.bottomLeftCorner(n, n);
  // X = U2 U1⁻¹ computed as (U1ᵀ)⁻¹U2ᵀ transposed
  Eigen::FullPivLU<DenseMatrix> lu(U1.transpose());
  if (!lu.isInvertible())
    throw SolverError("solve_dense_riccati: singular invariant-subspace basis");
  DenseMatrix X = lu.solve(U2.transpose()).transpose();
  X = 0.5 * (X + X.transpose());

  // closed loop must be stable for any accepted output
  DenseMatrix Acl = A - S * X;
  Eigen::EigenSolver<DenseMatrix> es(Acl, false);
  double max_re = es.eigenvalues().real().maxCoeff();
  if (max_re >= 0.0) {
    std::ostringstream os;
    os << "solve_dense_riccati: closed loop A - SX unstable (max Re = " << max_re << ")";
    throw SolverError(os.str());
  }
  return X;
}

double riccati_residual(const DenseMatrix& A, const DenseMatrix& S,
                        const DenseMatrix& X, const DenseMatrix& Q) {
  const Index n = A.rows();
  require(A.cols() == n && S.rows() == n && S.cols() == n && X.rows() == n &&
              X.cols() == n && Q.rows() == n && Q.cols() == n,
          "riccati_residual: dimension mismatch");
  return (A.transpose() * X + X * A - X * S * X + Q).norm();
}

}  // namespace sdre

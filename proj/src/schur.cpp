#include "sdre/dense/schur.hpp"

#include <lapacke.h>

namespace sdre {

namespace {

lapack_logical select_negative_real_part(const double* wr, const double* /*wi*/) {
  return *wr < 0.0 ? 1 : 0;
}

SchurDecomposition run_dgees(const DenseMatrix& A, bool ordered) {
  const Index n = A.rows();
  require(A.cols() == n, "real_schur: matrix must be square");
  SchurDecomposition out;
  out.T = A;  // overwritten in place
  out.U.resize(n, n);
  std::vector<double> wr(static_cast<size_t>(n)), wi(static_cast<size_t>(n));
  lapack_int sdim = 0;
  lapack_int info = LAPACKE_dgees(
      LAPACK_COL_MAJOR, 'V', ordered ? 'S' : 'N',
      ordered ? select_negative_real_part : nullptr, static_cast<lapack_int>(n),
      out.T.data(), static_cast<lapack_int>(n), &sdim, wr.data(), wi.data(),
      out.U.data(), static_cast<lapack_int>(n));
  if (info != 0)
    throw SolverError("real_schur: LAPACK dgees failed with info=" + std::to_string(info));
  out.eigenvalues.reserve(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i)
    out.eigenvalues.emplace_back(wr[static_cast<size_t>(i)], wi[static_cast<size_t>(i)]);
  out.stable_count = sdim;
  return out;
}

}  // namespace

SchurDecomposition real_schur(const DenseMatrix& A) { return run_dgees(A, false); }

SchurDecomposition ordered_real_schur_stable_first(const DenseMatrix& A) {
  return run_dgees(A, true);
}

}  // namespace sdre

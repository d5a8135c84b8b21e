#pragma once

#include <complex>
#include <vector>

#include "sdre/types.hpp"

namespace sdre {

struct SchurDecomposition {
  DenseMatrix U;  // orthogonal
  DenseMatrix T;  // real quasi upper triangular, A = U T Uᵀ
  std::vector<std::complex<double>> eigenvalues;
  Index stable_count = 0;  // meaningful for the ordered variant
};

/// Real Schur form via LAPACK.
SchurDecomposition real_schur(const DenseMatrix& A);

/// Real Schur form with eigenvalues of negative real part ordered first.
SchurDecomposition ordered_real_schur_stable_first(const DenseMatrix& A);

}  // namespace sdre

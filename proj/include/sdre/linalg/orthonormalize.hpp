#pragma once

#include <vector>

#include "sdre/types.hpp"

namespace sdre {

struct OrthoResult {
  DenseMatrix Q;              // surviving orthonormal columns
  DenseMatrix R;              // (Σ against cols + rank) × n_new, [against, Q]·R ≈ input
  Index rank = 0;
  std::vector<Index> kept;    // input column index of each Q column
};

/// Modified block Gram–Schmidt against already-orthonormal prior blocks, with
/// deflation of (numerically) dependent columns. `reorthogonalize` adds one
/// extra projection pass against the prior blocks; the internal sweep always
/// reorthogonalizes once. `deflation_tol` is relative to the Frobenius norm of
/// the incoming block.
OrthoResult block_orthonormalize(const DenseMatrix& V_new,
                                 const std::vector<const DenseMatrix*>& against,
                                 bool reorthogonalize = true,
                                 double deflation_tol = 1e-12);

}  // namespace sdre

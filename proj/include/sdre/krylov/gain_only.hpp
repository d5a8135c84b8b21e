#pragma once

#include <optional>

#include "sdre/types.hpp"

namespace sdre {

struct GainOnlyConfig {
  double tol = 1e-8;
  Index max_dim = 0;  // 0 → min(d, 30·rank(start block))
  double deflation_tol = 1e-12;
  int reduced_solve_period = 1;
  bool test_mode_store_basis = false;  // retain both passes' bases for checks
};

struct GainOnlyResult {
  DenseMatrix K;  // R⁻¹BᵀΠ, u = −Kx
  double residual = 0.0;
  int iterations = 0;
  Index space_dim = 0;
  Index peak_retained_blocks = 0;  // basis blocks held between iterations
  int factorizations = 0;
  std::optional<DenseMatrix> pass1_basis, pass2_basis;
};

/// Feedback-matrix-oriented Riccati solve for symmetric A: builds the extended
/// Krylov basis with a two-block recurrence (only the previous two blocks are
/// retained), solves the reduced Riccati with a cheap last-block residual
/// test, then regenerates the basis block by block — reusing the factorization
/// of A and the stored orthogonalization coefficients — to accumulate
/// K = R⁻¹B_kᵀY_X·V_kᵀ without ever storing the whole basis.
GainOnlyResult gain_only_eksm(const SparseMatrix& A, const DenseMatrix& B,
                              const DenseMatrix& R, const DenseMatrix& Qfactor,
                              const GainOnlyConfig& cfg = {});

}  // namespace sdre

#pragma once

#include <Eigen/Dense>

#include "sdre/krylov/low_rank.hpp"
#include "sdre/linalg/factorization.hpp"
#include "sdre/types.hpp"

namespace sdre {

/// Matrix-free closed-loop operator C₀ = A₀ − [B,H]·G·[B,H]ᵀ·Π₀ with
/// G = blockdiag(R⁻¹, −P⁻¹/(2γ²)). Forward products use the sparse A₀ plus the
/// low-rank correction; inverse products use the Sherman–Morrison–Woodbury
/// split around the cached factorization of A₀. γ = 0 encodes H₂ and drops the
/// H block entirely.
class StructuredClosedLoopOperator {
 public:
  StructuredClosedLoopOperator(const SparseMatrix& A0, const DenseMatrix& B,
                               const DenseMatrix& H, const DenseMatrix& R,
                               const DenseMatrix& P, double gamma, LowRankSym Pi0);

  Index dim() const { return A0_.rows(); }

  DenseMatrix apply(const DenseMatrix& V) const;            // C₀·V
  DenseMatrix apply_transpose(const DenseMatrix& V) const;  // C₀ᵀ·V
  DenseMatrix solve(const DenseMatrix& V) const;            // C₀⁻¹·V (SMW)
  DenseMatrix solve_transpose(const DenseMatrix& V) const;  // C₀⁻ᵀ·V

  const LowRankSym& pi0() const { return Pi0_; }
  const SparseMatrix& a0() const { return A0_; }

 private:
  SparseMatrix A0_;
  SparseFactorization A0_fact_;
  DenseMatrix BH_;   // d × (m+p), empty when B = H = 0
  DenseMatrix G_;    // (m+p) × (m+p)
  LowRankSym Pi0_;
  DenseMatrix W2_;   // A₀⁻¹[B,H]
  DenseMatrix U2_;   // A₀⁻ᵀ(Π₀[B,H])
  Eigen::FullPivLU<DenseMatrix> G1_lu_;   // G₁  = I − G·[B,H]ᵀΠ₀W₂
  Eigen::FullPivLU<DenseMatrix> G1t_lu_;  // G₁ᵗ = I − G·([B,H]ᵀΠ₀W₂)ᵀ
};

/// Four-step SMW application of C₀⁻¹ to a tall block.
DenseMatrix smw_apply_inverse(const StructuredClosedLoopOperator& op, const DenseMatrix& V);

}  // namespace sdre

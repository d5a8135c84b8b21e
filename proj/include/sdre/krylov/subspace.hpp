#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "sdre/krylov/structured_operator.hpp"
#include "sdre/types.hpp"

namespace sdre {

enum class KrylovSpaceKind { Extended, Rational };

/// Matrix-free hooks for the operator M a Krylov space is built on. For the
/// matrix equations in this toolkit M is the transpose of the equation
/// coefficient (Aᵀ or C₀ᵀ), so that M·span(V) nests into the expanded space.
struct SpaceOps {
  Index dim = 0;
  std::function<DenseMatrix(const DenseMatrix&)> apply;
  std::function<DenseMatrix(const DenseMatrix&)> solve;
  std::function<DenseMatrix(double, const DenseMatrix&)> shifted_solve;  // (M−σI)⁻¹
  std::shared_ptr<int> factorizations = std::make_shared<int>(0);
};

SpaceOps make_equation_space_ops(const SparseMatrix& A);
SpaceOps make_equation_space_ops(const StructuredClosedLoopOperator& C0);

/// Growing block space. Alongside the orthonormal basis V and the projection
/// T = VᵀMV, the state tracks the factored out-of-space component
/// P⊥ = MV − VT = θ·C (θ orthonormal, θᵀV = 0), which yields the exact
/// equation residual ‖R‖_F = √2·‖C·Y‖_F without assembling anything d×d.
struct KrylovState {
  Index dim = 0;
  DenseMatrix V;    // d × K
  DenseMatrix MV;   // M·V
  DenseMatrix T;    // VᵀMV
  std::vector<Index> block_offsets;  // start column of each block
  // extended-Krylov chain ranges (columns of the newest block)
  Index fwd_begin = 0, fwd_count = 0;
  Index bwd_begin = 0, bwd_count = 0;
  std::vector<double> shifts;  // σ₂.. used so far (rational mode)
  DenseMatrix theta;       // d × r
  DenseMatrix theta_coef;  // r × K
  double deflation_tol = 1e-12;
  double op_scale = 0.0;   // running estimate of ‖M·(unit block)‖, for tolerances
  int iterations = 0;
  bool breakdown = false;
  Index last_new_begin = 0, last_new_count = 0;

  Index cols() const { return V.cols(); }
  Index block_count() const { return static_cast<Index>(block_offsets.size()); }
};

KrylovState krylov_init(const SpaceOps& ops, const DenseMatrix& start_block,
                        double deflation_tol = 1e-12);

enum class ExpandStatus { Expanded, Breakdown };

/// One extended-Krylov step: forward block M·(fwd chain) and backward block
/// M⁻¹·(bwd chain), orthonormalized against the whole basis. Full deflation of
/// both chains reports Breakdown (invariant subspace reached).
ExpandStatus ek_expand(KrylovState& state, const SpaceOps& ops);

/// One rational-Krylov step with the given real shift: (M−σI)⁻¹·(last block).
ExpandStatus rk_expand(KrylovState& state, const SpaceOps& ops, double shift);

/// Next adaptive shift: on the first call the geometric mean of the mirrored
/// Ritz interval, afterwards the maximizer of ∏ⱼ|z−σⱼ|/∏ᵢ|z−θᵢ| over a fixed
/// log grid in that interval (θᵢ the Ritz values of T). Deterministic; never
/// reproduces a previously used shift.
double next_adaptive_shift(const KrylovState& state);

}  // namespace sdre

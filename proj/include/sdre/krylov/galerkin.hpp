#pragma once

#include <optional>

#include "sdre/krylov/low_rank.hpp"
#include "sdre/krylov/subspace.hpp"
#include "sdre/types.hpp"

namespace sdre {

struct GalerkinConfig {
  KrylovSpaceKind space = KrylovSpaceKind::Extended;
  double tol = 1e-8;              // relative residual
  Index max_dim = 0;              // 0 → min(d, 30·rank(start block))
  double deflation_tol = 1e-12;
  double start_compression_tol = 0.0;  // extra rank cutoff on the start block
  int reduced_solve_period = 1;
};

/// Thrown when the space hits max_dim before the residual target; carries the
/// best iterate so callers can decide.
class KrylovNonConvergence : public SolverError {
 public:
  KrylovNonConvergence(const std::string& msg, LowRankSym best, double residual)
      : SolverError(msg), best_iterate(std::move(best)), residual(residual) {}
  LowRankSym best_iterate;
  double residual;
};

struct LyapunovSolveResult {
  LowRankSym W;
  double residual = 0.0;
  int iterations = 0;
  Index space_dim = 0;
  bool breakdown = false;
  int factorizations = 0;
};

/// Low-rank solve of C₀ᵀW + WC₀ + F·S·Fᵀ = 0 by Galerkin projection; the
/// right-hand core S may be indefinite. Reduced problems go through
/// solve_dense_lyapunov; the residual comes from the factored out-of-space
/// component, never from a d×d assembly.
LyapunovSolveResult galerkin_lyapunov(const SpaceOps& ops, const DenseMatrix& rhs_factor,
                                      const DenseMatrix& rhs_core, const GalerkinConfig& cfg);
LyapunovSolveResult galerkin_lyapunov(const SparseMatrix& C0, const DenseMatrix& rhs_factor,
                                      const DenseMatrix& rhs_core, const GalerkinConfig& cfg);
LyapunovSolveResult galerkin_lyapunov(const StructuredClosedLoopOperator& C0,
                                      const DenseMatrix& rhs_factor,
                                      const DenseMatrix& rhs_core, const GalerkinConfig& cfg);

/// Optional second quadratic term: S = BR⁻¹Bᵀ − HP⁻¹Hᵀ/(2γ²).
struct SecondQuadratic {
  DenseMatrix H;
  DenseMatrix P;
  double gamma = 0.0;
};

struct RiccatiSolveResult {
  LowRankSym Pi;
  DenseMatrix K;  // R⁻¹BᵀΠ
  double residual = 0.0;
  int iterations = 0;
  Index space_dim = 0;
  bool breakdown = false;
  int factorizations = 0;
};

/// Low-rank solve of AᵀΠ + ΠA − ΠSΠ + QfQfᵀ = 0; rational space uses
/// next_adaptive_shift, extended space reuses one factorization of A. A
/// reduced solve without a stabilizing solution is retried on a larger space
/// and only propagates once the space cannot grow further.
RiccatiSolveResult galerkin_riccati(const SparseMatrix& A, const DenseMatrix& B,
                                    const DenseMatrix& R,
                                    const std::optional<SecondQuadratic>& second,
                                    const DenseMatrix& Qfactor, const GalerkinConfig& cfg,
                                    const DenseMatrix* warm_start_block = nullptr);

}  // namespace sdre

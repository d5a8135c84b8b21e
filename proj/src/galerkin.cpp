#include "sdre/krylov/galerkin.hpp"

#include <Eigen/Cholesky>

#include <cmath>

#include "sdre/dense/lyapunov.hpp"
#include "sdre/dense/riccati.hpp"
#include "sdre/linalg/orthonormalize.hpp"

namespace sdre {

namespace {

double factored_norm(const DenseMatrix& F, const DenseMatrix& S) {
  // ‖F·S·Fᵀ‖_F via the small Gram matrix
  DenseMatrix G = F.transpose() * F;
  DenseMatrix SG = S * G;
  return std::sqrt(std::max(0.0, (SG * SG).trace()));
}

Index default_max_dim(Index d, Index start_rank, Index cfg_max) {
  if (cfg_max > 0) return std::min(cfg_max, d);
  return std::min(d, std::max<Index>(30 * start_rank, 2 * start_rank + 2));
}

double residual_norm(const KrylovState& s, const DenseMatrix& Y) {
  if (s.theta_coef.rows() == 0) return 0.0;
  return std::sqrt(2.0) * (s.theta_coef * Y).norm();
}

}  // namespace

LyapunovSolveResult galerkin_lyapunov(const SpaceOps& ops, const DenseMatrix& rhs_factor,
                                      const DenseMatrix& rhs_core,
                                      const GalerkinConfig& cfg) {
  const Index d = ops.dim;
  LyapunovSolveResult out;
  const double qnorm = rhs_factor.cols() == 0 ? 0.0 : factored_norm(rhs_factor, rhs_core);
  if (qnorm == 0.0) {  // zero right-hand side → zero solution in zero iterations
    out.W = LowRankSym::zero(d);
    return out;
  }

  KrylovState state = krylov_init(ops, rhs_factor,
                                  std::max(cfg.deflation_tol, cfg.start_compression_tol));
  DenseMatrix Fk = state.V.transpose() * rhs_factor;
  const Index max_dim = default_max_dim(d, state.cols(), cfg.max_dim);

  DenseMatrix Y;
  bool have_y = false;
  double best_res = std::numeric_limits<double>::infinity();
  std::string last_reduced_error;

  for (int it = 1;; ++it) {
    const bool saturated = state.breakdown || state.cols() >= max_dim;
    const bool do_solve = saturated || (it % std::max(1, cfg.reduced_solve_period) == 0);
    if (do_solve) {
      DenseMatrix Qred = Fk * rhs_core * Fk.transpose();
      Qred = 0.5 * (Qred + Qred.transpose());
      try {
        Y = SchurLyapunovSolver(state.T.transpose()).solve(Qred);
        have_y = true;
        double res = residual_norm(state, Y) / qnorm;
        best_res = std::min(best_res, res);
        if (res <= cfg.tol || (state.breakdown && res <= 10 * cfg.tol)) {
          out.W = LowRankSym{state.V, Y};
          out.residual = res;
          out.iterations = state.iterations;
          out.space_dim = state.cols();
          out.breakdown = state.breakdown;
          out.factorizations = *ops.factorizations;
          return out;
        }
      } catch (const SolverError& e) {
        last_reduced_error = e.what();
        if (saturated)
          throw SolverError(
              std::string("galerkin_lyapunov: reduced problem unstable at full space "
                          "(is C0 stable?): ") + e.what());
      }
    }
    if (saturated) {
      LowRankSym best = have_y ? LowRankSym{state.V, Y} : LowRankSym::zero(d);
      throw KrylovNonConvergence(
          "galerkin_lyapunov: space dimension " + std::to_string(state.cols()) +
              " reached limit " + std::to_string(max_dim) + " with residual " +
              std::to_string(best_res) +
              (last_reduced_error.empty() ? "" : "; last reduced error: " + last_reduced_error),
          best, best_res);
    }
    if (cfg.space == KrylovSpaceKind::Extended) {
      ek_expand(state, ops);
    } else {
      rk_expand(state, ops, next_adaptive_shift(state));
    }
    if (state.last_new_count > 0 && !state.breakdown) {
      Fk.conservativeResize(state.cols(), Fk.cols());
      Fk.bottomRows(state.last_new_count) =
          state.V.rightCols(state.last_new_count).transpose() * rhs_factor;
    }
  }
}

LyapunovSolveResult galerkin_lyapunov(const SparseMatrix& C0, const DenseMatrix& rhs_factor,
                                      const DenseMatrix& rhs_core,
                                      const GalerkinConfig& cfg) {
  return galerkin_lyapunov(make_equation_space_ops(C0), rhs_factor, rhs_core, cfg);
}

LyapunovSolveResult galerkin_lyapunov(const StructuredClosedLoopOperator& C0,
                                      const DenseMatrix& rhs_factor,
                                      const DenseMatrix& rhs_core,
                                      const GalerkinConfig& cfg) {
  return galerkin_lyapunov(make_equation_space_ops(C0), rhs_factor, rhs_core, cfg);
}

RiccatiSolveResult galerkin_riccati(const SparseMatrix& A, const DenseMatrix& B,
                                    const DenseMatrix& R,
                                    const std::optional<SecondQuadratic>& second,
                                    const DenseMatrix& Qfactor, const GalerkinConfig& cfg,
                                    const DenseMatrix* warm_start_block) {
  const Index d = A.rows();
  require(B.size() == 0 || B.rows() == d, "galerkin_riccati: B rows != d");
  require(Qfactor.rows() == d, "galerkin_riccati: Qfactor rows != d");
  SpaceOps ops = make_equation_space_ops(A);

  Eigen::LLT<DenseMatrix> R_llt(R);
  if (B.cols() > 0 && R_llt.info() != Eigen::Success)
    throw SolverError("galerkin_riccati: R is not positive definite");
  Eigen::LLT<DenseMatrix> P_llt;
  double hin_coef = 0.0;
  if (second && second->gamma > 0.0 && second->H.cols() > 0) {
    P_llt.compute(second->P);
    if (P_llt.info() != Eigen::Success)
      throw SolverError("galerkin_riccati: P is not positive definite");
    hin_coef = 1.0 / (2.0 * second->gamma * second->gamma);
  }

  const double qnorm = factored_norm(Qfactor, DenseMatrix::Identity(Qfactor.cols(), Qfactor.cols()));
  RiccatiSolveResult out;
  if (qnorm == 0.0) {
    out.Pi = LowRankSym::zero(d);
    out.K = DenseMatrix::Zero(B.cols(), d);
    return out;
  }

  DenseMatrix start = Qfactor;
  if (warm_start_block && warm_start_block->rows() == d) {
    DenseMatrix combined(d, Qfactor.cols() + warm_start_block->cols());
    combined << Qfactor, *warm_start_block;
    start = combined;
  }
  KrylovState state = krylov_init(ops, start,
                                  std::max(cfg.deflation_tol, cfg.start_compression_tol));
  DenseMatrix Fk = state.V.transpose() * Qfactor;
  DenseMatrix Bk = B.cols() > 0 ? DenseMatrix(state.V.transpose() * B)
                                : DenseMatrix::Zero(state.cols(), 0);
  DenseMatrix Hk = hin_coef > 0 ? DenseMatrix(state.V.transpose() * second->H)
                                : DenseMatrix::Zero(state.cols(), 0);
  const Index max_dim = default_max_dim(d, state.cols(), cfg.max_dim);

  DenseMatrix Y;
  bool have_y = false;
  double best_res = std::numeric_limits<double>::infinity();
  std::string last_reduced_error;

  for (int it = 1;; ++it) {
    const bool saturated = state.breakdown || state.cols() >= max_dim;
    const bool do_solve = saturated || (it % std::max(1, cfg.reduced_solve_period) == 0);
    if (do_solve) {
      const Index K = state.cols();
      DenseMatrix Sk = DenseMatrix::Zero(K, K);
      if (Bk.cols() > 0) Sk.noalias() += Bk * R_llt.solve(Bk.transpose());
      if (hin_coef > 0) Sk.noalias() -= hin_coef * (Hk * P_llt.solve(Hk.transpose()));
      DenseMatrix Qred = Fk * Fk.transpose();
      try {
        Y = solve_dense_riccati(state.T.transpose(), Sk, Qred);
        have_y = true;
        double res = residual_norm(state, Y) / qnorm;
        best_res = std::min(best_res, res);
        if (res <= cfg.tol || (state.breakdown && res <= 10 * cfg.tol)) {
          out.Pi = LowRankSym{state.V, Y};
          out.K = Bk.cols() > 0
                      ? DenseMatrix(R_llt.solve(Bk.transpose() * Y) * state.V.transpose())
                      : DenseMatrix::Zero(B.cols(), d);
          out.residual = res;
          out.iterations = state.iterations;
          out.space_dim = state.cols();
          out.breakdown = state.breakdown;
          out.factorizations = *ops.factorizations;
          return out;
        }
      } catch (const SolverError& e) {
        last_reduced_error = e.what();
        if (saturated) throw;  // γ below γ*, or genuinely unstabilizable
      }
    }
    if (saturated) {
      LowRankSym best = have_y ? LowRankSym{state.V, Y} : LowRankSym::zero(d);
      throw KrylovNonConvergence(
          "galerkin_riccati: space dimension " + std::to_string(state.cols()) +
              " reached limit " + std::to_string(max_dim) + " with residual " +
              std::to_string(best_res) +
              (last_reduced_error.empty() ? "" : "; last reduced error: " + last_reduced_error),
          best, best_res);
    }
    if (cfg.space == KrylovSpaceKind::Extended) {
      ek_expand(state, ops);
    } else {
      rk_expand(state, ops, next_adaptive_shift(state));
    }
    if (state.last_new_count > 0 && !state.breakdown) {
      const Index w = state.last_new_count;
      auto newV = state.V.rightCols(w);
      Fk.conservativeResize(state.cols(), Fk.cols());
      Fk.bottomRows(w) = newV.transpose() * Qfactor;
      if (Bk.cols() > 0 || B.cols() > 0) {
        Bk.conservativeResize(state.cols(), B.cols());
        if (B.cols() > 0) Bk.bottomRows(w) = newV.transpose() * B;
      }
      if (hin_coef > 0) {
        Hk.conservativeResize(state.cols(), Hk.cols());
        Hk.bottomRows(w) = newV.transpose() * second->H;
      }
    }
  }
}

}  // namespace sdre

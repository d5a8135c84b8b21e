#include "sdre/krylov/gain_only.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <vector>

#include "sdre/dense/riccati.hpp"
#include "sdre/linalg/factorization.hpp"
#include "sdre/linalg/sparse.hpp"

namespace sdre {

namespace {

// Orthogonalization transcript of one block: every coefficient of both
// Gram–Schmidt passes, stored per pass so the pass-2 replay performs the
// identical floating-point sequence and regenerates the block exactly.
struct BlockTranscript {
  DenseMatrix c_prev1[2];     // coefficients against U_{k}, one matrix per pass
  DenseMatrix c_prev2[2];     // coefficients against U_{k-1}
  DenseMatrix r_int[2];       // internal MGS coefficients per local pass
  Vector col_norms;           // kept-column normalizers
  std::vector<Index> kept;
  Index fwd_survivors = 0;    // leading kept columns that came from A·(fwd chain)
  Index width_in = 0;
};

// Record mode computes the coefficients; replay mode applies the stored ones
// to the same raw candidates.
DenseMatrix orth_two_block(const DenseMatrix& raw, const DenseMatrix* prev1,
                           const DenseMatrix* prev2, double defl_tol,
                           BlockTranscript& tr, bool replay) {
  const Index d = raw.rows(), w = raw.cols();
  DenseMatrix W = raw;
  if (!replay) {
    tr.width_in = w;
    for (int pass = 0; pass < 2; ++pass) {
      if (prev2) {
        tr.c_prev2[pass] = prev2->transpose() * W;
        W.noalias() -= (*prev2) * tr.c_prev2[pass];
      }
      if (prev1) {
        tr.c_prev1[pass] = prev1->transpose() * W;
        W.noalias() -= (*prev1) * tr.c_prev1[pass];
      }
    }
  } else {
    for (int pass = 0; pass < 2; ++pass) {
      if (prev2) W.noalias() -= (*prev2) * tr.c_prev2[pass];
      if (prev1) W.noalias() -= (*prev1) * tr.c_prev1[pass];
    }
  }

  const double tol = defl_tol * std::max(raw.norm(), 1e-300);
  if (!replay) {
    tr.r_int[0] = DenseMatrix::Zero(w, w);
    tr.r_int[1] = DenseMatrix::Zero(w, w);
    tr.col_norms = Vector::Zero(w);
    tr.kept.clear();
    DenseMatrix Q(d, w);
    Index r = 0;
    for (Index j = 0; j < w; ++j) {
      Vector v = W.col(j);
      for (int pass = 0; pass < 2; ++pass) {
        for (Index i = 0; i < r; ++i) {
          double c = Q.col(i).dot(v);
          v -= c * Q.col(i);
          tr.r_int[pass](i, j) = c;
        }
      }
      double nv = v.norm();
      if (nv <= tol) continue;
      Q.col(r) = v / nv;
      tr.col_norms[r] = nv;
      tr.kept.push_back(j);
      ++r;
    }
    Q.conservativeResize(d, r);
    return Q;
  }
  // replay the internal sweep with the stored coefficients
  DenseMatrix Q(d, static_cast<Index>(tr.kept.size()));
  Index r = 0;
  for (Index j = 0; j < w; ++j) {
    const bool keep =
        r < static_cast<Index>(tr.kept.size()) && tr.kept[static_cast<size_t>(r)] == j;
    Vector v = W.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (Index i = 0; i < r; ++i) v -= tr.r_int[pass](i, j) * Q.col(i);
    if (keep) {
      Q.col(r) = v / tr.col_norms[r];
      ++r;
    }
  }
  return Q;
}

}  // namespace

GainOnlyResult gain_only_eksm(const SparseMatrix& A, const DenseMatrix& B,
                              const DenseMatrix& R, const DenseMatrix& Qfactor,
                              const GainOnlyConfig& cfg) {
  const Index d = A.rows();
  require(A.cols() == d, "gain_only_eksm: A must be square");
  require(Qfactor.rows() == d, "gain_only_eksm: Qfactor rows != d");
  require(B.size() == 0 || B.rows() == d, "gain_only_eksm: B rows != d");
  if (!is_symmetric(A, 1e-12))
    throw SolverError("gain_only_eksm: A is not symmetric");

  const Index m = B.cols();
  GainOnlyResult out;
  out.K = DenseMatrix::Zero(m, d);
  const double qnorm = [&] {
    DenseMatrix G = Qfactor.transpose() * Qfactor;
    return G.norm();  // = ‖Qf·Qfᵀ‖_F
  }();
  if (qnorm == 0.0) return out;

  Eigen::LLT<DenseMatrix> R_llt(R);
  if (m > 0 && R_llt.info() != Eigen::Success)
    throw SolverError("gain_only_eksm: R is not positive definite");

  SparseFactorization fact = factorize_auto(A);
  out.factorizations = 1;
  SparseMatrix At(A.transpose());  // = A, kept for fast row-major products

  // ---------------- pass 1: short-recurrence basis, reduced solves ----------
  std::vector<BlockTranscript> transcripts(1);
  DenseMatrix U_prev;  // U_{k-1}
  DenseMatrix U_cur = orth_two_block(Qfactor, nullptr, nullptr, cfg.deflation_tol,
                                     transcripts[0], false);
  if (U_cur.cols() == 0) throw SolverError("gain_only_eksm: zero start block");
  transcripts[0].fwd_survivors = U_cur.cols();
  std::vector<Index> block_cols{U_cur.cols()};
  // chains: columns of the current block feeding A· and A⁻¹· next
  Index fwd_begin = 0, fwd_count = U_cur.cols();
  Index bwd_begin = 0, bwd_count = U_cur.cols();

  DenseMatrix AU = At * U_cur;
  DenseMatrix T = U_cur.transpose() * AU;           // grows block-tridiagonally
  DenseMatrix Bk = m > 0 ? DenseMatrix(U_cur.transpose() * B) : DenseMatrix(0, 0);
  DenseMatrix F0 = U_cur.transpose() * Qfactor;     // Qfactor lies in span(U₀)

  const Index start_rank = U_cur.cols();
  const Index max_dim = cfg.max_dim > 0
                            ? std::min(cfg.max_dim, d)
                            : std::min(d, std::max<Index>(30 * start_rank, 2 * start_rank + 2));

  DenseMatrix Y;
  bool have_y = false;
  double last_res = std::numeric_limits<double>::infinity();
  Index converged_blocks = 0;
  std::string last_reduced_error;
  out.peak_retained_blocks = 1;

  auto solve_reduced = [&](Index K) -> bool {
    DenseMatrix Sk = DenseMatrix::Zero(K, K);
    if (m > 0) Sk.noalias() = Bk.topRows(K) * R_llt.solve(Bk.topRows(K).transpose());
    DenseMatrix Qred = DenseMatrix::Zero(K, K);
    Qred.topLeftCorner(F0.rows(), F0.rows()) = F0 * F0.transpose();
    try {
      Y = solve_dense_riccati(T.topLeftCorner(K, K).transpose(), Sk, Qred);
      have_y = true;
      return true;
    } catch (const SolverError& e) {
      last_reduced_error = e.what();
      return false;
    }
  };

  if (cfg.test_mode_store_basis) out.pass1_basis = U_cur;
  solve_reduced(U_cur.cols());
  for (int it = 1;; ++it) {
    const Index K = T.rows();
    if (fwd_count == 0 && bwd_count == 0) {
      // invariant subspace: the reduced problem is exact
      if ((!have_y || Y.rows() != K) && !solve_reduced(K))
        throw SolverError("gain_only_eksm: breakdown with unsolvable reduced problem: " +
                          last_reduced_error);
      last_res = 0.0;
      converged_blocks = static_cast<Index>(block_cols.size());
      break;
    }
    DenseMatrix cand(d, fwd_count + bwd_count);
    if (fwd_count > 0) cand.leftCols(fwd_count) = AU.middleCols(fwd_begin, fwd_count);
    if (bwd_count > 0)
      cand.rightCols(bwd_count) = fact.solve(U_cur.middleCols(bwd_begin, bwd_count));

    transcripts.emplace_back();
    BlockTranscript& tr = transcripts.back();
    DenseMatrix U_new =
        orth_two_block(cand, &U_cur, U_prev.cols() ? &U_prev : nullptr,
                       cfg.deflation_tol, tr, false);
    if (U_new.cols() == 0) {
      transcripts.pop_back();
      if ((!have_y || Y.rows() != K) && !solve_reduced(K))
        throw SolverError("gain_only_eksm: breakdown with unsolvable reduced problem: " +
                          last_reduced_error);
      last_res = 0.0;
      converged_blocks = static_cast<Index>(block_cols.size());
      break;
    }
    Index nf = 0;
    for (Index kcol : tr.kept)
      if (kcol < fwd_count) ++nf;
    tr.fwd_survivors = nf;

    DenseMatrix AU_new = At * U_new;
    const Index w = U_new.cols();
    // symmetric block tridiagonal growth
    DenseMatrix T_cross = U_cur.transpose() * AU_new;   // (w_k × w)
    DenseMatrix T_diag = U_new.transpose() * AU_new;
    T.conservativeResize(K + w, K + w);
    T.block(0, K, K, w).setZero();
    T.block(K, 0, w, K).setZero();
    T.block(K - block_cols.back(), K, block_cols.back(), w) = T_cross;
    T.block(K, K - block_cols.back(), w, block_cols.back()) = T_cross.transpose();
    T.block(K, K, w, w) = T_diag;
    if (m > 0) {
      Bk.conservativeResize(K + w, m);
      Bk.bottomRows(w) = U_new.transpose() * B;
    }
    out.iterations = it;

    // residual of the level-K solution via the new coupling block
    if (have_y && Y.rows() == K) {
      const Index wlast = block_cols.back();
      DenseMatrix strip = T_cross.transpose() * Y.bottomRows(wlast);
      last_res = std::sqrt(2.0) * strip.norm() / qnorm;
      if (last_res <= cfg.tol) {
        converged_blocks = static_cast<Index>(block_cols.size());
        transcripts.pop_back();  // U_new not needed for the gain
        break;
      }
    }

    // roll the window: only two basis blocks stay alive
    U_prev = std::move(U_cur);
    U_cur = std::move(U_new);
    AU = std::move(AU_new);
    fwd_begin = 0;
    fwd_count = nf;
    bwd_begin = nf;
    bwd_count = w - nf;
    block_cols.push_back(w);
    out.peak_retained_blocks = std::max<Index>(out.peak_retained_blocks, 2);
    if (cfg.test_mode_store_basis) {
      out.pass1_basis->conservativeResize(d, K + w);
      out.pass1_basis->rightCols(w) = U_cur;
    }

    if (K + w >= max_dim) {
      if (!solve_reduced(K + w))
        throw SolverError("gain_only_eksm: non-convergence at max_dim " +
                          std::to_string(max_dim) + ": " + last_reduced_error);
      // probe one further block (not retained) to evaluate the final residual
      if (fwd_count > 0 || bwd_count > 0) {
        DenseMatrix probe(d, fwd_count + bwd_count);
        if (fwd_count > 0) probe.leftCols(fwd_count) = AU.middleCols(fwd_begin, fwd_count);
        if (bwd_count > 0)
          probe.rightCols(bwd_count) = fact.solve(U_cur.middleCols(bwd_begin, bwd_count));
        BlockTranscript ptr_tr;
        DenseMatrix U_probe = orth_two_block(probe, &U_cur, U_prev.cols() ? &U_prev : nullptr,
                                             cfg.deflation_tol, ptr_tr, false);
        if (U_probe.cols() > 0) {
          DenseMatrix strip = (U_probe.transpose() * AU) * Y.bottomRows(U_cur.cols());
          last_res = std::sqrt(2.0) * strip.norm() / qnorm;
        } else {
          last_res = 0.0;
        }
      } else {
        last_res = 0.0;
      }
      if (last_res > cfg.tol)
        throw SolverError("gain_only_eksm: space dimension " + std::to_string(K + w) +
                          " reached limit " + std::to_string(max_dim) + " with residual " +
                          std::to_string(last_res));
      converged_blocks = static_cast<Index>(block_cols.size());
      break;
    }
    if (it % std::max(1, cfg.reduced_solve_period) == 0) solve_reduced(K + w);
  }

  // ---------------- pass 2: regenerate blocks, accumulate the gain ----------
  const Index Kfin = Y.rows();
  out.space_dim = Kfin;
  out.residual = last_res;
  DenseMatrix M = m > 0 ? DenseMatrix(R_llt.solve(Bk.topRows(Kfin).transpose() * Y))
                        : DenseMatrix(0, Kfin);  // m × K

  DenseMatrix P_prev, P_cur;  // regenerated rolling blocks
  Index col_off = 0;
  Index pfwd_begin = 0, pfwd_count = 0, pbwd_begin = 0, pbwd_count = 0;
  for (Index blk = 0; blk < converged_blocks; ++blk) {
    DenseMatrix raw;
    if (blk == 0) {
      raw = Qfactor;
    } else {
      raw.resize(d, pfwd_count + pbwd_count);
      if (pfwd_count > 0)
        raw.leftCols(pfwd_count) = At * P_cur.middleCols(pfwd_begin, pfwd_count);
      if (pbwd_count > 0)
        raw.rightCols(pbwd_count) = fact.solve(P_cur.middleCols(pbwd_begin, pbwd_count));
    }
    DenseMatrix P_new = orth_two_block(raw, blk ? &P_cur : nullptr,
                                       P_prev.cols() ? &P_prev : nullptr,
                                       cfg.deflation_tol, transcripts[static_cast<size_t>(blk)],
                                       true);
    const Index w = P_new.cols();
    if (m > 0) out.K.noalias() += M.middleCols(col_off, w) * P_new.transpose();
    if (cfg.test_mode_store_basis) {
      if (!out.pass2_basis) out.pass2_basis = DenseMatrix(d, 0);
      out.pass2_basis->conservativeResize(d, col_off + w);
      out.pass2_basis->rightCols(w) = P_new;
    }
    col_off += w;
    if (blk == 0) {  // both chains seeded from the start block
      pfwd_begin = 0;
      pfwd_count = w;
      pbwd_begin = 0;
      pbwd_count = w;
    } else {
      Index nf = transcripts[static_cast<size_t>(blk)].fwd_survivors;
      pfwd_begin = 0;
      pfwd_count = nf;
      pbwd_begin = nf;
      pbwd_count = w - nf;
    }
    P_prev = std::move(P_cur);
    P_cur = std::move(P_new);
  }
  return out;
}

}  // namespace sdre

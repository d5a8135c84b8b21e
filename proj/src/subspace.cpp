#include "sdre/krylov/subspace.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>

#include "sdre/linalg/factorization.hpp"
#include "sdre/linalg/orthonormalize.hpp"
#include "sdre/linalg/sparse.hpp"

namespace sdre {

SpaceOps make_equation_space_ops(const SparseMatrix& A) {
  require(A.rows() == A.cols(), "make_equation_space_ops: A must be square");
  SpaceOps ops;
  ops.dim = A.rows();
  auto base = std::make_shared<SparseFactorization>(factorize_auto(A));
  auto counter = ops.factorizations;
  *counter = 1;
  SparseMatrix At = SparseMatrix(A.transpose());
  ops.apply = [At](const DenseMatrix& V) { return DenseMatrix(At * V); };
  ops.solve = [base](const DenseMatrix& V) { return base->solve_transpose(V); };
  ops.shifted_solve = [A, counter](double sigma, const DenseMatrix& V) {
    SparseMatrix As = A;
    SparseMatrix I = sparse_identity(A.rows());
    As = As - SparseMatrix(sigma * I);
    ++(*counter);
    SparseFactorization f(As, FactorKind::General);
    try {
      return f.solve_transpose(V);
    } catch (const SolverError& e) {
      throw SolverError("rk_expand: shifted system with sigma=" + std::to_string(sigma) +
                        " failed: " + e.what());
    }
  };
  return ops;
}

SpaceOps make_equation_space_ops(const StructuredClosedLoopOperator& C0) {
  SpaceOps ops;
  ops.dim = C0.dim();
  ops.apply = [&C0](const DenseMatrix& V) { return C0.apply_transpose(V); };
  ops.solve = [&C0](const DenseMatrix& V) { return C0.solve_transpose(V); };
  return ops;
}

namespace {

// Orthonormalize columns of L with an absolute column-norm cutoff; returns Q
// and the coefficient rows so that L ≈ Q·R.
std::pair<DenseMatrix, DenseMatrix> orth_abs_tol(const DenseMatrix& L, double abs_tol) {
  const Index d = L.rows(), w = L.cols();
  DenseMatrix Q(d, w), R = DenseMatrix::Zero(w, w);
  Index r = 0;
  for (Index j = 0; j < w; ++j) {
    Vector v = L.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (Index i = 0; i < r; ++i) {
        double c = Q.col(i).dot(v);
        v -= c * Q.col(i);
        R(i, j) += c;
      }
    }
    double nv = v.norm();
    if (nv <= abs_tol) continue;
    Q.col(r) = v / nv;
    R(r, j) = nv;
    ++r;
  }
  Q.conservativeResize(d, r);
  return {Q, R.topRows(r)};
}

// Appends an orthonormalized candidate block, updates T and the factored
// out-of-space component. Returns the OrthoResult so callers can map chain
// origins through `kept`.
OrthoResult append_block(KrylovState& s, const SpaceOps& ops, const DenseMatrix& cand) {
  std::vector<const DenseMatrix*> against;
  if (s.cols() > 0) against.push_back(&s.V);
  OrthoResult o = block_orthonormalize(cand, against, true, s.deflation_tol);
  if (o.rank == 0) {
    s.breakdown = true;
    return o;
  }
  const Index K = s.cols(), w = o.rank, d = s.dim;
  DenseMatrix MQ = ops.apply(o.Q);
  s.op_scale = std::max(s.op_scale, MQ.norm() / std::sqrt(static_cast<double>(w)));

  DenseMatrix VtMQ(K, w), QtMV(w, K);
  if (K > 0) {
    VtMQ.noalias() = s.V.transpose() * MQ;
    QtMV.noalias() = o.Q.transpose() * s.MV;
  }
  DenseMatrix QtMQ = o.Q.transpose() * MQ;

  // out-of-space component update: old columns lose their Q-projection,
  // new columns contribute MQ − V₊·(V₊ᵀMQ)
  const double theta_tol = 1e-13 * std::max(1.0, s.op_scale);
  DenseMatrix theta_new;
  DenseMatrix coef_new(0, K + w);
  if (s.theta.cols() > 0) {
    DenseMatrix Qt_theta = o.Q.transpose() * s.theta;
    DenseMatrix theta_tilde = s.theta - o.Q * Qt_theta;
    auto [tq, tr] = orth_abs_tol(theta_tilde, theta_tol);
    theta_new = tq;
    coef_new.resize(tq.cols(), K + w);
    coef_new.leftCols(K).noalias() = tr * s.theta_coef;
    coef_new.rightCols(w).setZero();
  }
  DenseMatrix Pq = MQ;
  if (K > 0) Pq.noalias() -= s.V * VtMQ;
  Pq.noalias() -= o.Q * QtMQ;
  if (theta_new.cols() > 0) {
    DenseMatrix cq = theta_new.transpose() * Pq;
    coef_new.block(0, K, theta_new.cols(), w) = cq;
    Pq.noalias() -= theta_new * cq;
  }
  auto [lq, lr] = orth_abs_tol(Pq, theta_tol);
  if (lq.cols() > 0) {
    DenseMatrix theta2(d, theta_new.cols() + lq.cols());
    if (theta_new.cols() > 0) theta2.leftCols(theta_new.cols()) = theta_new;
    theta2.rightCols(lq.cols()) = lq;
    DenseMatrix coef2 = DenseMatrix::Zero(theta2.cols(), K + w);
    if (coef_new.rows() > 0) coef2.topRows(coef_new.rows()) = coef_new;
    coef2.block(coef_new.rows(), K, lq.cols(), w) = lr;
    theta_new = std::move(theta2);
    coef_new = std::move(coef2);
  }
  s.theta = std::move(theta_new);
  s.theta_coef = std::move(coef_new);

  // grow V, MV, T
  DenseMatrix T_new(K + w, K + w);
  if (K > 0) {
    T_new.topLeftCorner(K, K) = s.T;
    T_new.topRightCorner(K, w) = VtMQ;
    T_new.bottomLeftCorner(w, K) = QtMV;
  }
  T_new.bottomRightCorner(w, w) = QtMQ;
  s.T = std::move(T_new);
  s.V.conservativeResize(d, K + w);
  s.V.rightCols(w) = o.Q;
  s.MV.conservativeResize(d, K + w);
  s.MV.rightCols(w) = MQ;
  s.block_offsets.push_back(K);
  s.last_new_begin = K;
  s.last_new_count = w;
  ++s.iterations;
  return o;
}

}  // namespace

KrylovState krylov_init(const SpaceOps& ops, const DenseMatrix& start_block,
                        double deflation_tol) {
  require(start_block.rows() == ops.dim, "krylov_init: start block dimension mismatch");
  KrylovState s;
  s.dim = ops.dim;
  s.deflation_tol = deflation_tol;
  OrthoResult o = append_block(s, ops, start_block);
  if (o.rank == 0) throw SolverError("krylov_init: start block is numerically zero");
  s.iterations = 0;  // expansions only
  s.breakdown = false;
  s.fwd_begin = 0;
  s.fwd_count = o.rank;
  s.bwd_begin = 0;
  s.bwd_count = o.rank;
  return s;
}

ExpandStatus ek_expand(KrylovState& s, const SpaceOps& ops) {
  if (s.fwd_count == 0 && s.bwd_count == 0) {
    s.breakdown = true;
    return ExpandStatus::Breakdown;
  }
  const Index wf = s.fwd_count, wb = s.bwd_count;
  DenseMatrix cand(s.dim, wf + wb);
  if (wf > 0) cand.leftCols(wf) = ops.apply(s.V.middleCols(s.fwd_begin, wf));
  if (wb > 0) cand.rightCols(wb) = ops.solve(s.V.middleCols(s.bwd_begin, wb));
  OrthoResult o = append_block(s, ops, cand);
  if (o.rank == 0) return ExpandStatus::Breakdown;
  // split survivors by origin
  Index nf = 0;
  for (Index k : o.kept)
    if (k < wf) ++nf;
  s.fwd_begin = s.last_new_begin;
  s.fwd_count = nf;
  s.bwd_begin = s.last_new_begin + nf;
  s.bwd_count = o.rank - nf;
  return ExpandStatus::Expanded;
}

ExpandStatus rk_expand(KrylovState& s, const SpaceOps& ops, double shift) {
  if (!ops.shifted_solve)
    throw SolverError("rk_expand: operator does not support shifted solves");
  const Index b0 = s.last_new_begin, w0 = s.last_new_count;
  if (w0 == 0) {
    s.breakdown = true;
    return ExpandStatus::Breakdown;
  }
  DenseMatrix cand = ops.shifted_solve(shift, s.V.middleCols(b0, w0));
  OrthoResult o = append_block(s, ops, cand);
  if (o.rank == 0) return ExpandStatus::Breakdown;
  s.shifts.push_back(shift);
  return ExpandStatus::Expanded;
}

double next_adaptive_shift(const KrylovState& s) {
  require(s.cols() > 0, "next_adaptive_shift: empty state");
  Eigen::EigenSolver<DenseMatrix> es(s.T, false);
  const auto ritz = es.eigenvalues();
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (Index i = 0; i < ritz.size(); ++i) {
    double r = std::abs(ritz[i].real());
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (!(hi > 0.0)) hi = 1.0;
  lo = std::max(lo, 1e-12 * hi);
  if (hi <= lo * (1.0 + 1e-8)) {  // degenerate interval: widen so shifts stay distinct
    lo *= 0.1;
    hi *= 10.0;
  }
  if (s.shifts.empty()) return std::sqrt(lo * hi);

  const int N = 401;
  const double llo = std::log(lo), lhi = std::log(hi);
  double best_z = lo, best_val = -std::numeric_limits<double>::infinity();
  for (int g = 0; g < N; ++g) {
    double z = std::exp(llo + (lhi - llo) * g / (N - 1));
    double val = 0.0;
    for (double sj : s.shifts) val += std::log(std::abs(z - sj) + 1e-300);
    for (Index i = 0; i < ritz.size(); ++i)
      val -= std::log(std::hypot(z - ritz[i].real(), ritz[i].imag()) + 1e-300);
    if (val > best_val) {
      best_val = val;
      best_z = z;
    }
  }
  return best_z;
}

}  // namespace sdre

#include "sdre/krylov/structured_operator.hpp"

namespace sdre {

StructuredClosedLoopOperator::StructuredClosedLoopOperator(
    const SparseMatrix& A0, const DenseMatrix& B, const DenseMatrix& H,
    const DenseMatrix& R, const DenseMatrix& P, double gamma, LowRankSym Pi0)
    : A0_(A0), A0_fact_(factorize_auto(A0)), Pi0_(std::move(Pi0)) {
  const Index d = A0.rows();
  require(A0.cols() == d, "StructuredClosedLoopOperator: A0 must be square");
  require(B.size() == 0 || B.rows() == d, "StructuredClosedLoopOperator: B rows != d");
  require(H.size() == 0 || H.rows() == d, "StructuredClosedLoopOperator: H rows != d");
  require(Pi0_.dim() == d || Pi0_.rank() == 0, "StructuredClosedLoopOperator: Pi0 dim != d");

  const Index m = B.cols();
  const bool with_h = gamma > 0.0 && H.cols() > 0;
  const Index p = with_h ? H.cols() : 0;
  BH_.resize(d, m + p);
  if (m > 0) BH_.leftCols(m) = B;
  if (p > 0) BH_.rightCols(p) = H;

  G_ = DenseMatrix::Zero(m + p, m + p);
  if (m > 0) G_.topLeftCorner(m, m) = R.inverse();
  if (p > 0) G_.bottomRightCorner(p, p) = -P.inverse() / (2.0 * gamma * gamma);

  if (BH_.cols() > 0) {
    W2_ = A0_fact_.solve(BH_);
    U2_ = A0_fact_.solve_transpose(Pi0_.apply(BH_));
    DenseMatrix M = BH_.transpose() * Pi0_.apply(W2_);  // [B,H]ᵀ Π₀ A₀⁻¹ [B,H]
    DenseMatrix G1 = DenseMatrix::Identity(m + p, m + p) - G_ * M;
    DenseMatrix G1t = DenseMatrix::Identity(m + p, m + p) - G_ * M.transpose();
    G1_lu_.compute(G1);
    G1t_lu_.compute(G1t);
    if (!G1_lu_.isInvertible() || !G1t_lu_.isInvertible())
      throw SolverError("StructuredClosedLoopOperator: singular G1 coupling matrix");
  }
}

DenseMatrix StructuredClosedLoopOperator::apply(const DenseMatrix& V) const {
  require(V.rows() == dim(), "StructuredClosedLoopOperator::apply: dimension mismatch");
  DenseMatrix out = A0_ * V;
  if (BH_.cols() > 0) out.noalias() -= BH_ * (G_ * (BH_.transpose() * Pi0_.apply(V)));
  return out;
}

DenseMatrix StructuredClosedLoopOperator::apply_transpose(const DenseMatrix& V) const {
  require(V.rows() == dim(), "StructuredClosedLoopOperator::apply_transpose: dimension mismatch");
  DenseMatrix out = A0_.transpose() * V;
  if (BH_.cols() > 0) out.noalias() -= Pi0_.apply(BH_ * (G_.transpose() * (BH_.transpose() * V)));
  return out;
}

DenseMatrix StructuredClosedLoopOperator::solve(const DenseMatrix& V) const {
  require(V.rows() == dim(), "StructuredClosedLoopOperator::solve: dimension mismatch");
  DenseMatrix W1 = A0_fact_.solve(V);
  if (BH_.cols() == 0) return W1;
  DenseMatrix T = BH_.transpose() * Pi0_.apply(W1);
  W1.noalias() += W2_ * G1_lu_.solve(G_ * T);
  return W1;
}

DenseMatrix StructuredClosedLoopOperator::solve_transpose(const DenseMatrix& V) const {
  require(V.rows() == dim(), "StructuredClosedLoopOperator::solve_transpose: dimension mismatch");
  DenseMatrix W1 = A0_fact_.solve_transpose(V);
  if (BH_.cols() == 0) return W1;
  DenseMatrix T = BH_.transpose() * W1;
  W1.noalias() += U2_ * G1t_lu_.solve(G_ * T);
  return W1;
}

DenseMatrix smw_apply_inverse(const StructuredClosedLoopOperator& op, const DenseMatrix& V) {
  return op.solve(V);
}

}  // namespace sdre

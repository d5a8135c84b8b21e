#include "sdre/linalg/orthonormalize.hpp"

namespace sdre {

OrthoResult block_orthonormalize(const DenseMatrix& V_new,
                                 const std::vector<const DenseMatrix*>& against,
                                 bool reorthogonalize, double deflation_tol) {
  const Index d = V_new.rows();
  const Index w = V_new.cols();
  Index p_total = 0;
  for (const DenseMatrix* P : against) {
    require(P->rows() == d, "block_orthonormalize: row counts must agree");
    p_total += P->cols();
  }

  DenseMatrix W = V_new;
  DenseMatrix C = DenseMatrix::Zero(p_total, w);
  const int passes = reorthogonalize ? 2 : 1;
  for (int pass = 0; pass < passes; ++pass) {
    Index off = 0;
    for (const DenseMatrix* P : against) {
      DenseMatrix coeff = P->transpose() * W;
      W.noalias() -= (*P) * coeff;
      C.middleRows(off, P->cols()) += coeff;
      off += P->cols();
    }
  }

  const double block_norm = V_new.norm();
  const double tol = deflation_tol * std::max(block_norm, 1e-300);

  OrthoResult out;
  out.Q.resize(d, w);
  DenseMatrix Rint = DenseMatrix::Zero(w, w);  // rows follow kept Q columns
  for (Index j = 0; j < w; ++j) {
    Vector v = W.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (Index i = 0; i < out.rank; ++i) {
        double r = out.Q.col(i).dot(v);
        v -= r * out.Q.col(i);
        Rint(i, j) += r;
      }
    }
    double nv = v.norm();
    if (nv <= tol) continue;  // dependent column, deflated
    out.Q.col(out.rank) = v / nv;
    Rint(out.rank, j) = nv;
    out.kept.push_back(j);
    ++out.rank;
  }
  out.Q.conservativeResize(d, out.rank);

  out.R.resize(p_total + out.rank, w);
  out.R.topRows(p_total) = C;
  out.R.bottomRows(out.rank) = Rint.topRows(out.rank);
  return out;
}

}  // namespace sdre

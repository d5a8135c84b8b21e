#include "sdre/sim/gmres.hpp"

#include <cmath>

namespace sdre {

Vector gmres(const std::function<Vector(const Vector&)>& apply_A, const Vector& b,
             const GmresOptions& opts, GmresReport* report,
             const std::function<Vector(const Vector&)>& right_precond) {
  const Index n = b.size();
  const double bnorm = b.norm();
  Vector x = Vector::Zero(n);
  if (report) *report = {};
  if (bnorm == 0.0) {
    if (report) report->converged = true;
    return x;
  }

  int total_it = 0;
  double rel = 1.0;
  while (total_it < opts.max_iterations) {
    Vector r = b - apply_A(x);
    double beta = r.norm();
    rel = beta / bnorm;
    if (rel <= opts.tol) break;

    const int mdim = std::min(opts.restart, static_cast<int>(n));
    DenseMatrix V(n, mdim + 1);
    DenseMatrix Hh = DenseMatrix::Zero(mdim + 1, mdim);
    Vector cs = Vector::Zero(mdim), sn = Vector::Zero(mdim);
    Vector g = Vector::Zero(mdim + 1);
    V.col(0) = r / beta;
    g[0] = beta;
    int k = 0;
    for (; k < mdim && total_it < opts.max_iterations; ++k, ++total_it) {
      Vector w = right_precond ? apply_A(right_precond(V.col(k))) : apply_A(V.col(k));
      for (Index i = 0; i <= k; ++i) {
        Hh(i, k) = V.col(i).dot(w);
        w -= Hh(i, k) * V.col(i);
      }
      Hh(k + 1, k) = w.norm();
      if (Hh(k + 1, k) > 0.0) V.col(k + 1) = w / Hh(k + 1, k);
      // apply stored Givens rotations, then form the new one
      for (Index i = 0; i < k; ++i) {
        double t = cs[i] * Hh(i, k) + sn[i] * Hh(i + 1, k);
        Hh(i + 1, k) = -sn[i] * Hh(i, k) + cs[i] * Hh(i + 1, k);
        Hh(i, k) = t;
      }
      double denom = std::hypot(Hh(k, k), Hh(k + 1, k));
      if (denom == 0.0) {
        ++k;
        break;
      }
      cs[k] = Hh(k, k) / denom;
      sn[k] = Hh(k + 1, k) / denom;
      Hh(k, k) = denom;
      Hh(k + 1, k) = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];
      rel = std::abs(g[k + 1]) / bnorm;
      if (rel <= opts.tol) {
        ++k;
        break;
      }
    }
    if (k > 0) {
      Vector y = Hh.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
      Vector update = V.leftCols(k) * y;
      x += right_precond ? right_precond(update) : update;
    }
    if (rel <= opts.tol) break;
    if (k == 0) break;  // stagnation
  }
  if (report) {
    Vector r = b - apply_A(x);
    report->iterations = total_it;
    report->relative_residual = r.norm() / bnorm;
    report->converged = report->relative_residual <= opts.tol * 10;
  }
  return x;
}

}  // namespace sdre

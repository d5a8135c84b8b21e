#include "sdre/sim/integrator.hpp"

#include <cmath>
#include <memory>

#include "sdre/linalg/factorization.hpp"

namespace sdre {

Vector implicit_euler_step(const SemilinearModel& m, const DenseMatrix& K, const Vector& w_next,
                           const Vector& x_k, double dt, const NewtonOptions& opts,
                           StepReport* report) {
  require(x_k.size() == m.d, "implicit_euler_step: state dimension mismatch");
  const bool controlled = K.size() > 0 && m.B.cols() > 0;
  const bool disturbed = w_next.size() > 0 && m.H.cols() > 0;
  Vector hw = disturbed ? Vector(m.H * w_next) : Vector::Zero(m.d);

  auto F = [&](const Vector& x) -> Vector {
    Vector rhs = apply_A(m, x, x);
    if (controlled) rhs.noalias() -= m.B * (K * x);
    if (disturbed) rhs += hw;
    return x - x_k - dt * rhs;
  };

  // frozen preconditioner: (I − Δt·A(x_k))⁻¹, the BK and Jacobian corrections
  // are low rank / O(Δt²) and left to GMRES
  std::unique_ptr<SparseFactorization> precond;
  if (opts.freeze_preconditioner) {
    SparseMatrix Pm = assemble_A(m, x_k);
    Pm = SparseMatrix(sparse_identity(m.d)) - SparseMatrix(dt * Pm);
    precond = std::make_unique<SparseFactorization>(Pm, FactorKind::General);
  }

  Vector x = x_k;
  Vector Fx = F(x);
  const double scale = std::max(x_k.norm(), 1.0);
  int gmres_total = 0;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    if (Fx.norm() / scale <= opts.tol) break;
    const double xnorm = x.norm();
    auto jv = [&](const Vector& v) -> Vector {
      double vnorm = v.norm();
      if (vnorm == 0.0) return Vector::Zero(m.d);
      double eps = std::sqrt(std::numeric_limits<double>::epsilon()) * (1.0 + xnorm) / vnorm;
      return (F(x + eps * v) - Fx) / eps;
    };
    GmresReport grep;
    Vector delta;
    if (precond) {
      auto pc = [&](const Vector& v) -> Vector { return precond->solve(v); };
      delta = gmres(jv, Vector(-Fx), opts.gmres, &grep, pc);
    } else {
      delta = gmres(jv, Vector(-Fx), opts.gmres, &grep);
    }
    gmres_total += grep.iterations;
    x += delta;
    Fx = F(x);
  }
  const double final_res = Fx.norm() / scale;
  if (report) {
    report->newton_iterations = it;
    report->gmres_iterations = gmres_total;
    report->residual = final_res;
  }
  if (final_res > opts.tol)
    throw SolverError("implicit_euler_step: Newton did not converge in " +
                      std::to_string(opts.max_iterations) +
                      " iterations, residual = " + std::to_string(final_res));
  return x;
}

}  // namespace sdre

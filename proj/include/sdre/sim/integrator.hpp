#pragma once

#include "sdre/sdre/model.hpp"
#include "sdre/sim/gmres.hpp"

namespace sdre {

struct NewtonOptions {
  double tol = 1e-10;  // ‖F‖ / max(‖x_k‖, 1)
  int max_iterations = 20;
  GmresOptions gmres{1e-8, 80, 400};
  bool freeze_preconditioner = true;  // sparse LU of (I − Δt·A(x_k)) per step
};

struct StepReport {
  int newton_iterations = 0;
  int gmres_iterations = 0;
  double residual = 0.0;
};

/// One implicit Euler step of ẋ = A(x)x − B·K·x + H·w(t) with the gain frozen
/// over the step: solves x₊ = x_k + Δt·(A(x₊)x₊ − BKx₊ + Hw₊) by a
/// Jacobian-free Newton–Krylov iteration (one-sided finite-difference
/// directional derivatives inside GMRES).
Vector implicit_euler_step(const SemilinearModel& m, const DenseMatrix& K, const Vector& w_next,
                           const Vector& x_k, double dt, const NewtonOptions& opts = {},
                           StepReport* report = nullptr);

}  // namespace sdre

#pragma once

#include <functional>

#include "sdre/types.hpp"

namespace sdre {

struct GmresOptions {
  double tol = 1e-8;  // relative to ‖b‖
  int restart = 80;
  int max_iterations = 400;
};

struct GmresReport {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Restarted GMRES for A·x = b with matrix-free operator and optional right
/// preconditioner (solves with M, i.e. x = M⁻¹·u).
Vector gmres(const std::function<Vector(const Vector&)>& apply_A, const Vector& b,
             const GmresOptions& opts, GmresReport* report = nullptr,
             const std::function<Vector(const Vector&)>& right_precond = nullptr);

}  // namespace sdre

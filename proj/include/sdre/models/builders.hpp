#pragma once

#include "sdre/models/grid.hpp"
#include "sdre/sdre/model.hpp"

namespace sdre {

/// sin(t)/t with a Taylor guard near zero; smooth, bounded by 1 in magnitude.
double sinc_guarded(double t);

struct SineGordonParams {
  double alpha = 0.05;
  double beta = 2.0;
  double xi_left = -10.0, xi_right = 10.0;
  Index n = 201;  // grid nodes; state dimension is 2n
  Patch omega_c = Patch::interval(-1.0, 1.0);
  PatchSet omega_o = {Patch::interval(-2.5, -1.5), Patch::interval(1.5, 2.5)};
  double R = 1.0;
};

struct ZeldovichParams {
  double eps = 0.2;
  double nu = 0.1;
  double mu = 10.0;
  Index n = 101;  // nodes per axis on [0,1]²
  BoundaryKind bc = BoundaryKind::Neumann;
  double R = 0.1;
  double P = 1.0;
  double gamma = 0.0;  // 0 = H2
  PatchSet omega_c;    // empty → paper layout
  PatchSet omega_o;

  /// Example 5.3 setup: Dirichlet boundary, ϵ=0.1, ν=0, μ=8.
  static ZeldovichParams dirichlet_variant();
};

struct BurgersParams {
  double eps = 0.1;
  Index n = 101;
  double R = 0.05;
  double P = 1.0;
  double gamma = 0.0;  // Example 5.5 uses 0.1
  PatchSet omega_c;
  PatchSet omega_o;
};

struct BuiltModel {
  SemilinearModel model;
  Vector x0;
  Grid grid;
};

/// Damped sine-Gordon in first-order form, Dirichlet boundary, state (X, Ẋ).
BuiltModel build_sine_gordon(const SineGordonParams& p = {});

/// Degenerate Zeldovich reaction-diffusion on [0,1]².
BuiltModel build_zeldovich(const ZeldovichParams& p = {});

/// Viscous Burgers with exponential forcing on [0,1]², Dirichlet boundary.
BuiltModel build_burgers(const BurgersParams& p = {});

/// Paper input/disturbance patch layout (black squares of Fig. 2).
PatchSet zeldovich_control_patches();
/// Paper output patch layout (blue squares of Fig. 2).
PatchSet zeldovich_output_patches();

/// Nonzero equilibria of the uncontrolled Zeldovich dynamics,
/// νX + μ(X²−X³) = 0: X = (1 ± √(1+4ν/μ))/2.
double zeldovich_stable_equilibrium(double nu, double mu);

}  // namespace sdre

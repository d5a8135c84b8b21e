#include "sdre/models/builders.hpp"

#include <cmath>

namespace sdre {

double sinc_guarded(double t) {
  const double a = std::abs(t);
  if (a < 1e-4) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0 - t2 * t2 * t2 / 5040.0;
  }
  return std::sin(t) / t;
}

namespace {

double sech_safe(double t) {
  const double a = std::abs(t);
  if (a > 700.0) return 0.0;
  const double e = std::exp(-a);
  return 2.0 * e / (1.0 + e * e);
}

}  // namespace

PatchSet zeldovich_control_patches() {
  return {Patch::rect(0.1, 0.3, 0.1, 0.3), Patch::rect(0.7, 0.9, 0.7, 0.9),
          Patch::rect(0.1, 0.3, 0.7, 0.9), Patch::rect(0.7, 0.9, 0.1, 0.3)};
}

PatchSet zeldovich_output_patches() {
  return {Patch::rect(0.1, 0.3, 0.4, 0.6), Patch::rect(0.7, 0.9, 0.4, 0.6),
          Patch::rect(0.4, 0.6, 0.1, 0.3), Patch::rect(0.4, 0.6, 0.7, 0.9)};
}

double zeldovich_stable_equilibrium(double nu, double mu) {
  return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * nu / mu));
}

ZeldovichParams ZeldovichParams::dirichlet_variant() {
  ZeldovichParams p;
  p.eps = 0.1;
  p.nu = 0.0;
  p.mu = 8.0;
  p.bc = BoundaryKind::Dirichlet;
  return p;
}

BuiltModel build_sine_gordon(const SineGordonParams& p) {
  require(p.n >= 3, "build_sine_gordon: need n >= 3");
  Grid grid = Grid::line(p.xi_left, p.xi_right, p.n);
  const Index n = p.n;
  const Index d = 2 * n;
  const double h = grid.spacing(0);

  SemilinearModel m;
  m.d = d;
  // A₀ = [[0, I], [Δ_d, −αI]]
  SparseMatrix L = laplacian_1d(n, h, BoundaryKind::Dirichlet);
  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(L.nonZeros()) + 2 * static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) trip.emplace_back(i, n + i, 1.0);
  for (Index k = 0; k < L.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(L, k); it; ++it)
      trip.emplace_back(n + it.row(), it.col(), it.value());
  for (Index i = 0; i < n; ++i) trip.emplace_back(n + i, n + i, -p.alpha);
  m.A0.resize(d, d);
  m.A0.setFromTriplets(trip.begin(), trip.end());
  m.A0.makeCompressed();

  // −β·sinc(X_i) coupling the position block into the velocity equations
  DiagonalUpdate du;
  du.row0 = n;
  du.col0 = 0;
  du.slice0 = 0;
  du.count = n;
  const double beta = p.beta;
  du.g = [beta](double s) { return -beta * sinc_guarded(s); };
  m.terms.push_back(du);

  m.B = DenseMatrix::Zero(d, 1);
  m.B.col(0).tail(n) = indicator_vector(grid, p.omega_c);
  m.H = DenseMatrix::Zero(d, 0);
  DenseMatrix Cpos = output_factor(grid, p.omega_o);
  m.Cfactor = DenseMatrix::Zero(d, Cpos.cols());
  m.Cfactor.topRows(n) = Cpos;
  m.R = p.R * DenseMatrix::Identity(1, 1);
  m.P = DenseMatrix::Identity(0, 0);
  m.gamma = 0.0;
  m.symmetric_A = false;

  Vector x0 = Vector::Zero(d);
  for (Index i = 0; i < n; ++i) {
    double xi = grid.coord(0, i);
    x0[n + i] = xi == 0.0 ? 0.0 : (8.0 / 3.0) * sech_safe(2.0 / (3.0 * xi));
  }
  return {std::move(m), std::move(x0), grid};
}

BuiltModel build_zeldovich(const ZeldovichParams& p) {
  require(p.n >= 3, "build_zeldovich: need n >= 3");
  Grid grid = Grid::square(0.0, 1.0, p.n);
  const Index d = grid.node_count();
  const double h = grid.spacing(0);

  SemilinearModel m;
  m.d = d;
  SparseMatrix L = kron_tridiag_2d(p.n, p.n, {1, -2, 1}, h, p.bc);
  m.A0 = SparseMatrix(p.eps * L);
  if (p.nu != 0.0)
    m.A0 = m.A0 + SparseMatrix(p.nu * sparse_identity(d));
  m.A0.makeCompressed();

  DiagonalUpdate du;
  du.row0 = du.col0 = du.slice0 = 0;
  du.count = d;
  const double mu = p.mu;
  du.g = [mu](double s) { return mu * (s - s * s); };
  m.terms.push_back(du);

  PatchSet wc = p.omega_c.empty() ? zeldovich_control_patches() : p.omega_c;
  PatchSet wo = p.omega_o.empty() ? zeldovich_output_patches() : p.omega_o;
  m.B = indicator_union(grid, wc);
  m.H = indicator_union(grid, wc);  // ω_d = ω_c in the paper layout
  m.Cfactor = output_factor(grid, wo);
  m.R = p.R * DenseMatrix::Identity(1, 1);
  m.P = p.P * DenseMatrix::Identity(1, 1);
  m.gamma = p.gamma;
  m.symmetric_A = true;

  Vector x0(d);
  for (Index i2 = 0; i2 < p.n; ++i2)
    for (Index i1 = 0; i1 < p.n; ++i1)
      x0[grid.node_index(i1, i2)] = std::sin(grid.coord(0, i1)) * std::sin(grid.coord(1, i2));
  return {std::move(m), std::move(x0), grid};
}

BuiltModel build_burgers(const BurgersParams& p) {
  require(p.n >= 3, "build_burgers: need n >= 3");
  Grid grid = Grid::square(0.0, 1.0, p.n);
  const Index d = grid.node_count();
  const double h = grid.spacing(0);

  SemilinearModel m;
  m.d = d;
  SparseMatrix L = kron_tridiag_2d(p.n, p.n, {1, -2, 1}, h, BoundaryKind::Dirichlet);
  m.A0 = SparseMatrix(p.eps * L);
  m.A0.makeCompressed();

  // advection −diag(X)·D with the backward-difference gradient D
  RowScaled rs;
  rs.D = kron_tridiag_2d(p.n, p.n, {-1, 1, 0}, h, BoundaryKind::Dirichlet);
  rs.sign = -1.0;
  m.terms.push_back(rs);

  // exponential forcing diag(1.5·e^{−0.1X})
  DiagonalUpdate du;
  du.row0 = du.col0 = du.slice0 = 0;
  du.count = d;
  du.g = [](double s) { return 1.5 * std::exp(-0.1 * s); };
  m.terms.push_back(du);

  PatchSet wc = p.omega_c.empty() ? zeldovich_control_patches() : p.omega_c;
  PatchSet wo = p.omega_o.empty() ? zeldovich_output_patches() : p.omega_o;
  m.B = indicator_union(grid, wc);
  m.H = indicator_union(grid, wc);
  m.Cfactor = output_factor(grid, wo);
  m.R = p.R * DenseMatrix::Identity(1, 1);
  m.P = p.P * DenseMatrix::Identity(1, 1);
  m.gamma = p.gamma;
  m.symmetric_A = false;

  Vector x0(d);
  for (Index i2 = 0; i2 < p.n; ++i2)
    for (Index i1 = 0; i1 < p.n; ++i1)
      x0[grid.node_index(i1, i2)] = std::sin(grid.coord(0, i1)) * std::sin(grid.coord(1, i2));
  return {std::move(m), std::move(x0), grid};
}

}  // namespace sdre

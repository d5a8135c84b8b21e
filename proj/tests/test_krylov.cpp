#include <doctest.h>

#include <Eigen/Dense>

#include <random>
#include <set>

#include "oracles.hpp"
#include "sdre/dense/lyapunov.hpp"
#include "sdre/dense/riccati.hpp"
#include "sdre/krylov/galerkin.hpp"
#include "sdre/krylov/structured_operator.hpp"
#include "sdre/krylov/subspace.hpp"
#include "sdre/linalg/sparse.hpp"

using namespace sdre;

namespace {

SparseMatrix sparse_from_dense(const DenseMatrix& D) {
  SparseMatrix A(D.rows(), D.cols());
  std::vector<Triplet> trip;
  for (Index i = 0; i < D.rows(); ++i)
    for (Index j = 0; j < D.cols(); ++j)
      if (D(i, j) != 0.0) trip.emplace_back(i, j, D(i, j));
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

SparseMatrix random_stable_sparse(Index n, std::mt19937& rng, double margin = 0.5) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Triplet> trip;
  for (Index i = 0; i < n; ++i) {
    trip.emplace_back(i, i, 0.0);
    if (i > 0) trip.emplace_back(i, i - 1, 0.5 * g(rng));
    if (i + 1 < n) trip.emplace_back(i, i + 1, 0.5 * g(rng));
    trip.emplace_back(i, (i * 7 + 3) % n, 0.3 * g(rng));
  }
  SparseMatrix A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  DenseMatrix Ad(A);
  Eigen::EigenSolver<DenseMatrix> es(Ad, false);
  double shift = es.eigenvalues().real().maxCoeff() + margin;
  A = A - SparseMatrix(shift * sparse_identity(n));
  A.makeCompressed();
  return A;
}

}  // namespace

TEST_CASE("ek_expand deflates on an invariant subspace start") {
  Vector d(3);
  d << 1, 2, 3;
  SpaceOps ops = make_equation_space_ops(sparse_diag(d));
  DenseMatrix v0 = DenseMatrix::Zero(3, 1);
  v0(0, 0) = 1.0;
  KrylovState s = krylov_init(ops, v0);
  CHECK(ek_expand(s, ops) == ExpandStatus::Breakdown);
  CHECK(s.breakdown);
}

TEST_CASE("ek_expand grows by two directions per step on a nonnormal matrix") {
  std::mt19937 rng(3);
  DenseMatrix Ad(6, 6);
  Ad.setZero();
  for (Index i = 0; i < 6; ++i) {
    Ad(i, i) = -1.0 - 0.3 * i;
    if (i + 1 < 6) Ad(i, i + 1) = 1.5;  // nonnormal upper shift
  }
  SpaceOps ops = make_equation_space_ops(sparse_from_dense(Ad));
  KrylovState s = krylov_init(ops, test::random_dense(6, 1, rng));
  CHECK(s.cols() == 1);
  CHECK(ek_expand(s, ops) == ExpandStatus::Expanded);
  CHECK(s.cols() == 3);
  CHECK(ek_expand(s, ops) == ExpandStatus::Expanded);
  CHECK(s.cols() == 5);
  // rank oracle on the assembled extended space
  DenseMatrix M = Ad.transpose();
  DenseMatrix K(6, 5);
  DenseMatrix v = s.V.col(0);
  K.col(0) = v;
  K.col(1) = M * v;
  K.col(2) = M.fullPivLu().solve(v);
  K.col(3) = M * K.col(1);
  K.col(4) = M.fullPivLu().solve(K.col(2));
  Eigen::ColPivHouseholderQR<DenseMatrix> qr(K);
  CHECK(qr.rank() == 5);
  // the computed basis spans the same space
  DenseMatrix proj = K - s.V * (s.V.transpose() * K);
  CHECK(proj.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("ek basis stays orthonormal on a 100x100 Laplacian") {
  SparseMatrix L = laplacian_1d(100, 0.1, BoundaryKind::Dirichlet);
  SpaceOps ops = make_equation_space_ops(L);
  std::mt19937 rng(5);
  KrylovState s = krylov_init(ops, test::random_dense(100, 2, rng));
  for (int it = 0; it < 8; ++it) ek_expand(s, ops);
  DenseMatrix G = s.V.transpose() * s.V;
  CHECK((G - DenseMatrix::Identity(s.cols(), s.cols())).cwiseAbs().maxCoeff() < 1e-10);
  // projected operator agrees with the explicit product
  DenseMatrix T_explicit = s.V.transpose() * DenseMatrix(L.transpose()) * s.V;
  CHECK((s.T - T_explicit).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("rk_expand with zero shift is an inverse-Krylov step") {
  std::mt19937 rng(9);
  SparseMatrix A = random_stable_sparse(12, rng);
  SpaceOps ops = make_equation_space_ops(A);
  DenseMatrix v0 = test::random_dense(12, 1, rng);
  KrylovState s = krylov_init(ops, v0);
  CHECK(rk_expand(s, ops, 0.0) == ExpandStatus::Expanded);
  DenseMatrix w = DenseMatrix(A.transpose()).fullPivLu().solve(s.V.col(0));
  DenseMatrix resid = w - s.V * (s.V.transpose() * w);
  CHECK(resid.norm() < 1e-10 * w.norm());
}

TEST_CASE("rk_expand spans the shifted-inverse chain") {
  const Index n = 50;
  SparseMatrix A0 = laplacian_1d(n, 1.0 / (n + 1), BoundaryKind::Dirichlet);
  std::mt19937 rng(13);
  SpaceOps ops = make_equation_space_ops(A0);
  DenseMatrix v0 = test::random_dense(n, 1, rng);
  KrylovState s = krylov_init(ops, v0);
  double s2 = 30.0, s3 = 700.0;
  rk_expand(s, ops, s2);
  rk_expand(s, ops, s3);
  DenseMatrix M = DenseMatrix(A0.transpose());
  DenseMatrix I = DenseMatrix::Identity(n, n);
  DenseMatrix c1 = (M - s2 * I).fullPivLu().solve(v0);
  DenseMatrix c2 = (M - s3 * I).fullPivLu().solve(c1);
  for (const DenseMatrix* v : {&v0, &c1, &c2}) {
    DenseMatrix r = *v - s.V * (s.V.transpose() * (*v));
    CHECK(r.norm() < 1e-9 * v->norm());
  }
}

TEST_CASE("rk_expand errors when the shift hits an eigenvalue") {
  Vector d(3);
  d << 2, 3, 4;
  SparseMatrix A = sparse_diag(d);
  SpaceOps ops = make_equation_space_ops(A);
  KrylovState s = krylov_init(ops, DenseMatrix::Ones(3, 1));
  CHECK_THROWS_AS(rk_expand(s, ops, 3.0), SolverError);
}

TEST_CASE("adaptive shifts: first call geometric mean, mirrored interval, distinct") {
  Vector d(10);
  for (int i = 0; i < 10; ++i) d[i] = -(i + 1.0);
  SparseMatrix A = sparse_diag(d);
  SpaceOps ops = make_equation_space_ops(A);
  // full-rank start makes the Ritz interval the exact spectral interval [1, 10]
  KrylovState s = krylov_init(ops, DenseMatrix::Identity(10, 10));
  CHECK(next_adaptive_shift(s) == doctest::Approx(std::sqrt(10.0)));

  // spectrum in [−100, −1] → shifts in [1, 100], never repeating
  Vector d2(40);
  for (int i = 0; i < 40; ++i) d2[i] = -1.0 - 99.0 * i / 39.0;
  SparseMatrix A2 = sparse_diag(d2);
  SpaceOps ops2 = make_equation_space_ops(A2);
  std::mt19937 rng(21);
  KrylovState s2 = krylov_init(ops2, test::random_dense(40, 1, rng));
  std::set<double> seen;
  for (int it = 0; it < 20; ++it) {
    double sig = next_adaptive_shift(s2);
    CHECK(sig >= 1.0 - 1e-9);
    CHECK(sig <= 100.0 + 1e-9);
    CHECK(seen.count(sig) == 0);
    seen.insert(sig);
    if (rk_expand(s2, ops2, sig) == ExpandStatus::Breakdown) break;
  }
  CHECK(seen.size() == 20);
}

TEST_CASE("galerkin_lyapunov matches the dense solver at small scale") {
  std::mt19937 rng(31);
  for (Index n : {40, 100}) {
    SparseMatrix A = random_stable_sparse(n, rng);
    DenseMatrix F = test::random_dense(n, 2, rng);
    DenseMatrix S = DenseMatrix::Identity(2, 2);
    GalerkinConfig cfg;
    cfg.tol = 1e-10;
    cfg.max_dim = n;
    auto res = galerkin_lyapunov(A, F, S, cfg);
    DenseMatrix W = res.W.dense();
    DenseMatrix Wd = solve_dense_lyapunov(DenseMatrix(A), F * F.transpose());
    CHECK((W - Wd).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("galerkin_lyapunov zero right-hand side returns zero in zero iterations") {
  std::mt19937 rng(33);
  SparseMatrix A = random_stable_sparse(30, rng);
  auto res = galerkin_lyapunov(A, DenseMatrix::Zero(30, 2), DenseMatrix::Identity(2, 2), {});
  CHECK(res.W.rank() == 0);
  CHECK(res.iterations == 0);
  CHECK(res.W.dense().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("galerkin_lyapunov residual estimate agrees with the assembled residual") {
  std::mt19937 rng(35);
  const Index n = 200;
  SparseMatrix A = random_stable_sparse(n, rng);
  DenseMatrix F = test::random_dense(n, 2, rng);
  DenseMatrix S(2, 2);
  S << 0, 1, 1, 0;  // indefinite core
  GalerkinConfig cfg;
  cfg.tol = 1e-6;
  cfg.max_dim = n;
  auto res = galerkin_lyapunov(A, F, S, cfg);
  DenseMatrix W = res.W.dense();
  DenseMatrix Ad(A);
  double true_res = (Ad.transpose() * W + W * Ad + F * S * F.transpose()).norm() /
                    (F * S * F.transpose()).norm();
  CHECK(res.residual == doctest::Approx(true_res).epsilon(1e-6));
}

TEST_CASE("galerkin_riccati matches the dense solver (H2, rational space)") {
  std::mt19937 rng(37);
  for (Index n : {40, 100}) {
    SparseMatrix A = random_stable_sparse(n, rng);
    DenseMatrix B = test::random_dense(n, 2, rng);
    DenseMatrix R = DenseMatrix::Identity(2, 2);
    DenseMatrix Qf = test::random_dense(n, 2, rng);
    GalerkinConfig cfg;
    cfg.space = KrylovSpaceKind::Rational;
    cfg.tol = 1e-9;
    cfg.max_dim = n;
    auto res = galerkin_riccati(A, B, R, std::nullopt, Qf, cfg);
    DenseMatrix Pi = res.Pi.dense();
    DenseMatrix Pid = solve_dense_riccati(DenseMatrix(A), B * B.transpose(), Qf * Qf.transpose());
    CHECK((Pi - Pid).cwiseAbs().maxCoeff() < 1e-6);
    DenseMatrix Kd = B.transpose() * Pid;
    CHECK((res.K - Kd).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("galerkin_riccati with B = 0 reduces to the Lyapunov solution") {
  std::mt19937 rng(41);
  const Index n = 60;
  SparseMatrix A = random_stable_sparse(n, rng);
  DenseMatrix Qf = test::random_dense(n, 1, rng);
  GalerkinConfig cfg;
  cfg.tol = 1e-10;
  cfg.max_dim = n;
  auto r1 = galerkin_riccati(A, DenseMatrix::Zero(n, 0), DenseMatrix::Zero(0, 0), std::nullopt,
                             Qf, cfg);
  auto r2 = galerkin_lyapunov(A, Qf, DenseMatrix::Identity(1, 1), cfg);
  CHECK((r1.Pi.dense() - r2.W.dense()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("galerkin_riccati H-infinity error for gamma below gamma*") {
  // scalar toy: saturating space makes the reduced problem the full problem
  Vector a(1);
  a << 1.0;
  SparseMatrix A = sparse_diag(a);
  DenseMatrix B = DenseMatrix::Ones(1, 1), R = DenseMatrix::Ones(1, 1);
  DenseMatrix Qf = DenseMatrix::Ones(1, 1);
  SecondQuadratic sq{DenseMatrix::Ones(1, 1), DenseMatrix::Ones(1, 1), 0.3};
  GalerkinConfig cfg;
  cfg.max_dim = 1;
  CHECK_THROWS_AS(galerkin_riccati(A, B, R, sq, Qf, cfg), SolverError);
  sq.gamma = 2.0;
  CHECK_NOTHROW(galerkin_riccati(A, B, R, sq, Qf, cfg));
}

TEST_CASE("smw correctness against dense assembly and round trip") {
  std::mt19937 rng(43);
  const Index n = 80;
  SparseMatrix A0 = random_stable_sparse(n, rng);
  DenseMatrix B = test::random_dense(n, 2, rng);
  DenseMatrix H = test::random_dense(n, 1, rng);
  DenseMatrix R = DenseMatrix::Identity(2, 2) * 0.5;
  DenseMatrix P = DenseMatrix::Identity(1, 1);
  double gamma = 0.7;
  DenseMatrix Z = test::random_dense(n, 3, rng);
  Eigen::HouseholderQR<DenseMatrix> qr(Z);
  LowRankSym Pi0{qr.householderQ() * DenseMatrix::Identity(n, 3),
                 Vector::LinSpaced(3, 1.0, 3.0).asDiagonal()};

  StructuredClosedLoopOperator op(A0, B, H, R, P, gamma, Pi0);
  DenseMatrix V = test::random_dense(n, 4, rng);

  DenseMatrix G = DenseMatrix::Zero(3, 3);
  G.topLeftCorner(2, 2) = R.inverse();
  G(2, 2) = -1.0 / (2 * gamma * gamma);
  DenseMatrix BH(n, 3);
  BH << B, H;
  DenseMatrix C0 = DenseMatrix(A0) - BH * G * BH.transpose() * Pi0.dense();
  DenseMatrix W_oracle = C0.fullPivLu().solve(V);
  DenseMatrix W = smw_apply_inverse(op, V);
  CHECK((W - W_oracle).cwiseAbs().maxCoeff() < 1e-9 * W_oracle.cwiseAbs().maxCoeff());

  // round trip, matrix-free application
  CHECK((op.apply(W) - V).cwiseAbs().maxCoeff() < 1e-9 * V.cwiseAbs().maxCoeff());
  // transpose path
  DenseMatrix Wt = op.solve_transpose(V);
  CHECK((op.apply_transpose(Wt) - V).cwiseAbs().maxCoeff() < 1e-9 * V.cwiseAbs().maxCoeff());
  CHECK((C0.transpose() * Wt - V).cwiseAbs().maxCoeff() < 1e-8 * V.cwiseAbs().maxCoeff());

  // B = H = 0 degenerates to A0 solves
  StructuredClosedLoopOperator op0(A0, DenseMatrix::Zero(n, 0), DenseMatrix::Zero(n, 0), R, P,
                                   0.0, LowRankSym::zero(n));
  DenseMatrix Wa = op0.solve(V);
  CHECK((DenseMatrix(A0) * Wa - V).cwiseAbs().maxCoeff() < 1e-9 * V.cwiseAbs().maxCoeff());
}

TEST_CASE("galerkin_lyapunov through the structured operator matches dense") {
  std::mt19937 rng(47);
  const Index n = 70;
  SparseMatrix A0 = random_stable_sparse(n, rng);
  DenseMatrix B = test::random_dense(n, 1, rng);
  DenseMatrix R = DenseMatrix::Identity(1, 1) * 0.1;
  DenseMatrix Zr = test::random_dense(n, 2, rng);
  Eigen::HouseholderQR<DenseMatrix> qr(Zr);
  LowRankSym Pi0{qr.householderQ() * DenseMatrix::Identity(n, 2),
                 (Vector(2) << 0.8, 0.4).finished().asDiagonal()};
  StructuredClosedLoopOperator op(A0, B, DenseMatrix::Zero(n, 0), R,
                                  DenseMatrix::Identity(1, 1), 0.0, Pi0);
  DenseMatrix F = test::random_dense(n, 2, rng);
  DenseMatrix S(2, 2);
  S << 0, 1, 1, 0;
  GalerkinConfig cfg;
  cfg.tol = 1e-10;
  cfg.max_dim = n;
  auto res = galerkin_lyapunov(op, F, S, cfg);
  DenseMatrix C0 = DenseMatrix(A0) - B * R.inverse() * B.transpose() * Pi0.dense();
  DenseMatrix Wd = solve_dense_lyapunov(C0, F * S * F.transpose());
  CHECK((res.W.dense() - Wd).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("galerkin residual estimate lands within an order of magnitude") {
  std::mt19937 rng(51);
  const Index n = 120;
  SparseMatrix A = random_stable_sparse(n, rng);
  DenseMatrix Qf = test::random_dense(n, 1, rng);
  DenseMatrix B = test::random_dense(n, 1, rng);
  GalerkinConfig cfg;
  cfg.space = KrylovSpaceKind::Rational;
  cfg.tol = 1e-5;  // stop early so the residual is nontrivial
  cfg.max_dim = n;
  auto res = galerkin_riccati(A, B, DenseMatrix::Identity(1, 1), std::nullopt, Qf, cfg);
  DenseMatrix Pi = res.Pi.dense();
  DenseMatrix Ad(A);
  double true_res = (Ad.transpose() * Pi + Pi * Ad - Pi * B * B.transpose() * Pi +
                     Qf * Qf.transpose())
                        .norm() /
                    (Qf * Qf.transpose()).norm();
  CHECK(res.residual >= true_res / 10.0);
  CHECK(res.residual <= true_res * 10.0);
}

TEST_CASE("galerkin consistency: nested reduced solutions for symmetric A") {
  // after an expansion, the previous reduced solution is the leading block of
  // the projected equation restricted to the previous space
  const Index n = 80;
  SparseMatrix A = laplacian_1d(n, 0.1, BoundaryKind::Dirichlet);
  std::mt19937 rng(53);
  DenseMatrix F = test::random_dense(n, 1, rng);
  SpaceOps ops = make_equation_space_ops(A);
  KrylovState s = krylov_init(ops, F);
  DenseMatrix Fk = s.V.transpose() * F;
  ek_expand(s, ops);
  Fk.conservativeResize(s.cols(), 1);
  Fk.bottomRows(s.last_new_count) = s.V.rightCols(s.last_new_count).transpose() * F;
  Index k_prev = s.cols();
  DenseMatrix T_prev = s.T;
  DenseMatrix Y_prev =
      SchurLyapunovSolver(T_prev.transpose()).solve(Fk * Fk.transpose());
  ek_expand(s, ops);
  // Galerkin consistency at the reduced level: leading block of the grown T
  // equals the previous T (nestedness of the projection)
  CHECK((s.T.topLeftCorner(k_prev, k_prev) - T_prev).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(Y_prev.rows() == k_prev);
}

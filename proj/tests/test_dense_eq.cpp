#include <doctest.h>

#include <Eigen/Dense>

#include <chrono>
#include <random>

#include "oracles.hpp"
#include "sdre/dense/lyapunov.hpp"
#include "sdre/dense/riccati.hpp"

using namespace sdre;

TEST_CASE("dense Lyapunov closed forms") {
  DenseMatrix A = -DenseMatrix::Identity(2, 2);
  DenseMatrix X = solve_dense_lyapunov(A, DenseMatrix::Identity(2, 2));
  CHECK((X - 0.5 * DenseMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  DenseMatrix a(1, 1), q(1, 1);
  a << -2;
  q << 4;
  CHECK(solve_dense_lyapunov(a, q)(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("dense Lyapunov matches the Kronecker oracle") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 4; ++trial) {
    DenseMatrix A = test::random_stable_dense(6, rng);
    DenseMatrix C = test::random_dense(6, 6, rng);
    DenseMatrix Q = C * C.transpose();
    DenseMatrix X = solve_dense_lyapunov(A, Q);
    DenseMatrix Xo = test::lyapunov_kron_oracle(A, Q);
    CHECK((X - Xo).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(lyapunov_residual(A, X, Q) / Q.norm() <= 1e-10);
    CHECK((X - X.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, X.norm()));
  }
}

TEST_CASE("dense Lyapunov rejects unstable A naming the eigenvalue") {
  DenseMatrix A(2, 2);
  A << 0.5, 0, 0, -1;
  try {
    solve_dense_lyapunov(A, DenseMatrix::Identity(2, 2));
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(std::string(e.what()).find("0.5") != std::string::npos);
  }
  DenseMatrix Qbad(2, 2);
  Qbad << 1, 1, 0, 1;
  CHECK_THROWS_AS(solve_dense_lyapunov(-DenseMatrix::Identity(2, 2), Qbad), SolverError);
}

TEST_CASE("dense Riccati closed forms") {
  DenseMatrix a(1, 1), s(1, 1), q(1, 1);
  a << 1;
  s << 1;
  q << 1;
  CHECK(solve_dense_riccati(a, s, q)(0, 0) == doctest::Approx(1.0 + std::sqrt(2.0)));

  DenseMatrix Z = DenseMatrix::Zero(4, 4), I = DenseMatrix::Identity(4, 4);
  DenseMatrix X = solve_dense_riccati(Z, I, I);
  CHECK((X - I).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("dense Riccati matches the Newton-Kleinman oracle") {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 4; ++trial) {
    DenseMatrix A = test::random_stable_dense(5, rng);
    DenseMatrix B = test::random_dense(5, 2, rng);
    DenseMatrix S = B * B.transpose();
    DenseMatrix C = test::random_dense(5, 2, rng);
    DenseMatrix Q = C * C.transpose();
    DenseMatrix X = solve_dense_riccati(A, S, Q);
    DenseMatrix Xo = test::newton_kleinman_oracle(A, S, Q);
    CHECK((X - Xo).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(riccati_residual(A, S, X, Q) / std::max(1.0, Q.norm()) <= 1e-9);
    // H2 stabilizing solution is PSD with a stable closed loop
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(X);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10 * X.norm());
    Eigen::EigenSolver<DenseMatrix> cl(A - S * X, false);
    CHECK(cl.eigenvalues().real().maxCoeff() < 0.0);
  }
}

TEST_CASE("dense Riccati H-infinity gamma below gamma* errors; bisection finds gamma*") {
  // scalar a=1, b=1, h=1, q=1, r=p=1 with s(γ) = 1 − 1/(2γ²): the stabilizing
  // root (a ± √(a²+sq))/s exists while a² + s·q > 0, i.e. s > −1 ⟺ γ > 1/2.
  // At γ = 1/2 the Hamiltonian eigenvalues ±√(a²+sq) meet on the imaginary axis.
  auto solve_at = [](double gamma) {
    DenseMatrix a(1, 1), q(1, 1), s(1, 1);
    a << 1;
    q << 1;
    s << 1.0 - 1.0 / (2.0 * gamma * gamma);
    return solve_dense_riccati(a, s, q);
  };
  CHECK_NOTHROW(solve_at(2.0));
  CHECK_THROWS_AS(solve_at(0.3), SolverError);
  double lo = 0.3, hi = 2.0;
  for (int i = 0; i < 40; ++i) {
    double mid = 0.5 * (lo + hi);
    try {
      solve_at(mid);
      hi = mid;
    } catch (const SolverError&) {
      lo = mid;
    }
  }
  CHECK(hi == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("residual operators") {
  std::mt19937 rng(31);
  DenseMatrix A = test::random_stable_dense(4, rng);
  DenseMatrix C = test::random_dense(4, 4, rng);
  DenseMatrix Q = C * C.transpose();
  DenseMatrix X = solve_dense_lyapunov(A, Q);
  CHECK(lyapunov_residual(A, X, Q) <= 1e-10 * Q.norm());
  CHECK(lyapunov_residual(A, DenseMatrix::Zero(4, 4), Q) == doctest::Approx(Q.norm()));

  // perturbation residual grows linearly in ε
  double r1 = lyapunov_residual(A, X + 1e-6 * DenseMatrix::Identity(4, 4), Q);
  double r2 = lyapunov_residual(A, X + 2e-6 * DenseMatrix::Identity(4, 4), Q);
  CHECK(r2 / r1 == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("oracle equivalence across small dimensions") {
  std::mt19937 rng(37);
  for (Index n : {2, 4, 8}) {
    DenseMatrix A = test::random_stable_dense(n, rng);
    DenseMatrix B = test::random_dense(n, 1, rng);
    DenseMatrix S = B * B.transpose();
    DenseMatrix C = test::random_dense(n, 1, rng);
    DenseMatrix Q = C * C.transpose();
    CHECK((solve_dense_lyapunov(A, Q) - test::lyapunov_kron_oracle(A, Q)).cwiseAbs().maxCoeff() <
          1e-8);
    CHECK((solve_dense_riccati(A, S, Q) - test::newton_kleinman_oracle(A, S, Q))
              .cwiseAbs()
              .maxCoeff() < 1e-8);
  }
}

TEST_CASE("reduced Riccati costs more than reduced Lyapunov at equal size") {
  std::mt19937 rng(41);
  const Index n = 120;
  DenseMatrix A = test::random_stable_dense(n, rng);
  DenseMatrix C = test::random_dense(n, 2, rng);
  DenseMatrix Q = C * C.transpose();
  DenseMatrix B = test::random_dense(n, 2, rng);
  DenseMatrix S = B * B.transpose();
  auto t0 = std::chrono::steady_clock::now();
  solve_dense_lyapunov(A, Q);
  auto t1 = std::chrono::steady_clock::now();
  solve_dense_riccati(A, S, Q);
  auto t2 = std::chrono::steady_clock::now();
  CHECK(std::chrono::duration<double>(t2 - t1).count() >
        std::chrono::duration<double>(t1 - t0).count());
}

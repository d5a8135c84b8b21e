#include "sdre/sdre/synthesis.hpp"

#include <Eigen/Cholesky>

#include <chrono>
#include <cmath>
#include <future>

#include "sdre/dense/lyapunov.hpp"
#include "sdre/dense/riccati.hpp"

namespace sdre {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void fill_stats(SolverStats* st, int iters, Index dim, double res, int facts, double secs) {
  if (!st) return;
  st->iterations = iters;
  st->space_dim = dim;
  st->residual = res;
  st->factorizations = facts;
  st->seconds = secs;
}

}  // namespace

std::optional<SecondQuadratic> second_quadratic(const SemilinearModel& m) {
  if (m.gamma > 0.0 && m.H.cols() > 0)
    return SecondQuadratic{m.H, m.P, m.gamma};
  return std::nullopt;
}

DenseMatrix dense_S(const SemilinearModel& m) {
  DenseMatrix S = DenseMatrix::Zero(m.d, m.d);
  if (m.B.cols() > 0) S.noalias() += m.B * m.R.llt().solve(m.B.transpose());
  if (m.gamma > 0.0 && m.H.cols() > 0)
    S.noalias() -= (1.0 / (2.0 * m.gamma * m.gamma)) * (m.H * m.P.llt().solve(m.H.transpose()));
  return S;
}

DenseMatrix lqr_gain(const SemilinearModel& m, const SynthesisOptions& opts,
                     SolverStats* stats) {
  auto t0 = Clock::now();
  SparseMatrix A0x = assemble_A(m, Vector::Zero(m.d));
  auto res = galerkin_riccati(A0x, m.B, m.R, second_quadratic(m), m.Cfactor, opts.riccati);
  fill_stats(stats, res.iterations, res.space_dim, res.residual, res.factorizations,
             seconds_since(t0));
  return res.K;
}

DenseMatrix sdre_gain(const SemilinearModel& m, const Vector& x, const SynthesisOptions& opts,
                      SolverStats* stats, const DenseMatrix* warm_start_block) {
  auto t0 = Clock::now();
  SparseMatrix Ax = assemble_A(m, x);
  if (opts.mpc_path == RiccatiPath::ExtendedGainOnly) {
    if (!m.symmetric_A)
      throw SolverError("sdre_gain: gain-only extended Krylov path requires symmetric A(x)");
    if (m.gamma > 0.0)
      throw SolverError("sdre_gain: gain-only path implements the H2 Riccati only");
    GainOnlyConfig cfg = opts.gain_only;
    cfg.tol = opts.riccati.tol;
    if (cfg.max_dim == 0) cfg.max_dim = opts.riccati.max_dim;
    auto res = gain_only_eksm(Ax, m.B, m.R, m.Cfactor, cfg);
    fill_stats(stats, res.iterations, res.space_dim, res.residual, res.factorizations,
               seconds_since(t0));
    return res.K;
  }
  auto res = galerkin_riccati(Ax, m.B, m.R, second_quadratic(m), m.Cfactor, opts.riccati,
                              opts.warm_start ? warm_start_block : nullptr);
  fill_stats(stats, res.iterations, res.space_dim, res.residual, res.factorizations,
             seconds_since(t0));
  return res.K;
}

std::vector<DenseMatrix> offline_series_scalar(const SemilinearModel& m, Index order) {
  require(order >= 0, "offline_series_scalar: order must be nonnegative");
  if (m.terms.size() != 1 || !std::holds_alternative<ScalarCoefficient>(m.terms[0]))
    throw SolverError("offline_series_scalar: model must have exactly one scalar term (r = 1)");
  const auto& sc = std::get<ScalarCoefficient>(m.terms[0]);
  DenseMatrix A0(m.A0);
  DenseMatrix A1(sc.A1);
  DenseMatrix S = dense_S(m);
  DenseMatrix Q = m.Cfactor * m.Cfactor.transpose();

  std::vector<DenseMatrix> L;
  L.reserve(static_cast<size_t>(order) + 1);
  L.push_back(solve_dense_riccati(A0, S, Q));
  if (order == 0) return L;

  DenseMatrix C0 = A0 - S * L[0];  // throws below if unstable
  SchurLyapunovSolver lyap(C0);
  for (Index n = 1; n <= order; ++n) {
    DenseMatrix Qn = L[n - 1] * A1 + A1.transpose() * L[n - 1];
    for (Index k = 1; k < n; ++k) Qn.noalias() -= L[k] * S * L[n - k];
    Qn = 0.5 * (Qn + Qn.transpose());
    L.push_back(lyap.solve(Qn));
  }
  return L;
}

DenseMatrix series_gain(const SemilinearModel& m, const std::vector<DenseMatrix>& L,
                        const Vector& x) {
  const auto& sc = std::get<ScalarCoefficient>(m.terms[0]);
  double f = sc.f1(x);
  DenseMatrix Pi = DenseMatrix::Zero(m.d, m.d);
  double fn = 1.0;
  for (const DenseMatrix& Ln : L) {
    Pi.noalias() += fn * Ln;
    fn *= f;
  }
  return m.R.llt().solve(m.B.transpose() * Pi);
}

namespace {

LowRankSym solve_pi0(const SemilinearModel& m, const SynthesisOptions& opts,
                     SolverStats* stats) {
  auto res = galerkin_riccati(m.A0, m.B, m.R, second_quadratic(m), m.Cfactor, opts.riccati);
  if (stats) {
    stats->iterations = res.iterations;
    stats->space_dim = res.space_dim;
    stats->residual = res.residual;
  }
  return res.Pi.truncated(opts.pi0_truncation);
}

}  // namespace

FirstOrderOffline offline_first_order(const SemilinearModel& m, const SynthesisOptions& opts) {
  auto t0 = Clock::now();
  const Index r = coefficient_count(m);
  if (r * m.d * m.d > opts.offline_budget_entries)
    throw SolverError("offline_first_order: r*d^2 = " + std::to_string(r * m.d * m.d) +
                      " exceeds the storage budget " +
                      std::to_string(opts.offline_budget_entries) +
                      " (use the offline-online strategy instead)");

  FirstOrderOffline out;
  out.Pi0 = solve_pi0(m, opts, nullptr);
  DenseMatrix Pi0d = out.Pi0.dense();
  DenseMatrix C0 = DenseMatrix(m.A0) - dense_S(m) * Pi0d;
  SchurLyapunovSolver lyap(C0);

  out.Pi.assign(static_cast<size_t>(r), DenseMatrix());
  struct Job {
    Index j;
    bool rank1;
    Vector u, v;
    SparseMatrix Aj;
  };
  std::vector<Job> jobs;
  jobs.reserve(static_cast<size_t>(r));
  visit_terms_rank1(
      m,
      [&](Index j, const Vector& u, const Vector& v) {
        jobs.push_back({j, true, u, v, SparseMatrix()});
      },
      [&](Index j, const SparseMatrix& Aj) {
        jobs.push_back({j, false, Vector(), Vector(), Aj});
      });

  auto worker = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      const Job& job = jobs[i];
      DenseMatrix Qj;
      if (job.rank1) {
        Vector pu = Pi0d * job.u;
        Qj = pu * job.v.transpose() + job.v * pu.transpose();
      } else {
        DenseMatrix Ajd(job.Aj);
        Qj = Pi0d * Ajd + Ajd.transpose() * Pi0d;
        Qj = 0.5 * (Qj + Qj.transpose());
      }
      out.Pi[static_cast<size_t>(job.j)] = lyap.solve(Qj);
    }
  };
  const size_t nworkers = std::min<size_t>(std::thread::hardware_concurrency(), 4);
  if (jobs.size() > 1 && nworkers > 1) {
    std::vector<std::future<void>> futures;
    size_t chunk = (jobs.size() + nworkers - 1) / nworkers;
    for (size_t w = 0; w < nworkers; ++w) {
      size_t b = w * chunk, e = std::min(jobs.size(), b + chunk);
      if (b >= e) break;
      futures.push_back(std::async(std::launch::async, worker, b, e));
    }
    for (auto& f : futures) f.get();
  } else {
    worker(0, jobs.size());
  }
  out.offline_seconds = seconds_since(t0);
  return out;
}

DenseMatrix offline_online_gain(const SemilinearModel& m,
                                const StructuredClosedLoopOperator& C0, const Vector& x,
                                const SynthesisOptions& opts, SolverStats* stats) {
  auto t0 = Clock::now();
  const LowRankSym& Pi0 = C0.pi0();
  const Index k0 = Pi0.rank();
  DenseMatrix NtZ = DenseMatrix::Zero(m.d, k0);
  apply_state_dependence_transpose(m, x, Pi0.Z, NtZ);
  DenseMatrix K = m.R.llt().solve(m.B.transpose() * Pi0.Z) * Pi0.Y * Pi0.Z.transpose();

  if (NtZ.norm() > 0.0) {
    DenseMatrix F(m.d, 2 * k0);
    F.leftCols(k0) = Pi0.Z;
    F.rightCols(k0) = NtZ * Pi0.Y;
    DenseMatrix Score = DenseMatrix::Zero(2 * k0, 2 * k0);
    Score.topRightCorner(k0, k0).setIdentity();
    Score.bottomLeftCorner(k0, k0).setIdentity();
    auto res = galerkin_lyapunov(C0, F, Score, opts.lyapunov);
    K.noalias() +=
        m.R.llt().solve(m.B.transpose() * res.W.Z) * res.W.Y * res.W.Z.transpose();
    fill_stats(stats, res.iterations, res.space_dim, res.residual, res.factorizations,
               seconds_since(t0));
  } else {
    fill_stats(stats, 0, 0, 0.0, 0, seconds_since(t0));
  }
  return K;
}

Vector worst_case_disturbance(const SemilinearModel& m, const LowRankSym& Pi, const Vector& x) {
  if (m.gamma <= 0.0)
    throw SolverError("worst_case_disturbance: H2 mode (gamma = 0) has no adversary");
  if (m.H.cols() == 0) return Vector::Zero(0);
  Vector px = Pi.apply(x);
  return (1.0 / (m.gamma * m.gamma)) * m.P.llt().solve(m.H.transpose() * px);
}

GainSchedule GainSchedule::make(const SemilinearModel& m, GainKind kind,
                                const SynthesisOptions& opts) {
  auto t0 = Clock::now();
  GainSchedule gs;
  gs.kind_ = kind;
  gs.opts_ = opts;
  switch (kind) {
    case GainKind::Uncontrolled:
      gs.K_const_ = DenseMatrix::Zero(m.inputs(), m.d);
      break;
    case GainKind::LQR:
      gs.K_const_ = lqr_gain(m, opts);
      break;
    case GainKind::SdreMpc:
      break;  // all work is online
    case GainKind::OfflineSeries: {
      auto off = offline_first_order(m, opts);
      gs.Pi0_ = off.Pi0;
      gs.Pi_offline_ = std::move(off.Pi);
      break;
    }
    case GainKind::OfflineOnline: {
      gs.Pi0_ = solve_pi0(m, opts, nullptr);
      gs.C0_ = std::make_shared<StructuredClosedLoopOperator>(m.A0, m.B, m.H, m.R, m.P,
                                                              m.gamma, gs.Pi0_);
      break;
    }
  }
  gs.offline_seconds_ = seconds_since(t0);
  return gs;
}

DenseMatrix GainSchedule::gain(const SemilinearModel& m, const Vector& x, SolverStats* stats,
                               const DenseMatrix* warm_start_block) const {
  switch (kind_) {
    case GainKind::Uncontrolled:
    case GainKind::LQR:
      fill_stats(stats, 0, 0, 0.0, 0, 0.0);
      return K_const_;
    case GainKind::SdreMpc:
      return sdre_gain(m, x, opts_, stats, warm_start_block);
    case GainKind::OfflineSeries: {
      auto t0 = Clock::now();
      Vector f = coefficient_values(m, x);
      DenseMatrix Pi = Pi0_.dense();
      for (Index j = 0; j < f.size(); ++j)
        if (f[j] != 0.0) Pi.noalias() += f[j] * Pi_offline_[static_cast<size_t>(j)];
      DenseMatrix K = m.R.llt().solve(m.B.transpose() * Pi);
      fill_stats(stats, 0, 0, 0.0, 0, seconds_since(t0));
      return K;
    }
    case GainKind::OfflineOnline:
      return offline_online_gain(m, *C0_, x, opts_, stats);
  }
  throw SolverError("GainSchedule::gain: unreachable");
}

}  // namespace sdre

#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "sdre/krylov/gain_only.hpp"
#include "sdre/krylov/galerkin.hpp"
#include "sdre/krylov/structured_operator.hpp"
#include "sdre/sdre/model.hpp"

namespace sdre {

enum class GainKind { Uncontrolled, LQR, SdreMpc, OfflineSeries, OfflineOnline };
enum class RiccatiPath { Rational, ExtendedGainOnly };

struct SynthesisOptions {
  GalerkinConfig riccati{KrylovSpaceKind::Rational, 1e-8, 0, 1e-12, 0.0, 1};
  GalerkinConfig lyapunov{KrylovSpaceKind::Extended, 1e-8, 0, 1e-12, 0.0, 1};
  GainOnlyConfig gain_only{};
  RiccatiPath mpc_path = RiccatiPath::Rational;
  double pi0_truncation = 1e-9;    // core cutoff applied to the offline Π₀
  Index offline_budget_entries = 200'000'000;  // r·d² guard for Alg. 3.2
  bool warm_start = false;
};

std::optional<SecondQuadratic> second_quadratic(const SemilinearModel& m);

/// Dense S(x-independent) = BR⁻¹Bᵀ − HP⁻¹Hᵀ/(2γ²); desk scale only.
DenseMatrix dense_S(const SemilinearModel& m);

/// Linearized gain at the origin: K₀ = R⁻¹BᵀΠ with Π solving the ARE at A(0).
DenseMatrix lqr_gain(const SemilinearModel& m, const SynthesisOptions& opts,
                     SolverStats* stats = nullptr);

/// SDRE gain at state x (Algorithm family 3.1): rational-Krylov Riccati, or
/// the gain-only extended-Krylov path when the model is symmetric and the
/// options request it.
DenseMatrix sdre_gain(const SemilinearModel& m, const Vector& x, const SynthesisOptions& opts,
                      SolverStats* stats = nullptr,
                      const DenseMatrix* warm_start_block = nullptr);

/// Power-series matrices L₀..L_N for a single scalar nonlinearity (r = 1):
/// L₀ solves the ARE at A₀, each Lₙ a Lyapunov equation with the recursive
/// right-hand side. Dense, desk-scale path.
std::vector<DenseMatrix> offline_series_scalar(const SemilinearModel& m, Index order);

/// Feedback from the series: u = −R⁻¹Bᵀ(Σₙ f₁(x)ⁿ Lₙ)x.
DenseMatrix series_gain(const SemilinearModel& m, const std::vector<DenseMatrix>& L,
                        const Vector& x);

struct FirstOrderOffline {
  LowRankSym Pi0;
  std::vector<DenseMatrix> Pi;  // one per coefficient f_j
  double offline_seconds = 0.0;
};

/// Offline phase of Algorithm 3.2: Π₀ plus the r Lyapunov solutions Πⱼ, all
/// sharing one Schur reduction of C₀ and solved in a parallel map. Refuses to
/// run when r·d² exceeds the configured budget.
FirstOrderOffline offline_first_order(const SemilinearModel& m, const SynthesisOptions& opts);

/// Online phase of Algorithm 3.3: solves W(x)C₀ + C₀ᵀW(x) + Σⱼ fⱼ(x)Qⱼ = 0
/// with the structured operator and the indefinite factored right-hand side
/// [Z₀, N(x)ᵀZ₀Y₀]·[[0,I],[I,0]]·[..]ᵀ, then K = R⁻¹Bᵀ(Π₀ + W(x)).
DenseMatrix offline_online_gain(const SemilinearModel& m,
                                const StructuredClosedLoopOperator& C0, const Vector& x,
                                const SynthesisOptions& opts, SolverStats* stats = nullptr);

/// Diagnostic worst-case disturbance w* = (1/γ²)P⁻¹HᵀΠx.
Vector worst_case_disturbance(const SemilinearModel& m, const LowRankSym& Pi, const Vector& x);

/// One synthesis strategy with its offline artifacts. Construction performs
/// the offline phase; evaluation at a state is const and thread-safe.
class GainSchedule {
 public:
  static GainSchedule make(const SemilinearModel& m, GainKind kind,
                           const SynthesisOptions& opts);

  DenseMatrix gain(const SemilinearModel& m, const Vector& x, SolverStats* stats = nullptr,
                   const DenseMatrix* warm_start_block = nullptr) const;

  GainKind kind() const { return kind_; }
  double offline_seconds() const { return offline_seconds_; }
  const LowRankSym& pi0() const { return Pi0_; }
  const StructuredClosedLoopOperator* closed_loop_operator() const { return C0_.get(); }
  bool constant_gain() const {
    return kind_ == GainKind::Uncontrolled || kind_ == GainKind::LQR;
  }

 private:
  GainKind kind_ = GainKind::Uncontrolled;
  SynthesisOptions opts_;
  DenseMatrix K_const_;
  LowRankSym Pi0_;
  std::shared_ptr<StructuredClosedLoopOperator> C0_;
  std::vector<DenseMatrix> Pi_offline_;
  double offline_seconds_ = 0.0;
};

}  // namespace sdre

#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "sdre/linalg/sparse.hpp"
#include "sdre/types.hpp"

namespace sdre {

/// N(x) component placing g(x[slice0+i]) at entry (row0+i, col0+i). Covers the
/// Zeldovich reaction, the Burgers forcing, and the sine-Gordon sinc block.
struct DiagonalUpdate {
  Index row0 = 0, col0 = 0, slice0 = 0, count = 0;
  std::function<double(double)> g;
};

/// N(x) = sign·diag(x)·D (row k of D scaled by x_k); the Burgers advection.
struct RowScaled {
  SparseMatrix D;
  double sign = 1.0;
};

/// N(x) = f1(x)·A1 with a single scalar coefficient; the power-series path.
struct ScalarCoefficient {
  SparseMatrix A1;
  std::function<double(const Vector&)> f1;
};

using StateDependence = std::variant<DiagonalUpdate, RowScaled, ScalarCoefficient>;

/// Semilinear dynamics ẋ = A(x)x + Bu + Hw with A(x) = A₀ + Σⱼ fⱼ(x)Aⱼ kept
/// in structured form, plus the quadratic cost data. γ = 0 encodes H₂.
struct SemilinearModel {
  Index d = 0;
  SparseMatrix A0;
  std::vector<StateDependence> terms;
  DenseMatrix B;        // d × m
  DenseMatrix H;        // d × p (may have zero columns)
  DenseMatrix Cfactor;  // d × z, Q = Cfactor·Cfactorᵀ
  DenseMatrix R;        // m × m SPD
  DenseMatrix P;        // p × p SPD
  double gamma = 0.0;
  bool symmetric_A = false;  // A(x) symmetric for every x

  Index inputs() const { return B.cols(); }
  Index disturbances() const { return H.cols(); }
};

/// y += N(x)·V for all state-dependent terms.
void apply_state_dependence(const SemilinearModel& m, const Vector& x,
                            const DenseMatrix& V, DenseMatrix& y);

/// y += N(x)ᵀ·V.
void apply_state_dependence_transpose(const SemilinearModel& m, const Vector& x,
                                      const DenseMatrix& V, DenseMatrix& y);

/// A(x)·V without assembling A(x).
DenseMatrix apply_A(const SemilinearModel& m, const Vector& x, const DenseMatrix& V);

/// Sparse assembly of A(x) = A₀ + N(x), for factorization.
SparseMatrix assemble_A(const SemilinearModel& m, const Vector& x);

/// Number of scalar coefficient functions r in Σⱼ fⱼ(x)Aⱼ.
Index coefficient_count(const SemilinearModel& m);

/// Coefficient values fⱼ(x), j = 0..r−1, ordered per term.
Vector coefficient_values(const SemilinearModel& m, const Vector& x);

/// Visits each Aⱼ in rank-one form Aⱼ = u·vᵀ (u, v sparse unit-or-row
/// structured, delivered as dense d-vectors); the ScalarCoefficient term is
/// delivered through the full-matrix callback instead.
void visit_terms_rank1(const SemilinearModel& m,
                       const std::function<void(Index j, const Vector& u, const Vector& v)>& rank1,
                       const std::function<void(Index j, const SparseMatrix& Aj)>& full);

}  // namespace sdre

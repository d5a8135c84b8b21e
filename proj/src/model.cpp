#include "sdre/sdre/model.hpp"

#include <cmath>

namespace sdre {

namespace {

void check_finite(double v, Index j) {
  if (!std::isfinite(v))
    throw SolverError("state-dependent coefficient f_" + std::to_string(j) +
                      " is not finite");
}

}  // namespace

void apply_state_dependence(const SemilinearModel& m, const Vector& x,
                            const DenseMatrix& V, DenseMatrix& y) {
  for (const auto& term : m.terms) {
    if (const auto* du = std::get_if<DiagonalUpdate>(&term)) {
      for (Index i = 0; i < du->count; ++i) {
        double g = du->g(x[du->slice0 + i]);
        check_finite(g, i);
        y.row(du->row0 + i) += g * V.row(du->col0 + i);
      }
    } else if (const auto* rs = std::get_if<RowScaled>(&term)) {
      DenseMatrix DV = rs->D * V;
      y.noalias() += rs->sign * (x.asDiagonal() * DV);
    } else {
      const auto& sc = std::get<ScalarCoefficient>(term);
      double f = sc.f1(x);
      check_finite(f, 0);
      y.noalias() += f * (sc.A1 * V);
    }
  }
}

void apply_state_dependence_transpose(const SemilinearModel& m, const Vector& x,
                                      const DenseMatrix& V, DenseMatrix& y) {
  for (const auto& term : m.terms) {
    if (const auto* du = std::get_if<DiagonalUpdate>(&term)) {
      for (Index i = 0; i < du->count; ++i) {
        double g = du->g(x[du->slice0 + i]);
        check_finite(g, i);
        y.row(du->col0 + i) += g * V.row(du->row0 + i);
      }
    } else if (const auto* rs = std::get_if<RowScaled>(&term)) {
      DenseMatrix XV = x.asDiagonal() * V;
      y.noalias() += rs->sign * (rs->D.transpose() * XV);
    } else {
      const auto& sc = std::get<ScalarCoefficient>(term);
      double f = sc.f1(x);
      check_finite(f, 0);
      y.noalias() += f * (sc.A1.transpose() * V);
    }
  }
}

DenseMatrix apply_A(const SemilinearModel& m, const Vector& x, const DenseMatrix& V) {
  require(x.size() == m.d && V.rows() == m.d, "apply_A: dimension mismatch");
  DenseMatrix y = m.A0 * V;
  apply_state_dependence(m, x, V, y);
  return y;
}

SparseMatrix assemble_A(const SemilinearModel& m, const Vector& x) {
  require(x.size() == m.d, "assemble_A: dimension mismatch");
  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(m.A0.nonZeros()) + 4 * static_cast<size_t>(m.d));
  for (Index k = 0; k < m.A0.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m.A0, k); it; ++it)
      trip.emplace_back(it.row(), it.col(), it.value());
  for (const auto& term : m.terms) {
    if (const auto* du = std::get_if<DiagonalUpdate>(&term)) {
      for (Index i = 0; i < du->count; ++i) {
        double g = du->g(x[du->slice0 + i]);
        check_finite(g, i);
        if (g != 0.0) trip.emplace_back(du->row0 + i, du->col0 + i, g);
      }
    } else if (const auto* rs = std::get_if<RowScaled>(&term)) {
      for (Index k = 0; k < rs->D.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(rs->D, k); it; ++it) {
          double v = rs->sign * x[it.row()] * it.value();
          if (v != 0.0) trip.emplace_back(it.row(), it.col(), v);
        }
    } else {
      const auto& sc = std::get<ScalarCoefficient>(term);
      double f = sc.f1(x);
      check_finite(f, 0);
      if (f != 0.0)
        for (Index k = 0; k < sc.A1.outerSize(); ++k)
          for (SparseMatrix::InnerIterator it(sc.A1, k); it; ++it)
            trip.emplace_back(it.row(), it.col(), f * it.value());
    }
  }
  SparseMatrix A(m.d, m.d);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  return A;
}

Index coefficient_count(const SemilinearModel& m) {
  Index r = 0;
  for (const auto& term : m.terms) {
    if (const auto* du = std::get_if<DiagonalUpdate>(&term)) r += du->count;
    else if (std::holds_alternative<RowScaled>(term)) r += m.d;
    else r += 1;
  }
  return r;
}

Vector coefficient_values(const SemilinearModel& m, const Vector& x) {
  Vector f(coefficient_count(m));
  Index j = 0;
  for (const auto& term : m.terms) {
    if (const auto* du = std::get_if<DiagonalUpdate>(&term)) {
      for (Index i = 0; i < du->count; ++i) f[j++] = du->g(x[du->slice0 + i]);
    } else if (std::holds_alternative<RowScaled>(term)) {
      for (Index i = 0; i < m.d; ++i) f[j++] = x[i];
    } else {
      f[j++] = std::get<ScalarCoefficient>(term).f1(x);
    }
  }
  return f;
}

void visit_terms_rank1(
    const SemilinearModel& m,
    const std::function<void(Index j, const Vector& u, const Vector& v)>& rank1,
    const std::function<void(Index j, const SparseMatrix& Aj)>& full) {
  Index j = 0;
  for (const auto& term : m.terms) {
    if (const auto* du = std::get_if<DiagonalUpdate>(&term)) {
      for (Index i = 0; i < du->count; ++i, ++j) {
        Vector u = Vector::Zero(m.d), v = Vector::Zero(m.d);
        u[du->row0 + i] = 1.0;
        v[du->col0 + i] = 1.0;
        rank1(j, u, v);
      }
    } else if (const auto* rs = std::get_if<RowScaled>(&term)) {
      SparseMatrix Drow(rs->D);  // iterate rows of D (row-major)
      for (Index i = 0; i < m.d; ++i, ++j) {
        Vector u = Vector::Zero(m.d), v = Vector::Zero(m.d);
        u[i] = rs->sign;
        for (SparseMatrix::InnerIterator it(Drow, i); it; ++it) v[it.col()] = it.value();
        rank1(j, u, v);
      }
    } else {
      full(j, std::get<ScalarCoefficient>(term).A1);
      ++j;
    }
  }
}

}  // namespace sdre

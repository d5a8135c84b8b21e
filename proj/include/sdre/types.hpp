#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <stdexcept>
#include <string>

namespace sdre {

using Index = Eigen::Index;
using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Spec storage contract is compressed sparse row; all operators are square.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

/// Base error for every numerical failure surfaced by the toolkit.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

class DimensionError : public SolverError {
 public:
  explicit DimensionError(const std::string& what) : SolverError(what) {}
};

/// Per-solve counters, filled in by whichever solver ran last.
struct SolverStats {
  int iterations = 0;          // outer Krylov expansions / Newton steps
  Index space_dim = 0;         // final projection space dimension
  double residual = 0.0;       // final (relative) residual estimate
  int factorizations = 0;      // sparse factorizations performed
  double seconds = 0.0;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw DimensionError(msg);
}

}  // namespace sdre

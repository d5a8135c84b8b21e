#pragma once

#include <array>
#include <vector>

#include "sdre/types.hpp"

namespace sdre {

/// Uniform tensor grid over an interval or rectangle, nodes including both
/// endpoints: ξ_i = lo + i·h with h = (hi−lo)/(n−1).
struct Grid {
  int dims = 1;
  std::array<Index, 2> n{0, 1};
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 1.0};

  static Grid line(double a, double b, Index nodes);
  static Grid square(double a, double b, Index nodes_per_axis);

  double spacing(int axis) const { return (hi[axis] - lo[axis]) / double(n[axis] - 1); }
  Index node_count() const { return dims == 1 ? n[0] : n[0] * n[1]; }
  double coord(int axis, Index i) const { return lo[axis] + spacing(axis) * double(i); }
  // lexicographic, axis 1 fastest
  Index node_index(Index i1, Index i2) const { return i2 * n[0] + i1; }
};

/// Closed axis-aligned rectangle (interval in 1D).
struct Patch {
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{0.0, 0.0};
  static Patch interval(double a, double b) { return {{a, 0.0}, {b, 0.0}}; }
  static Patch rect(double a1, double b1, double a2, double b2) { return {{a1, a2}, {b1, b2}}; }
  double measure(int dims) const {
    double m = hi[0] - lo[0];
    if (dims == 2) m *= hi[1] - lo[1];
    return m;
  }
};

using PatchSet = std::vector<Patch>;

/// 0/1 per node, 1 iff the node lies in the closed patch. Sets *empty when no
/// node is covered.
Vector indicator_vector(const Grid& g, const Patch& p, bool* empty = nullptr);

/// Union of patch indicators (entries stay 0/1 on overlaps).
Vector indicator_union(const Grid& g, const PatchSet& ps);

/// Output map C (d×z): column i = cell_measure·χ_{ω_i}/|ω_i|, so that CᵀX
/// approximates the patch averages and Q = C·Cᵀ.
DenseMatrix output_factor(const Grid& g, const PatchSet& ps);

}  // namespace sdre

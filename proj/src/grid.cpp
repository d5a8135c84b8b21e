#include "sdre/models/grid.hpp"

namespace sdre {

Grid Grid::line(double a, double b, Index nodes) {
  require(nodes >= 3 && b > a, "Grid::line: need at least 3 nodes and b > a");
  Grid g;
  g.dims = 1;
  g.n = {nodes, 1};
  g.lo = {a, 0.0};
  g.hi = {b, 0.0};
  return g;
}

Grid Grid::square(double a, double b, Index nodes_per_axis) {
  require(nodes_per_axis >= 3 && b > a, "Grid::square: need at least 3 nodes and b > a");
  Grid g;
  g.dims = 2;
  g.n = {nodes_per_axis, nodes_per_axis};
  g.lo = {a, a};
  g.hi = {b, b};
  return g;
}

Vector indicator_vector(const Grid& g, const Patch& p, bool* empty) {
  Vector chi = Vector::Zero(g.node_count());
  Index hits = 0;
  if (g.dims == 1) {
    for (Index i = 0; i < g.n[0]; ++i) {
      double x = g.coord(0, i);
      if (x >= p.lo[0] && x <= p.hi[0]) {
        chi[i] = 1.0;
        ++hits;
      }
    }
  } else {
    for (Index i2 = 0; i2 < g.n[1]; ++i2) {
      double y = g.coord(1, i2);
      for (Index i1 = 0; i1 < g.n[0]; ++i1) {
        double x = g.coord(0, i1);
        if (x >= p.lo[0] && x <= p.hi[0] && y >= p.lo[1] && y <= p.hi[1]) {
          chi[g.node_index(i1, i2)] = 1.0;
          ++hits;
        }
      }
    }
  }
  if (empty) *empty = (hits == 0);
  return chi;
}

Vector indicator_union(const Grid& g, const PatchSet& ps) {
  Vector chi = Vector::Zero(g.node_count());
  for (const Patch& p : ps) chi = chi.cwiseMax(indicator_vector(g, p));
  return chi;
}

DenseMatrix output_factor(const Grid& g, const PatchSet& ps) {
  require(!ps.empty(), "output_factor: need at least one patch");
  double cell = g.spacing(0);
  if (g.dims == 2) cell *= g.spacing(1);
  DenseMatrix C(g.node_count(), static_cast<Index>(ps.size()));
  for (size_t i = 0; i < ps.size(); ++i) {
    double meas = ps[i].measure(g.dims);
    require(meas > 0, "output_factor: patch has zero measure");
    C.col(static_cast<Index>(i)) = (cell / meas) * indicator_vector(g, ps[i]);
  }
  return C;
}

}  // namespace sdre

#include <algorithm>
#include <cmath>

#include "kernels_node.hpp"
#include "tripoint/kernels.hpp"

namespace tripoint::serial {

namespace {

template <class Eval>
FlowEval sweep(const Field2D& u, Field2D& r, double eps, const Eval& eval) {
  const DiskGrid& g = *u.grid;
  const int n = g.n();
  const NodeParams prm{g.h(), eps};
  FlowEval out;
  double edges = 0.0, potential = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t c = g.index(i, j);
      if (g.kind(c) != NodeKind::interior) continue;
      const NodeNeighbours nb{c - 1, c + 1, g.index(i, g.row_down(j)), g.index(i, g.row_up(j)),
                              g.kind(c - 1) != NodeKind::interior, g.kind(g.index(i, g.row_down(j))) != NodeKind::interior};
      const NodeResult res = node_update(u, r, c, nb, prm, eval);
      edges += res.edge_energy;
      potential += res.w;
      out.residual_sup = std::max(out.residual_sup, res.residual);
      out.field_sup = std::max(out.field_sup, res.field);
    }
  }
  out.energy = eps * edges + (g.h() * g.h() / eps) * potential;
  return out;
}

}  // namespace

FlowEval evaluate(const Field2D& u, Field2D& r, const Potential& pot, double eps) {
  if (pot.is_product()) return sweep(u, r, eps, ProductEval{pot});
  return sweep(u, r, eps, GenericEval{pot});
}

void advance(const Field2D& u, const Field2D& r, double dt, Field2D& out) {
  const DiskGrid& g = *u.grid;
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (g.kind(c) != NodeKind::interior) continue;
    out.u1[c] = u.u1[c] - dt * r.u1[c];
    out.u2[c] = u.u2[c] - dt * r.u2[c];
  }
}

}  // namespace tripoint::serial

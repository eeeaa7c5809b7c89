#pragma once

// Per-node arithmetic shared by the serial and parallel flow kernels.

#include <cmath>

#include "tripoint/grid.hpp"
#include "tripoint/potential.hpp"

namespace tripoint {

struct NodeParams {
  double h;
  double eps;
};

struct NodeNeighbours {
  std::size_t left, right, down, up;
  /// Edges towards non-interior left / lower neighbours belong to this node.
  bool left_edge, down_edge;
};

struct NodeResult {
  double edge_energy;
  double w;
  double residual;
  double field;
};

struct ProductEval {
  Vec2 c0, c1, c2;
  explicit ProductEval(const Potential& p) : c0(p.well(0)), c1(p.well(1)), c2(p.well(2)) {}
  void operator()(Vec2 u, double& w, Vec2& grad) const {
    const Vec2 a = u - c0, b = u - c1, c = u - c2;
    const double na = norm2(a), nb = norm2(b), nc = norm2(c);
    w = na * nb * nc;
    grad = 2.0 * (nb * nc) * a + 2.0 * (na * nc) * b + 2.0 * (na * nb) * c;
  }
};

struct GenericEval {
  const Potential& p;
  explicit GenericEval(const Potential& pot) : p(pot) {}
  void operator()(Vec2 u, double& w, Vec2& grad) const {
    w = p.value(u);
    grad = p.gradient(u);
  }
};

template <class Eval>
inline NodeResult node_update(const Field2D& u, Field2D& r, std::size_t c, const NodeNeighbours& nb,
                              const NodeParams& prm, const Eval& eval) {
  const double a1 = u.u1[c], a2 = u.u2[c];
  const double l1 = u.u1[nb.left], l2 = u.u2[nb.left];
  const double r1 = u.u1[nb.right], r2 = u.u2[nb.right];
  const double d1 = u.u1[nb.down], d2 = u.u2[nb.down];
  const double t1 = u.u1[nb.up], t2 = u.u2[nb.up];
  const double inv_h2 = 1.0 / (prm.h * prm.h);
  const double k = 0.5 / (prm.eps * prm.eps);
  const double lap1 = ((l1 + r1) + (d1 + t1) - 4.0 * a1) * inv_h2;
  const double lap2 = ((l2 + r2) + (d2 + t2) - 4.0 * a2) * inv_h2;
  double w;
  Vec2 g;
  eval(Vec2{a1, a2}, w, g);
  const double res1 = k * g.x - lap1;
  const double res2 = k * g.y - lap2;
  r.u1[c] = res1;
  r.u2[c] = res2;
  double edges = (r1 - a1) * (r1 - a1) + (r2 - a2) * (r2 - a2) + (t1 - a1) * (t1 - a1) + (t2 - a2) * (t2 - a2);
  if (nb.left_edge) edges += (l1 - a1) * (l1 - a1) + (l2 - a2) * (l2 - a2);
  if (nb.down_edge) edges += (d1 - a1) * (d1 - a1) + (d2 - a2) * (d2 - a2);
  return {edges, w, std::sqrt(res1 * res1 + res2 * res2), std::sqrt(a1 * a1 + a2 * a2)};
}

}  // namespace tripoint

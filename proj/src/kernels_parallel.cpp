#include <algorithm>
#include <cmath>
#include <vector>

#if TRIPOINT_HAVE_OPENMP
#include <omp.h>
#endif

#include "kernels_node.hpp"
#include "tripoint/kernels.hpp"

namespace tripoint::parallel {

namespace {

// Row partial sums are combined in row order so the energy does not depend
// on the thread count or scheduling.
double ordered_sum(const std::vector<double>& parts) {
  double s = 0.0;
  for (double p : parts) s += p;
  return s;
}

template <class Eval>
FlowEval sweep(const Field2D& u, Field2D& r, double eps, const Eval& eval) {
  const DiskGrid& g = *u.grid;
  const auto& runs = g.runs();
  const long count = static_cast<long>(runs.size());
  const NodeParams prm{g.h(), eps};
  std::vector<double> edge_part(runs.size()), w_part(runs.size());
  double rsup = 0.0, usup = 0.0;
#pragma omp parallel for schedule(static) reduction(max : rsup, usup)
  for (long q = 0; q < count; ++q) {
    const RowRun run = runs[static_cast<std::size_t>(q)];
    const int down = g.row_down(run.row), up = g.row_up(run.row);
    double edges = 0.0, potential = 0.0;
    for (int i = run.begin; i < run.end; ++i) {
      const std::size_t c = g.index(i, run.row);
      const std::size_t cd = g.index(i, down), cu = g.index(i, up);
      const NodeNeighbours nb{c - 1, c + 1, cd, cu, i == run.begin, g.kind(cd) != NodeKind::interior};
      const NodeResult res = node_update(u, r, c, nb, prm, eval);
      edges += res.edge_energy;
      potential += res.w;
      rsup = std::max(rsup, res.residual);
      usup = std::max(usup, res.field);
    }
    edge_part[static_cast<std::size_t>(q)] = edges;
    w_part[static_cast<std::size_t>(q)] = potential;
  }
  return {eps * ordered_sum(edge_part) + (g.h() * g.h() / eps) * ordered_sum(w_part), rsup, usup};
}

// Product-potential sweep over raw row pointers so the inner loop vectorizes.
// Per-node arithmetic matches node_update exactly.
FlowEval product_sweep(const Field2D& u, Field2D& r, double eps, const Potential& pot) {
  const DiskGrid& g = *u.grid;
  const auto& runs = g.runs();
  const long count = static_cast<long>(runs.size());
  const double inv_h2 = 1.0 / (g.h() * g.h());
  const double k = 0.5 / (eps * eps);
  const Vec2 w0 = pot.well(0), w1 = pot.well(1), w2 = pot.well(2);
  const double* U1 = u.u1.data();
  const double* U2 = u.u2.data();
  double* R1 = r.u1.data();
  double* R2 = r.u2.data();
  std::vector<double> edge_part(runs.size()), w_part(runs.size());
  double rsup2 = 0.0, usup2 = 0.0;
#pragma omp parallel for schedule(static) reduction(max : rsup2, usup2)
  for (long q = 0; q < count; ++q) {
    const RowRun run = runs[static_cast<std::size_t>(q)];
    const std::size_t row = g.index(0, run.row);
    const std::size_t row_d = g.index(0, g.row_down(run.row));
    const std::size_t row_u = g.index(0, g.row_up(run.row));
    double e_sum = 0.0, w_sum = 0.0, r_max = 0.0, u_max = 0.0;
#pragma omp simd reduction(+ : e_sum, w_sum) reduction(max : r_max, u_max)
    for (int i = run.begin; i < run.end; ++i) {
      const std::size_t c = row + static_cast<std::size_t>(i);
      const std::size_t cd = row_d + static_cast<std::size_t>(i), cu = row_u + static_cast<std::size_t>(i);
      const double a1 = U1[c], a2 = U2[c];
      const double l1 = U1[c - 1], l2 = U2[c - 1];
      const double r1 = U1[c + 1], r2 = U2[c + 1];
      const double d1 = U1[cd], d2 = U2[cd];
      const double t1 = U1[cu], t2 = U2[cu];
      const double lap1 = ((l1 + r1) + (d1 + t1) - 4.0 * a1) * inv_h2;
      const double lap2 = ((l2 + r2) + (d2 + t2) - 4.0 * a2) * inv_h2;
      const double p1 = a1 - w0.x, p2 = a2 - w0.y;
      const double q1 = a1 - w1.x, q2 = a2 - w1.y;
      const double s1 = a1 - w2.x, s2 = a2 - w2.y;
      const double na = p1 * p1 + p2 * p2, nb = q1 * q1 + q2 * q2, nc = s1 * s1 + s2 * s2;
      const double fa = 2.0 * (nb * nc), fb = 2.0 * (na * nc), fc = 2.0 * (na * nb);
      const double g1 = fa * p1 + fb * q1 + fc * s1;
      const double g2 = fa * p2 + fb * q2 + fc * s2;
      const double res1 = k * g1 - lap1;
      const double res2 = k * g2 - lap2;
      R1[c] = res1;
      R2[c] = res2;
      e_sum += (r1 - a1) * (r1 - a1) + (r2 - a2) * (r2 - a2) + (t1 - a1) * (t1 - a1) + (t2 - a2) * (t2 - a2);
      w_sum += na * nb * nc;
      const double rr = res1 * res1 + res2 * res2, uu = a1 * a1 + a2 * a2;
      r_max = rr > r_max ? rr : r_max;
      u_max = uu > u_max ? uu : u_max;
    }
    // Edges to non-interior left and lower neighbours.
    {
      const std::size_t c = row + static_cast<std::size_t>(run.begin);
      e_sum += (U1[c - 1] - U1[c]) * (U1[c - 1] - U1[c]) + (U2[c - 1] - U2[c]) * (U2[c - 1] - U2[c]);
    }
    for (int i = run.begin; i < run.end; ++i) {
      const std::size_t cd = row_d + static_cast<std::size_t>(i);
      if (g.kind(cd) == NodeKind::interior) continue;
      const std::size_t c = row + static_cast<std::size_t>(i);
      e_sum += (U1[cd] - U1[c]) * (U1[cd] - U1[c]) + (U2[cd] - U2[c]) * (U2[cd] - U2[c]);
    }
    edge_part[static_cast<std::size_t>(q)] = e_sum;
    w_part[static_cast<std::size_t>(q)] = w_sum;
    rsup2 = std::max(rsup2, r_max);
    usup2 = std::max(usup2, u_max);
  }
  return {eps * ordered_sum(edge_part) + (g.h() * g.h() / eps) * ordered_sum(w_part), std::sqrt(rsup2),
          std::sqrt(usup2)};
}

}  // namespace

FlowEval evaluate(const Field2D& u, Field2D& r, const Potential& pot, double eps) {
  if (pot.is_product()) return product_sweep(u, r, eps, pot);
  return sweep(u, r, eps, GenericEval{pot});
}

void advance(const Field2D& u, const Field2D& r, double dt, Field2D& out) {
  const DiskGrid& g = *u.grid;
  const auto& runs = g.runs();
  const long count = static_cast<long>(runs.size());
#pragma omp parallel for schedule(static)
  for (long q = 0; q < count; ++q) {
    const RowRun run = runs[static_cast<std::size_t>(q)];
    const std::size_t b = g.index(run.begin, run.row), e = g.index(run.end, run.row);
    for (std::size_t c = b; c < e; ++c) {
      out.u1[c] = u.u1[c] - dt * r.u1[c];
      out.u2[c] = u.u2[c] - dt * r.u2[c];
    }
  }
}

int thread_count() {
#if TRIPOINT_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace tripoint::parallel

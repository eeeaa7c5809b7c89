#include "dijkstra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <span>
#include <stdexcept>

namespace oracle {

using tripoint::Potential;
using tripoint::Vec2;

namespace {

struct Lattice {
  int n = 0;
  Vec2 origin;
  double h = 0.0;
  std::vector<double> sqrt_w;
  std::vector<std::pair<int, int>> offsets;
  std::vector<double> offset_len;

  Vec2 coord(int idx) const { return origin + h * Vec2{double(idx % n), double(idx / n)}; }
  int nearest(Vec2 p) const {
    const int i = std::clamp(static_cast<int>(std::lround((p.x - origin.x) / h)), 0, n - 1);
    const int j = std::clamp(static_cast<int>(std::lround((p.y - origin.y) / h)), 0, n - 1);
    return j * n + i;
  }
};

Lattice build_lattice(const Potential& pot, std::span<const Vec2> extra, const LatticeOptions& opts) {
  if (opts.resolution < 8) throw std::invalid_argument("lattice resolution too small");
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi = -lo;
  auto grow = [&](Vec2 p) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  };
  for (Vec2 c : pot.wells()) grow(c);
  for (Vec2 c : extra) grow(c);
  const Vec2 center = 0.5 * (lo + hi);
  const double side = opts.box_scale * std::max({hi.x - lo.x, hi.y - lo.y, 1e-6});
  Lattice L;
  L.n = opts.resolution;
  L.h = side / (L.n - 1);
  L.origin = center - Vec2{0.5 * side, 0.5 * side};
  L.sqrt_w.resize(static_cast<std::size_t>(L.n) * L.n);
  for (int idx = 0; idx < L.n * L.n; ++idx) {
    L.sqrt_w[static_cast<std::size_t>(idx)] = std::sqrt(std::max(pot.value(L.coord(idx)), 0.0));
  }
  const int r = std::max(opts.stencil_radius, 1);
  for (int dx = -r; dx <= r; ++dx) {
    for (int dy = -r; dy <= r; ++dy) {
      if ((dx == 0 && dy == 0) || std::gcd(std::abs(dx), std::abs(dy)) != 1) continue;
      L.offsets.emplace_back(dx, dy);
      L.offset_len.push_back(L.h * std::hypot(double(dx), double(dy)));
    }
  }
  return L;
}

std::vector<double> dijkstra(const Lattice& L, int source, int stop_at = -1) {
  std::vector<double> dist(L.sqrt_w.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[static_cast<std::size_t>(source)] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, idx] = queue.top();
    queue.pop();
    if (d > dist[static_cast<std::size_t>(idx)]) continue;
    if (idx == stop_at) break;
    const int i = idx % L.n, j = idx / L.n;
    const double wi = L.sqrt_w[static_cast<std::size_t>(idx)];
    for (std::size_t k = 0; k < L.offsets.size(); ++k) {
      const int ni = i + L.offsets[k].first, nj = j + L.offsets[k].second;
      if (ni < 0 || nj < 0 || ni >= L.n || nj >= L.n) continue;
      const int nidx = nj * L.n + ni;
      const double cand = d + 0.5 * (wi + L.sqrt_w[static_cast<std::size_t>(nidx)]) * L.offset_len[k];
      if (cand < dist[static_cast<std::size_t>(nidx)]) {
        dist[static_cast<std::size_t>(nidx)] = cand;
        queue.emplace(cand, nidx);
      }
    }
  }
  return dist;
}

}  // namespace

double lattice_distance(const Potential& pot, Vec2 a, Vec2 b, const LatticeOptions& opts) {
  const Vec2 ends[] = {a, b};
  const Lattice L = build_lattice(pot, ends, opts);
  const int target = L.nearest(b);
  return dijkstra(L, L.nearest(a), target)[static_cast<std::size_t>(target)];
}

std::array<std::array<double, 3>, 3> lattice_distance_table(const Potential& pot,
                                                            const LatticeOptions& opts) {
  if (pot.well_count() != 3) throw std::invalid_argument("distance table needs three wells");
  const Lattice L = build_lattice(pot, {}, opts);
  std::array<std::array<double, 3>, 3> t{};
  const auto from0 = dijkstra(L, L.nearest(pot.well(0)));
  const auto from1 = dijkstra(L, L.nearest(pot.well(1)));
  t[0][1] = t[1][0] = from0[static_cast<std::size_t>(L.nearest(pot.well(1)))];
  t[0][2] = t[2][0] = from0[static_cast<std::size_t>(L.nearest(pot.well(2)))];
  t[1][2] = t[2][1] = from1[static_cast<std::size_t>(L.nearest(pot.well(2)))];
  return t;
}

}  // namespace oracle

#include "tripoint/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tripoint/errors.hpp"

namespace tripoint {

double UPath::length() const {
  double len = 0.0;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) len += distance(nodes[k], nodes[k + 1]);
  return len;
}

void UPath::validate() const {
  if (nodes.size() < 2) throw InvalidArgument("path needs at least two nodes");
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (!is_finite(nodes[k])) throw InvalidArgument("path node is not finite");
    if (k + 1 < nodes.size() && nodes[k] == nodes[k + 1]) {
      throw InvalidArgument("consecutive path nodes coincide at index " + std::to_string(k));
    }
  }
}

namespace {

double polyline_action(const Potential& pot, std::span<const Vec2> nodes) {
  double action = 0.0;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const Vec2 a = nodes[k], b = nodes[k + 1];
    const double w = pot.value(0.5 * (a + b));
    action += std::sqrt(std::max(w, 0.0)) * distance(a, b);
  }
  return action;
}

}  // namespace

double path_action(const Potential& pot, const UPath& path) {
  const double action = polyline_action(pot, path.nodes);
  if (!std::isfinite(action)) throw NonFinite("path action");
  return action;
}

UPath resample_path(const UPath& path, int count) {
  const auto& p = path.nodes;
  std::vector<double> s(p.size(), 0.0);
  for (std::size_t k = 1; k < p.size(); ++k) s[k] = s[k - 1] + distance(p[k - 1], p[k]);
  UPath out;
  out.nodes.resize(static_cast<std::size_t>(count));
  out.nodes.front() = p.front();
  out.nodes.back() = p.back();
  const double total = s.back();
  std::size_t seg = 0;
  for (int k = 1; k + 1 < count; ++k) {
    const double target = total * k / (count - 1);
    while (seg + 2 < p.size() && s[seg + 1] < target) ++seg;
    const double span = s[seg + 1] - s[seg];
    const double t = span > 0 ? (target - s[seg]) / span : 0.0;
    out.nodes[static_cast<std::size_t>(k)] = p[seg] + t * (p[seg + 1] - p[seg]);
  }
  return out;
}

namespace {

double action_gradient(const Potential& pot, const std::vector<Vec2>& p, std::vector<Vec2>& grad) {
  std::fill(grad.begin(), grad.end(), Vec2{});
  double action = 0.0;
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    const Vec2 d = p[k + 1] - p[k];
    const double len = norm(d);
    const Vec2 mid = 0.5 * (p[k] + p[k + 1]);
    const double w = std::sqrt(std::max(pot.value(mid), 0.0));
    action += w * len;
    Vec2 gw{};
    if (w > 1e-150) gw = pot.gradient(mid) / (2.0 * w);
    const Vec2 along = len > 0 ? (w / len) * d : Vec2{};
    grad[k] += 0.5 * len * gw - along;
    grad[k + 1] += 0.5 * len * gw + along;
  }
  grad.front() = Vec2{};
  grad.back() = Vec2{};
  return action;
}

struct LevelOutcome {
  bool converged = false;
  int iterations = 0;
  double step = 0.0;
};

// Armijo descent on node positions with equal-arclength redistribution
// every 10 iterations.
LevelOutcome optimize_level(const Potential& pot, UPath& path, const GeodesicOptions& opts) {
  auto& p = path.nodes;
  std::vector<Vec2> grad(p.size()), trial(p.size());
  const double h = path.length() / static_cast<double>(p.size() - 1);
  double action = action_gradient(pot, p, grad);
  double gmax = 0.0;
  for (Vec2 g : grad) gmax = std::max(gmax, norm(g));
  double step = gmax > 0 ? 0.1 * h / gmax : 1.0;
  double window_start = action;
  LevelOutcome out;
  for (int it = 1; it <= opts.max_iters; ++it) {
    double g2 = 0.0;
    for (Vec2 g : grad) g2 += norm2(g);
    if (g2 == 0.0) {
      out.converged = true;
      out.iterations = it;
      break;
    }
    bool accepted = false;
    for (int k = 0; k < 50; ++k) {
      for (std::size_t n = 0; n < p.size(); ++n) trial[n] = p[n] - step * grad[n];
      const double a = polyline_action(pot, trial);
      if (a <= action - 1e-4 * step * g2) {
        p.swap(trial);
        accepted = true;
        step *= 1.5;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No decrease representable at this step size: numerically stationary.
      out.converged = true;
      out.iterations = it;
      break;
    }
    if (it % 10 == 0) {
      path = resample_path(path, static_cast<int>(p.size()));
      action = action_gradient(pot, p, grad);
      if (std::abs(window_start - action) <= opts.tol * std::max(action, 1e-300)) {
        out.converged = true;
        out.iterations = it;
        break;
      }
      window_start = action;
    } else {
      action = action_gradient(pot, p, grad);
    }
    out.iterations = it;
  }
  out.step = step;
  return out;
}

UPath bowed_path(Vec2 a, Vec2 b, double bow, int count) {
  const Vec2 d = b - a;
  const Vec2 perp{-d.y, d.x};
  const Vec2 ctrl = 0.5 * (a + b) + bow * perp;
  UPath out;
  for (int k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) / (count - 1);
    out.nodes.push_back((1 - t) * (1 - t) * a + 2 * t * (1 - t) * ctrl + t * t * b);
  }
  return out;
}

GeodesicResult descend_from(const Potential& pot, UPath init, const GeodesicOptions& opts,
                            bool& converged) {
  const int target = std::max(opts.nodes, 3);
  int count = 17;
  UPath path = resample_path(init, std::min(count, target));
  GeodesicResult res;
  LevelOutcome level;
  while (true) {
    level = optimize_level(pot, path, opts);
    res.iterations += level.iterations;
    if (static_cast<int>(path.size()) >= target) break;
    const int next = std::min(2 * (count - 1) + 1, target);
    // Refine by inserting midpoints, then resample if the count is not 2^k + 1.
    UPath finer;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      finer.nodes.push_back(path.nodes[k]);
      finer.nodes.push_back(0.5 * (path.nodes[k] + path.nodes[k + 1]));
    }
    finer.nodes.push_back(path.nodes.back());
    path = static_cast<int>(finer.size()) == next ? finer : resample_path(finer, next);
    count = next;
  }
  converged = level.converged;
  res.final_step = level.step;
  res.path = std::move(path);
  res.action = path_action(pot, res.path);
  return res;
}

}  // namespace

GeodesicResult geodesic_distance(const Potential& pot, Vec2 a, Vec2 b, const GeodesicOptions& opts) {
  if (a == b) return GeodesicResult{UPath{{a, a}}, 0.0, 0, 0.0};
  const UPath straight{{a, b}};
  const UPath starts[] = {straight, bowed_path(a, b, 0.5, 17), bowed_path(a, b, -0.5, 17)};

  GeodesicResult best;
  best.action = std::numeric_limits<double>::infinity();
  bool any_converged = false;
  int total_iterations = 0;
  for (const UPath& s : starts) {
    bool converged = false;
    GeodesicResult r = descend_from(pot, s, opts, converged);
    total_iterations += r.iterations;
    if (!converged) continue;
    any_converged = true;
    const bool better = r.action < best.action ||
                        (r.action == best.action && r.iterations < best.iterations);
    if (better) best = std::move(r);
  }
  if (!any_converged) throw NoConvergence(total_iterations, "geodesic descent");

  // The descent never reports worse than its straight initialization.
  UPath line = resample_path(straight, std::max(opts.nodes, 2));
  const double line_action = path_action(pot, line);
  if (line_action < best.action) {
    best.path = std::move(line);
    best.action = line_action;
  }
  return best;
}

double DistanceTable::opposite(int k) const {
  switch (k) {
    case 0: return gamma[1][2];
    case 1: return gamma[0][2];
    case 2: return gamma[0][1];
  }
  throw InvalidArgument("well index out of range");
}

int DistanceTable::pair_slot(int i, int j) {
  const int lo = std::min(i, j), hi = std::max(i, j);
  if (lo == 0 && hi == 1) return 0;
  if (lo == 0 && hi == 2) return 1;
  if (lo == 1 && hi == 2) return 2;
  throw InvalidArgument("pair must be two distinct wells among 0..2");
}

DistanceTable DistanceTable::from_opposite(double g23, double g13, double g12) {
  DistanceTable t;
  t.gamma[1][2] = t.gamma[2][1] = g23;
  t.gamma[0][2] = t.gamma[2][0] = g13;
  t.gamma[0][1] = t.gamma[1][0] = g12;
  return t;
}

DistanceTable distance_table(const Potential& pot, const GeodesicOptions& opts) {
  if (pot.well_count() != 3) throw InvalidArgument("distance table needs three wells");
  DistanceTable t;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      GeodesicResult r;
      try {
        r = geodesic_distance(pot, pot.well(i), pot.well(j), opts);
      } catch (const NoConvergence& e) {
        throw NoConvergence(e.iterations(), "geodesic for pair (" + std::to_string(i + 1) + "," +
                                                std::to_string(j + 1) + ")");
      }
      t.gamma[i][j] = t.gamma[j][i] = r.action;
      t.paths[DistanceTable::pair_slot(i, j)] = std::move(r.path);
    }
  }
  return t;
}

double well_distance(const Potential& pot, int i, Vec2 p, const GeodesicOptions& opts) {
  if (i < 0 || i >= pot.well_count()) throw InvalidArgument("well index out of range");
  return geodesic_distance(pot, pot.well(i), p, opts).action;
}

namespace {

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double len2 = norm2(d);
  const double t = len2 > 0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
  return distance(p, a + t * d);
}

}  // namespace

ConnectionCheck connection_exists(const Potential& pot, int i, int j, double radius,
                                  const GeodesicOptions& opts) {
  if (pot.well_count() != 3) throw InvalidArgument("connection check needs three wells");
  if (i == j) throw InvalidArgument("connection needs distinct wells");
  const int k = 3 - i - j;
  ConnectionCheck out;
  out.witness = geodesic_distance(pot, pot.well(i), pot.well(j), opts).path;
  out.clearance = std::numeric_limits<double>::infinity();
  const Vec2 third = pot.well(k);
  for (std::size_t s = 0; s + 1 < out.witness.size(); ++s) {
    out.clearance = std::min(
        out.clearance, point_segment_distance(third, out.witness.nodes[s], out.witness.nodes[s + 1]));
  }
  out.exists = out.clearance >= radius;
  return out;
}

UPath DistanceTable::oriented_path(int i, int j) const {
  UPath p = path(i, j);
  if (i > j) std::reverse(p.nodes.begin(), p.nodes.end());
  return p;
}

}  // namespace tripoint

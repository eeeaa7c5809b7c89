#include "tripoint/gamma_limit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "tripoint/errors.hpp"
#include "tripoint/solver.hpp"

namespace tripoint {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int sector_index(const std::array<double, 3>& theta, double angle) {
  const double theta0 = theta[2] - kTwoPi;
  double a = theta0 + std::fmod(angle - theta0, kTwoPi);
  if (a <= theta0) a += kTwoPi;
  if (a <= theta[0]) return 0;
  if (a <= theta[1]) return 1;
  return 2;
}

// Gaussian width in nodes. Narrower kernels leave a resolution-independent
// length bias from interpolating the level crossing on a steep ramp.
constexpr double kSmoothingNodes = 3.0;

// Label indicator smoothed by the Gaussian, normalized by the smoothed
// interior mask. NaN where the mask weight is negligible.
std::vector<double> smoothed_indicator(const SharpPartition& p, int label) {
  const DiskGrid& g = *p.grid;
  const int n = g.n();
  constexpr int R = static_cast<int>(4.0 * kSmoothingNodes);
  std::array<double, 2 * R + 1> w{};
  for (int k = -R; k <= R; ++k) {
    w[static_cast<std::size_t>(k + R)] = std::exp(-0.5 * k * k / (kSmoothingNodes * kSmoothingNodes));
  }
  std::vector<double> num(g.size(), 0.0), den(g.size(), 0.0);
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (g.kind(c) != NodeKind::interior) continue;
    den[c] = 1.0;
    num[c] = p.labels[c] == label ? 1.0 : 0.0;
  }
  auto blur = [&](std::vector<double>& f, bool along_x) {
    std::vector<double> out(f.size(), 0.0);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = -R; k <= R; ++k) {
          const int ii = along_x ? i + k : i, jj = along_x ? j : j + k;
          if (ii < 0 || jj < 0 || ii >= n || jj >= n) continue;
          s += w[static_cast<std::size_t>(k + R)] * f[g.index(ii, jj)];
        }
        out[g.index(i, j)] = s;
      }
    }
    f.swap(out);
  };
  blur(num, true);
  blur(num, false);
  blur(den, true);
  blur(den, false);
  std::vector<double> out(g.size(), kNaN);
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (den[c] > 1e-3) out[c] = num[c] / den[c];
  }
  return out;
}

// Length of the part of segment pq inside the closed unit disk.
double clipped_length(Vec2 p, Vec2 q) {
  const Vec2 d = q - p;
  const double a = norm2(d);
  if (a == 0.0) return 0.0;
  const double b = 2.0 * dot(p, d), c = norm2(p) - 1.0;
  const double disc = b * b - 4.0 * a * c;
  if (disc <= 0.0) return 0.0;
  const double root = std::sqrt(disc);
  const double t0 = std::max(0.0, (-b - root) / (2.0 * a));
  const double t1 = std::min(1.0, (-b + root) / (2.0 * a));
  return t1 > t0 ? (t1 - t0) * std::sqrt(a) : 0.0;
}

double contour_length(const DiskGrid& g, const std::vector<double>& f) {
  const int n = g.n();
  double total = 0.0;
  for (int j = 0; j + 1 < n; ++j) {
    for (int i = 0; i + 1 < n; ++i) {
      const std::array<std::size_t, 4> idx{g.index(i, j), g.index(i + 1, j), g.index(i + 1, j + 1),
                                           g.index(i, j + 1)};
      const std::array<Vec2, 4> pos{g.position(i, j), g.position(i + 1, j), g.position(i + 1, j + 1),
                                    g.position(i, j + 1)};
      std::array<double, 4> v{};
      bool valid = true;
      int above = 0;
      for (int k = 0; k < 4; ++k) {
        v[k] = f[idx[k]];
        if (!std::isfinite(v[k])) valid = false;
        if (v[k] > 0.5) ++above;
      }
      if (!valid || above == 0 || above == 4) continue;
      // Crossing point on edge k (corner k to corner k+1), if any.
      std::array<Vec2, 4> cross{};
      std::array<bool, 4> has{};
      for (int k = 0; k < 4; ++k) {
        const int m = (k + 1) % 4;
        if ((v[k] > 0.5) != (v[m] > 0.5)) {
          const double t = (0.5 - v[k]) / (v[m] - v[k]);
          cross[k] = pos[k] + t * (pos[m] - pos[k]);
          has[k] = true;
        }
      }
      const int count = has[0] + has[1] + has[2] + has[3];
      if (count == 2) {
        Vec2 ends[2];
        int e = 0;
        for (int k = 0; k < 4; ++k) {
          if (has[k]) ends[e++] = cross[k];
        }
        total += clipped_length(ends[0], ends[1]);
      } else if (count == 4) {
        const bool centre_above = 0.25 * (v[0] + v[1] + v[2] + v[3]) > 0.5;
        if (centre_above == (v[0] > 0.5)) {
          // Corners 0 and 2 connect through the centre; cut off corners 1 and 3.
          total += clipped_length(cross[0], cross[1]) + clipped_length(cross[2], cross[3]);
        } else {
          total += clipped_length(cross[3], cross[0]) + clipped_length(cross[1], cross[2]);
        }
      }
    }
  }
  return total;
}

double bilinear(const DiskGrid& g, const std::vector<double>& f, Vec2 x) {
  const double fx = (x.x + 1.0) / g.h(), fy = (x.y + 1.0) / g.h();
  const int i = std::clamp(static_cast<int>(std::floor(fx)), 0, g.n() - 2);
  const int j = std::clamp(static_cast<int>(std::floor(fy)), 0, g.n() - 2);
  const double tx = fx - i, ty = fy - j;
  return (1.0 - ty) * ((1.0 - tx) * f[g.index(i, j)] + tx * f[g.index(i + 1, j)]) +
         ty * ((1.0 - tx) * f[g.index(i, j + 1)] + tx * f[g.index(i + 1, j + 1)]);
}

int slot_of_labels(int a, int b) { return DistanceTable::pair_slot(a - 1, b - 1); }

}  // namespace

std::array<std::size_t, 3> SharpPartition::counts() const {
  std::array<std::size_t, 3> c{};
  for (std::uint8_t l : labels) {
    if (l >= 1 && l <= 3) ++c[l - 1];
  }
  return c;
}

int BoundaryTrace::label_at(double angle) const { return sector_index(theta, angle) + 1; }

BoundaryTrace u0_trace(const JunctionAngles& angles) { return BoundaryTrace{angles.theta}; }

int u0_sector(const JunctionAngles& angles, double angle) { return sector_index(angles.theta, angle); }

Field2D u0_field(std::shared_ptr<const DiskGrid> grid, const JunctionAngles& angles,
                 const std::array<Vec2, 3>& wells) {
  Field2D f(grid);
  for (std::size_t c = 0; c < grid->size(); ++c) {
    if (grid->kind(c) == NodeKind::outside) continue;
    const Vec2 x = grid->position(c);
    f.set(c, wells[u0_sector(angles, std::atan2(x.y, x.x))]);
  }
  return f;
}

SharpPartition u0_partition(std::shared_ptr<const DiskGrid> grid, const JunctionAngles& angles) {
  SharpPartition p;
  p.grid = grid;
  p.source = SharpPartition::Source::analytic;
  p.labels.assign(grid->size(), 0);
  for (std::size_t c = 0; c < grid->size(); ++c) {
    if (grid->kind(c) != NodeKind::interior) continue;
    const Vec2 x = grid->position(c);
    p.labels[c] = static_cast<std::uint8_t>(u0_sector(angles, std::atan2(x.y, x.x)) + 1);
  }
  return p;
}

SharpPartition quantize_to_wells(const Field2D& field, const std::array<Vec2, 3>& wells) {
  SharpPartition p;
  p.grid = field.grid;
  p.source = SharpPartition::Source::quantized;
  p.labels.assign(field.grid->size(), 0);
  for (std::size_t c = 0; c < field.grid->size(); ++c) {
    if (field.grid->kind(c) != NodeKind::interior) continue;
    const Vec2 u = field.at(c);
    int best = 0;
    double best_d = norm2(u - wells[0]);
    for (int k = 1; k < 3; ++k) {
      const double d = norm2(u - wells[k]);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    p.labels[c] = static_cast<std::uint8_t>(best + 1);
  }
  return p;
}

InterfaceParts measure_interfaces(const SharpPartition& p, const BoundaryTrace& trace, int trace_samples) {
  const DiskGrid& g = *p.grid;
  InterfaceParts parts;
  std::array<std::vector<double>, 3> smooth;
  for (int l = 0; l < 3; ++l) {
    smooth[l] = smoothed_indicator(p, l + 1);
    parts.perimeter[l] = contour_length(g, smooth[l]);
  }
  const auto& P = parts.perimeter;
  parts.interior[0] = 0.5 * (P[0] + P[1] - P[2]);
  parts.interior[1] = 0.5 * (P[0] + P[2] - P[1]);
  parts.interior[2] = 0.5 * (P[1] + P[2] - P[0]);

  const double arc = kTwoPi / trace_samples;
  for (int s = 0; s < trace_samples; ++s) {
    const double angle = kTwoPi * (s + 0.5) / trace_samples;
    const Vec2 x = unit_vector(angle);
    int best = 0;
    double best_v = -1.0;
    for (int l = 0; l < 3; ++l) {
      const double v = bilinear(g, smooth[l], x);
      if (v > best_v) {
        best_v = v;
        best = l + 1;
      }
    }
    const int want = trace.label_at(angle);
    if (best != want) parts.mismatch[slot_of_labels(best, want)] += arc;
  }
  return parts;
}

double pair_weight(const DistanceTable& table, int slot) {
  static constexpr int a[3] = {0, 0, 1}, b[3] = {1, 2, 2};
  return table.gamma[a[slot]][b[slot]];
}

I0Result energy_I0(const SharpPartition& partition, const DistanceTable& table, const BoundaryTrace& trace) {
  I0Result r;
  r.parts = measure_interfaces(partition, trace);
  for (int s = 0; s < 3; ++s) {
    r.partition_functional += pair_weight(table, s) * (r.parts.interior[s] + r.parts.mismatch[s]);
  }
  r.total = 2.0 * r.partition_functional;
  return r;
}

double l1_distance(const Field2D& a, const Field2D& b) {
  require_same_grid(a, b);
  const DiskGrid& g = *a.grid;
  double s = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (g.kind(c) != NodeKind::interior) continue;
    s += std::abs(a.u1[c] - b.u1[c]) + std::abs(a.u2[c] - b.u2[c]);
  }
  return g.h() * g.h() * s;
}

double annulus_sup_error(const Field2D& u, const BoundaryMap& map, double eps, double alpha) {
  const double r0 = std::pow(eps, alpha);
  if (!(r0 < 1.0)) throw EmptyAnnulus("eps^alpha = " + std::to_string(r0) + " leaves no annulus");
  const DiskGrid& g = *u.grid;
  double sup = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (g.kind(c) != NodeKind::interior) continue;
    const Vec2 x = g.position(c);
    if (norm(x) < r0) continue;
    sup = std::max(sup, distance(u.at(c), eval_phi_eps(map, x, eps)));
  }
  return sup;
}

double annulus_gradient_error(const Field2D& u, const BoundaryMap& map, double eps, double alpha) {
  const double r0 = std::pow(eps, alpha);
  if (!(r0 < 1.0)) throw EmptyAnnulus("eps^alpha = " + std::to_string(r0) + " leaves no annulus");
  const DiskGrid& g = *u.grid;
  const Field2D phi = phi_field(u.grid, map, eps);
  const double inv = 0.5 / g.h();
  double sup = 0.0;
  for (const RowRun& run : g.runs()) {
    for (int i = run.begin; i < run.end; ++i) {
      const int j = run.row;
      if (norm(g.position(i, j)) < r0) continue;
      const std::size_t e = g.index(i + 1, j), w = g.index(i - 1, j);
      const std::size_t nn = g.index(i, g.row_up(j)), s = g.index(i, g.row_down(j));
      const Vec2 dx = inv * ((u.at(e) - u.at(w)) - (phi.at(e) - phi.at(w)));
      const Vec2 dy = inv * ((u.at(nn) - u.at(s)) - (phi.at(nn) - phi.at(s)));
      sup = std::max(sup, std::sqrt(norm2(dx) + norm2(dy)));
    }
  }
  return sup;
}

double two_scale_core_error(const Field2D& u_eps, const Field2D& u_sigma, double alpha) {
  const double eps = u_eps.eps, sigma = u_sigma.eps;
  if (!(eps > 0.0 && sigma > 0.0)) throw InvalidArgument("both fields need their eps recorded");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  const double limit = std::pow(eps, 1.0 - alpha);
  if (sigma > limit * (1.0 + 1e-12)) {
    throw ScaleConditionViolated("sigma " + std::to_string(sigma) + " exceeds eps^(1 - alpha) = " +
                                 std::to_string(limit) + " (eps " + std::to_string(eps) + ", alpha " +
                                 std::to_string(alpha) + ")");
  }
  const double radius = 0.5 * std::pow(eps, alpha);
  const DiskGrid& g = *u_eps.grid;
  double sup = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (g.kind(c) != NodeKind::interior) continue;
    const Vec2 x = g.position(c);
    if (norm(x) > radius) continue;
    sup = std::max(sup, distance(u_eps.at(c), u_sigma.sample((sigma / eps) * x)));
  }
  return sup;
}

std::vector<Vec2> default_probe_points(double eps_min) {
  std::vector<Vec2> pts{{0.0, 0.0}};
  for (int k = -2; std::ldexp(1.0, k) <= 1.0 / eps_min; ++k) {
    const double r = std::ldexp(1.0, k);
    for (int a = 0; a < 64; ++a) pts.push_back(r * unit_vector(kTwoPi * (a + 0.5) / 64.0));
  }
  return pts;
}

Vec2 blowdown_value(const Field2D& u, const BoundaryMap& map, Vec2 x) {
  if (norm(x) <= 1.0 / u.eps) return u.sample(u.eps * x);
  return eval_phi(map, x);
}

std::vector<std::vector<double>> blowdown_cauchy(const std::vector<const Field2D*>& fields,
                                                 const BoundaryMap& map, const std::vector<Vec2>& probes) {
  if (fields.size() < 2) throw InvalidArgument("blow-down comparison needs at least two fields");
  const std::size_t m = fields.size();
  std::vector<std::vector<Vec2>> values(m);
  for (std::size_t a = 0; a < m; ++a) {
    values[a].reserve(probes.size());
    for (const Vec2& x : probes) values[a].push_back(blowdown_value(*fields[a], map, x));
  }
  std::vector<std::vector<double>> d(m, std::vector<double>(m, 0.0));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      double sup = 0.0;
      for (std::size_t k = 0; k < probes.size(); ++k) sup = std::max(sup, distance(values[a][k], values[b][k]));
      d[a][b] = d[b][a] = sup;
    }
  }
  return d;
}

Field2D phi_field(std::shared_ptr<const DiskGrid> grid, const BoundaryMap& map, double eps) {
  Field2D f(grid, eps);
  for (std::size_t c = 0; c < grid->size(); ++c) {
    if (grid->kind(c) != NodeKind::outside) f.set(c, eval_phi_eps(map, grid->position(c), eps));
  }
  return f;
}

double relative_energy_G(const Field2D& u, const BoundaryMap& map, const Potential& pot, double eps) {
  const Field2D phi = phi_field(u.grid, map, eps);
  return (energy_Ieps(u, pot, eps) - energy_Ieps(phi, pot, eps)) / eps;
}

JunctionMeasurement measure_junction_angles(const SharpPartition& p) {
  const DiskGrid& g = *p.grid;
  const int n = g.n();
  Vec2 sum{0.0, 0.0};
  int found = 0;
  for (int j = 1; j + 1 < n; ++j) {
    for (int i = 1; i + 1 < n; ++i) {
      const Vec2 x = g.position(i, j);
      if (norm(x) > 0.3) continue;
      unsigned seen = 0;
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) seen |= 1u << p.label(i + di, j + dj);
      }
      if ((seen & 0b1110u) == 0b1110u) {
        sum = sum + x;
        ++found;
      }
    }
  }
  if (found == 0) throw NoTriplePoint("no 3x3 neighbourhood within |x| <= 0.3 holds all three labels");
  JunctionMeasurement m;
  m.junction = sum / static_cast<double>(found);

  std::array<std::vector<Vec2>, 3> pts;
  auto consider = [&](int i0, int j0, int i1, int j1) {
    const int a = p.label(i0, j0), b = p.label(i1, j1);
    if (a == 0 || b == 0 || a == b) return;
    const Vec2 mid = 0.5 * (g.position(i0, j0) + g.position(i1, j1));
    const double r = norm(mid);
    if (r < 0.2 || r > 0.6) return;
    pts[slot_of_labels(std::min(a, b), std::max(a, b))].push_back(mid);
  };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i + 1 < n) consider(i, j, i + 1, j);
      if (j + 1 < n) consider(i, j, i, j + 1);
    }
  }
  for (int s = 0; s < 3; ++s) {
    const auto& ps = pts[s];
    m.points[s] = static_cast<int>(ps.size());
    if (ps.size() < 3) throw NoTriplePoint("interface " + std::to_string(s) + " has too few points to fit");
    Sym2 M{0.0, 0.0, 0.0};
    Vec2 mean{0.0, 0.0};
    for (const Vec2& q : ps) {
      const Vec2 d = q - m.junction;
      M.xx += d.x * d.x;
      M.xy += d.x * d.y;
      M.yy += d.y * d.y;
      mean = mean + d;
    }
    double psi = 0.5 * std::atan2(2.0 * M.xy, M.xx - M.yy);
    if (dot(mean, unit_vector(psi)) < 0.0) psi += std::numbers::pi;
    m.ray[s] = std::fmod(psi + 2.0 * kTwoPi, kTwoPi);
    m.fit_residual[s] = std::sqrt(std::max(M.min_eigenvalue(), 0.0) / static_cast<double>(ps.size()));
  }
  for (int k = 0; k < 3; ++k) {
    const int next = DistanceTable::pair_slot(k, (k + 1) % 3);
    const int prev = DistanceTable::pair_slot((k + 2) % 3, k);
    double a = std::fmod(m.ray[next] - m.ray[prev], kTwoPi);
    if (a < 0.0) a += kTwoPi;
    m.alpha[k] = a;
  }
  m.alpha_sum = m.alpha[0] + m.alpha[1] + m.alpha[2];
  return m;
}

ProbeResult partition_perturbation_probe(const SharpPartition& base, const DistanceTable& table,
                                         const BoundaryTrace& trace, int trials, std::uint64_t seed) {
  const DiskGrid& g = *base.grid;
  ProbeResult out;
  out.trials = trials;
  out.base_value = energy_I0(base, table, trace).partition_functional;
  out.tolerance = 3.0 * g.h() * (pair_weight(table, 0) + pair_weight(table, 1) + pair_weight(table, 2));
  out.worst_delta = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double interior = static_cast<double>(g.interior_count());
  for (int t = 0; t < trials; ++t) {
    SharpPartition trial = base;
    const int blobs = 1 + static_cast<int>(rng() % 3);
    const double r_max = std::sqrt(0.02 / blobs);
    std::size_t flipped = 0;
    for (int b = 0; b < blobs; ++b) {
      const double radius = 2.0 * g.h() + (r_max - 2.0 * g.h()) * unit(rng);
      Vec2 centre;
      if (t % 2 == 1) {
        const double ray = trace.theta[rng() % 3];
        centre = (0.05 + 0.85 * unit(rng)) * unit_vector(ray) +
                 (radius * (2.0 * unit(rng) - 1.0)) * unit_vector(ray + 0.5 * std::numbers::pi);
      } else {
        centre = (0.9 * std::sqrt(unit(rng))) * unit_vector(kTwoPi * unit(rng));
      }
      int centre_label = 1;
      {
        const int i = std::clamp(static_cast<int>(std::lround((centre.x + 1.0) / g.h())), 0, g.n() - 1);
        const int j = std::clamp(static_cast<int>(std::lround((centre.y + 1.0) / g.h())), 0, g.n() - 1);
        centre_label = std::max(1, trial.label(i, j));
      }
      const int new_label = 1 + (centre_label + static_cast<int>(rng() % 2)) % 3;
      for (const RowRun& run : g.runs()) {
        for (int i = run.begin; i < run.end; ++i) {
          const std::size_t c = g.index(i, run.row);
          if (distance(g.position(c), centre) > radius) continue;
          if (trial.labels[c] != new_label) {
            trial.labels[c] = static_cast<std::uint8_t>(new_label);
            if (base.labels[c] != new_label) ++flipped;
          }
        }
      }
    }
    const double value = energy_I0(trial, table, trace).partition_functional;
    const double delta = value - out.base_value;
    out.max_flipped_fraction = std::max(out.max_flipped_fraction, flipped / interior);
    if (delta < out.worst_delta) {
      out.worst_delta = delta;
      out.worst_trial = t;
    }
  }
  out.all_pass = trials == 0 || out.worst_delta >= -out.tolerance;
  if (trials == 0) out.worst_delta = 0.0;
  return out;
}

}  // namespace tripoint

#include "tripoint/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tripoint/errors.hpp"

namespace tripoint {

double smoothstep5(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

double AngularPartition::junction(int k, double angle) const {
  const double off = std::abs(wrap_angle(angle - theta[static_cast<std::size_t>(k)]));
  const double half = 0.5 * delta;
  return 1.0 - smoothstep5((off - half) / half);
}

int AngularPartition::sector_of(double angle) const {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double theta0 = theta[2] - two_pi;
  double a = theta0 + std::fmod(angle - theta0, two_pi);
  if (a <= theta0) a += two_pi;
  if (a <= theta[0]) return 0;
  if (a <= theta[1]) return 1;
  return 2;
}

double AngularPartition::sector(int k, double angle) const {
  if (sector_of(angle) != k) return 0.0;
  return 1.0 - junction((k + 2) % 3, angle) - junction(k, angle);
}

std::array<double, 6> AngularPartition::bumps(double angle) const {
  std::array<double, 6> out{};
  for (int k = 0; k < 3; ++k) {
    out[static_cast<std::size_t>(2 * k)] = sector(k, angle);
    out[static_cast<std::size_t>(2 * k + 1)] = junction(k, angle);
  }
  return out;
}

std::pair<double, double> AngularPartition::support(int j) const {
  const int k = j / 2;
  if (j % 2 == 1) return {theta[k] - delta, theta[k] + delta};
  const double lo = k == 0 ? theta[2] - 2.0 * std::numbers::pi : theta[k - 1];
  return {lo + 0.5 * delta, theta[k] - 0.5 * delta};
}

double default_delta(const JunctionAngles& angles) {
  return 0.15 * std::min({angles.alpha[0], angles.alpha[1], angles.alpha[2]});
}

AngularPartition build_partition(const JunctionAngles& angles, double delta) {
  const double min_alpha = std::min({angles.alpha[0], angles.alpha[1], angles.alpha[2]});
  if (!(delta > 0.0) || !(delta < 0.5 * min_alpha)) {
    throw DeltaTooLarge("delta " + std::to_string(delta) + " must lie in (0, min alpha / 2) with min alpha " +
                        std::to_string(min_alpha));
  }
  AngularPartition p;
  p.delta = delta;
  p.theta = angles.theta;
  return p;
}

double BoundaryMap::bound() const {
  double b = 0.0;
  for (const Vec2& c : wells) b = std::max(b, norm(c));
  for (const auto& prof : profiles) {
    for (const Vec2& v : prof.values) b = std::max(b, norm(v));
  }
  return b;
}

BoundaryMap build_boundary_map(const JunctionAngles& angles, double delta,
                               std::array<HeteroclinicProfile, 3> profiles, std::array<Vec2, 3> wells) {
  BoundaryMap m;
  m.angles = angles;
  m.partition = build_partition(angles, delta);
  m.wells = wells;
  for (int k = 0; k < 3; ++k) {
    const auto [a, b] = BoundaryMap::junction_wells(k);
    const auto& prof = profiles[static_cast<std::size_t>(k)];
    if (prof.values.empty() || distance(prof.values.front(), wells[a]) > 1e-12 ||
        distance(prof.values.back(), wells[b]) > 1e-12) {
      throw InvalidArgument("profile " + std::to_string(k) + " must run from well " + std::to_string(a + 1) +
                            " to well " + std::to_string(b + 1));
    }
  }
  m.profiles = std::move(profiles);
  return m;
}

double inner_cutoff(double r) { return 1.0 - smoothstep5(2.0 * r - 1.0); }

Vec2 eval_phi(const BoundaryMap& map, Vec2 x) {
  const double outer = 1.0 - inner_cutoff(norm(x));
  if (outer == 0.0) return {0.0, 0.0};
  const double angle = std::atan2(x.y, x.x);
  const auto& part = map.partition;
  Vec2 blend{0.0, 0.0};
  double junction_sum[3];
  for (int k = 0; k < 3; ++k) {
    junction_sum[k] = part.junction(k, angle);
    if (junction_sum[k] > 0.0) {
      blend = blend + junction_sum[k] * map.profiles[k].sample(signed_line_offset(part.theta[k], x));
    }
  }
  const int k = part.sector_of(angle);
  const double s = 1.0 - junction_sum[(k + 2) % 3] - junction_sum[k];
  if (s > 0.0) blend = blend + s * map.wells[k];
  return outer * blend;
}

Vec2 eval_phi_eps(const BoundaryMap& map, Vec2 x, double eps) { return eval_phi(map, x / eps); }

double profile_argument(const BoundaryMap& map, int k, Vec2 x, double eps) {
  return signed_line_offset(map.partition.theta[static_cast<std::size_t>(k)], x / eps);
}

double phi_residual_at(const BoundaryMap& map, const Potential& pot, Vec2 x, double eps, double h) {
  const Vec2 c = eval_phi_eps(map, x, eps);
  const Vec2 lap = (eval_phi_eps(map, {x.x + h, x.y}, eps) + eval_phi_eps(map, {x.x - h, x.y}, eps) +
                    eval_phi_eps(map, {x.x, x.y + h}, eps) + eval_phi_eps(map, {x.x, x.y - h}, eps) - 4.0 * c) /
                   (h * h);
  return norm(pot.gradient(c) / (2.0 * eps * eps) - lap);
}

PhiResidualRecord phi_residual_profile(const BoundaryMap& map, const Potential& pot, double eps, double alpha,
                                       int samples, double h) {
  if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("eps must lie in (0, 1]");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  if (samples < 16) throw InvalidArgument("at least 16 samples are required");
  if (h == 0.0) h = eps / 40.0;
  if (!(h > 0.0) || h > eps / 10.0) {
    throw StepTooCoarse("step " + std::to_string(h) + " exceeds eps / 10 = " + std::to_string(eps / 10.0));
  }
  PhiResidualRecord rec;
  rec.eps = eps;
  rec.alpha = alpha;
  rec.h = h;
  const double r0 = std::pow(eps, alpha);
  const int radii = std::max(8, static_cast<int>(std::sqrt(static_cast<double>(samples)) / 2.0));
  const int angles = std::max(8, samples / radii);
  for (int a = 0; a < radii; ++a) {
    const double r = r0 + (1.0 - r0) * a / (radii - 1);
    for (int b = 0; b < angles; ++b) {
      const Vec2 x = r * unit_vector(2.0 * std::numbers::pi * (b + 0.5) / angles);
      const double res = phi_residual_at(map, pot, x, eps, h);
      ++rec.samples;
      if (res > rec.sup) {
        rec.sup = res;
        rec.worst = x;
      }
    }
  }
  rec.scaled_sup = eps * eps * rec.sup;
  return rec;
}

}  // namespace tripoint

#include "tripoint/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "tripoint/errors.hpp"

namespace tripoint {

namespace {

constexpr double kFdStep = 1e-5;
constexpr double kFdHessianStep = 1e-4;

void check_distinct(std::span<const Vec2> wells) {
  for (std::size_t i = 0; i < wells.size(); ++i) {
    for (std::size_t j = i + 1; j < wells.size(); ++j) {
      if (distance(wells[i], wells[j]) <= 1e-12) {
        throw DuplicateWells("wells " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                             " coincide");
      }
    }
  }
}

}  // namespace

Potential Potential::product(Vec2 c1, Vec2 c2, Vec2 c3) {
  Potential p;
  p.family_ = "product";
  p.wells_ = {c1, c2, c3};
  check_distinct(p.wells_);
  p.is_product_ = true;
  return p;
}

Potential Potential::custom(std::string family, std::vector<Vec2> wells, ValueFn value,
                            GradientFn gradient, HessianFn hessian) {
  if (!value) throw InvalidArgument("custom potential needs a value evaluator");
  Potential p;
  p.family_ = std::move(family);
  p.wells_ = std::move(wells);
  check_distinct(p.wells_);
  p.value_ = std::move(value);
  p.gradient_ = std::move(gradient);
  p.hessian_ = std::move(hessian);
  return p;
}

Vec2 Potential::fd_gradient(Vec2 u) const {
  const double h = kFdStep;
  return {(value({u.x + h, u.y}) - value({u.x - h, u.y})) / (2 * h),
          (value({u.x, u.y + h}) - value({u.x, u.y - h})) / (2 * h)};
}

Sym2 Potential::fd_hessian(Vec2 u) const {
  const double h = kFdHessianStep;
  const Vec2 gxp = gradient({u.x + h, u.y}), gxm = gradient({u.x - h, u.y});
  const Vec2 gyp = gradient({u.x, u.y + h}), gym = gradient({u.x, u.y - h});
  const double xx = (gxp.x - gxm.x) / (2 * h);
  const double yy = (gyp.y - gym.y) / (2 * h);
  const double xy = 0.5 * ((gxp.y - gxm.y) / (2 * h) + (gyp.x - gym.x) / (2 * h));
  return {xx, xy, yy};
}

Sym2 Potential::hessian(Vec2 u) const {
  if (!is_product_) return hessian_ ? hessian_(u) : fd_hessian(u);
  const Vec2 a = u - wells_[0], b = u - wells_[1], c = u - wells_[2];
  const double na = norm2(a), nb = norm2(b), nc = norm2(c);
  // d/du of |u-c|^2 is 2(u-c); second derivative 2I.
  const Vec2 ga = 2.0 * a, gb = 2.0 * b, gc = 2.0 * c;
  const double diag = 2.0 * (nb * nc + na * nc + na * nb);
  auto sym_outer = [](Vec2 p, Vec2 q, double s) {
    return Sym2{2.0 * s * p.x * q.x, s * (p.x * q.y + p.y * q.x), 2.0 * s * p.y * q.y};
  };
  const Sym2 ab = sym_outer(ga, gb, nc), ac = sym_outer(ga, gc, nb), bc = sym_outer(gb, gc, na);
  return {diag + ab.xx + ac.xx + bc.xx, ab.xy + ac.xy + bc.xy, diag + ab.yy + ac.yy + bc.yy};
}

double Potential::max_well_norm() const {
  double r = 0.0;
  for (Vec2 c : wells_) r = std::max(r, norm(c));
  return r;
}

Potential build_product_potential(Vec2 c1, Vec2 c2, Vec2 c3) {
  return Potential::product(c1, c2, c3);
}

Potential equilateral_product_potential() {
  constexpr double pi = std::numbers::pi;
  return Potential::product(unit_vector(pi / 2), unit_vector(7 * pi / 6),
                            unit_vector(11 * pi / 6));
}

Potential two_well_section() {
  return Potential::custom(
      "two_well_section", {{-1.0, 0.0}, {1.0, 0.0}},
      [](Vec2 u) {
        const double s = 1.0 - u.x * u.x;
        return s * s + u.y * u.y;
      },
      [](Vec2 u) { return Vec2{-4.0 * u.x * (1.0 - u.x * u.x), 2.0 * u.y}; },
      [](Vec2 u) { return Sym2{12.0 * u.x * u.x - 4.0, 0.0, 2.0}; });
}

PotentialEval evaluate(const Potential& potential, Vec2 u) {
  if (!is_finite(u)) throw NonFinite("evaluation point is not finite");
  PotentialEval e{potential.value(u), potential.gradient(u), potential.hessian(u)};
  if (!std::isfinite(e.w) || !is_finite(e.grad) || !e.hess.is_finite()) {
    throw NonFinite("potential output at (" + std::to_string(u.x) + ", " + std::to_string(u.y) +
                    ")");
  }
  return e;
}

namespace {

// Armijo gradient descent toward a local minimum of W.
Vec2 descend(const Potential& pot, Vec2 p) {
  double step = 1e-2;
  double w = pot.value(p);
  for (int it = 0; it < 20000; ++it) {
    const Vec2 g = pot.gradient(p);
    const double g2 = norm2(g);
    if (g2 < 1e-28) break;
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      const Vec2 q = p - step * g;
      const double wq = pot.value(q);
      if (wq <= w - 1e-4 * step * g2) {
        p = q;
        w = wq;
        accepted = true;
        step *= 2.0;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return p;
}

CriticalPoint describe(const Potential& pot, Vec2 p) {
  const Sym2 h = pot.hessian(p);
  return {p, pot.value(p), h.min_eigenvalue(), h.max_eigenvalue()};
}

}  // namespace

HypothesisReport check_hypotheses(const Potential& pot, double K, double m, int sample_budget,
                                  std::uint64_t seed) {
  if (!(K > 0) || !(m > 0)) throw InvalidArgument("K and m must be positive");
  if (sample_budget < 1000) throw InvalidArgument("sample_budget must be at least 1000");

  HypothesisReport r;
  r.K = K;
  r.m = m;
  r.seed = seed;
  r.sample_budget = sample_budget;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const double scale = std::max(1.0, pot.max_well_norm());
  const double cluster_radius = 1e-2 * scale;

  // (a) basins of attraction from a jittered grid of starts on [-K, K]^2.
  const int g = 16;
  const double spacing = 2.0 * K / g;
  std::vector<CriticalPoint> found;
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      const Vec2 start{-K + (i + 0.2 + 0.6 * unit(rng)) * spacing,
                       -K + (j + 0.2 + 0.6 * unit(rng)) * spacing};
      ++r.descent_starts;
      const CriticalPoint cp = describe(pot, descend(pot, start));
      if (cp.min_eigenvalue < -1e-6 * scale) continue;  // saddle
      auto same = std::find_if(found.begin(), found.end(), [&](const CriticalPoint& f) {
        return distance(f.location, cp.location) <= cluster_radius;
      });
      if (same == found.end()) {
        found.push_back(cp);
      } else if (cp.value < same->value) {
        *same = cp;
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    return a.location.x != b.location.x ? a.location.x < b.location.x
                                        : a.location.y < b.location.y;
  });
  r.minima = found;
  bool matched = found.size() == 3 && pot.well_count() == 3;
  for (const auto& f : found) {
    bool near_well = false;
    for (Vec2 c : pot.wells()) near_well |= distance(c, f.location) <= cluster_radius;
    matched = matched && near_well && f.value <= 1e-10;
  }
  r.three_minima = matched;

  // (b) Hessian at each declared well.
  r.nondegenerate = pot.well_count() > 0;
  for (Vec2 c : pot.wells()) {
    const CriticalPoint cp = describe(pot, c);
    r.well_hessians.push_back(cp);
    r.nondegenerate = r.nondegenerate && cp.min_eigenvalue > 1e-6 && std::abs(cp.value) <= 1e-12;
  }

  // (c) PSD sampling on K < |u| <= 4K, area-uniform.
  int psd_ok = 0;
  r.psd_min_eigenvalue = std::numeric_limits<double>::infinity();
  for (int s = 0; s < sample_budget; ++s) {
    const double rad = std::sqrt(K * K + (16.0 * K * K - K * K) * unit(rng));
    const double ang = 2.0 * std::numbers::pi * unit(rng);
    const Vec2 u = rad * unit_vector(ang);
    const double e = pot.hessian(u).min_eigenvalue();
    if (e >= -1e-9) ++psd_ok;
    if (e < r.psd_min_eigenvalue) {
      r.psd_min_eigenvalue = e;
      r.psd_worst_point = u;
    }
  }
  r.psd_samples = sample_budget;
  r.psd_fraction = static_cast<double>(psd_ok) / sample_budget;
  r.psd_outside_K = psd_ok == sample_budget;

  // (d) log-log fit of W against |u| on rings m..8m.
  const int rings = 16, per_ring = 32;
  std::vector<double> lr, lw;
  std::vector<Vec2> pts;
  bool positive = true;
  for (int k = 0; k < rings; ++k) {
    const double rad = m * std::pow(8.0, static_cast<double>(k) / (rings - 1));
    for (int a = 0; a < per_ring; ++a) {
      const Vec2 u = rad * unit_vector(2.0 * std::numbers::pi * (a + 0.5) / per_ring);
      const double w = pot.value(u);
      if (!(w > 0)) {
        positive = false;
        continue;
      }
      lr.push_back(std::log(rad));
      lw.push_back(std::log(w));
      pts.push_back(u);
    }
  }
  if (lr.size() >= 2) {
    const double n = static_cast<double>(lr.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lr.size(); ++i) {
      sx += lr[i];
      sy += lw[i];
      sxx += lr[i] * lr[i];
      sxy += lr[i] * lw[i];
    }
    r.fitted_p = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    r.K1 = std::numeric_limits<double>::infinity();
    r.K2 = 0.0;
    for (std::size_t i = 0; i < lr.size(); ++i) {
      const double ratio = std::exp(lw[i] - r.fitted_p * lr[i]);
      r.K1 = std::min(r.K1, ratio);
      r.K2 = std::max(r.K2, ratio);
    }
  }
  r.growth = positive && r.fitted_p >= 2.0 - 1e-9 && r.K1 > 0 && std::isfinite(r.K2);
  return r;
}

HypothesisReport validate_hypotheses(const Potential& pot, double K, double m, int sample_budget,
                                     std::uint64_t seed) {
  HypothesisReport r = check_hypotheses(pot, K, m, sample_budget, seed);
  if (!r.three_minima) {
    Vec2 witness = r.minima.empty() ? Vec2{} : r.minima.front().location;
    // Prefer a declared well that no basin reached.
    for (Vec2 c : pot.wells()) {
      bool hit = false;
      for (const auto& f : r.minima) hit |= distance(f.location, c) <= 1e-2 * std::max(1.0, pot.max_well_norm());
      if (!hit) {
        witness = c;
        break;
      }
    }
    throw HypothesisViolated("three minima", witness,
                             std::to_string(r.minima.size()) + " distinct minima found");
  }
  if (!r.nondegenerate) {
    auto worst = std::min_element(
        r.well_hessians.begin(), r.well_hessians.end(),
        [](const CriticalPoint& a, const CriticalPoint& b) { return a.min_eigenvalue < b.min_eigenvalue; });
    throw HypothesisViolated("non-degenerate", worst->location,
                             "Hessian eigenvalue " + std::to_string(worst->min_eigenvalue));
  }
  if (!r.psd_outside_K) {
    throw HypothesisViolated("psd outside K", r.psd_worst_point,
                             "min eigenvalue " + std::to_string(r.psd_min_eigenvalue));
  }
  if (!r.growth) {
    throw HypothesisViolated("growth", Vec2{r.m, 0.0},
                             "fitted exponent " + std::to_string(r.fitted_p));
  }
  return r;
}

void to_json(nlohmann::json& j, const CriticalPoint& c) {
  j = {{"location", {c.location.x, c.location.y}},
       {"value", c.value},
       {"min_eigenvalue", c.min_eigenvalue},
       {"max_eigenvalue", c.max_eigenvalue}};
}

void from_json(const nlohmann::json& j, CriticalPoint& c) {
  c.location = {j.at("location").at(0).get<double>(), j.at("location").at(1).get<double>()};
  c.value = j.at("value").get<double>();
  c.min_eigenvalue = j.at("min_eigenvalue").get<double>();
  c.max_eigenvalue = j.at("max_eigenvalue").get<double>();
}

void to_json(nlohmann::json& j, const HypothesisReport& r) {
  j = nlohmann::json{
      {"K", r.K},
      {"m", r.m},
      {"seed", r.seed},
      {"sample_budget", r.sample_budget},
      {"defaults_used", r.defaults_used},
      {"three_minima", {{"pass", r.three_minima}, {"descent_starts", r.descent_starts}, {"minima", r.minima}}},
      {"nondegenerate", {{"pass", r.nondegenerate}, {"wells", r.well_hessians}}},
      {"psd_outside_K",
       {{"pass", r.psd_outside_K},
        {"samples", r.psd_samples},
        {"fraction", r.psd_fraction},
        {"min_eigenvalue", r.psd_min_eigenvalue},
        {"worst_point", {r.psd_worst_point.x, r.psd_worst_point.y}}}},
      {"growth", {{"pass", r.growth}, {"p", r.fitted_p}, {"K1", r.K1}, {"K2", r.K2}}},
  };
}

void from_json(const nlohmann::json& j, HypothesisReport& r) {
  r.K = j.at("K").get<double>();
  r.m = j.at("m").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.sample_budget = j.at("sample_budget").get<int>();
  r.defaults_used = j.at("defaults_used").get<bool>();
  const auto& a = j.at("three_minima");
  r.three_minima = a.at("pass").get<bool>();
  r.descent_starts = a.at("descent_starts").get<int>();
  r.minima = a.at("minima").get<std::vector<CriticalPoint>>();
  const auto& b = j.at("nondegenerate");
  r.nondegenerate = b.at("pass").get<bool>();
  r.well_hessians = b.at("wells").get<std::vector<CriticalPoint>>();
  const auto& c = j.at("psd_outside_K");
  r.psd_outside_K = c.at("pass").get<bool>();
  r.psd_samples = c.at("samples").get<int>();
  r.psd_fraction = c.at("fraction").get<double>();
  r.psd_min_eigenvalue = c.at("min_eigenvalue").get<double>();
  r.psd_worst_point = {c.at("worst_point").at(0).get<double>(), c.at("worst_point").at(1).get<double>()};
  const auto& d = j.at("growth");
  r.growth = d.at("pass").get<bool>();
  r.fitted_p = d.at("p").get<double>();
  r.K1 = d.at("K1").get<double>();
  r.K2 = d.at("K2").get<double>();
}

}  // namespace tripoint

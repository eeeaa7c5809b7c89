#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace oracle {

double product_w(Vec2 u, const std::array<Vec2, 3>& c) {
  double w = 1.0;
  for (const Vec2& ci : c) {
    const double dx = u.x - ci.x, dy = u.y - ci.y;
    w *= dx * dx + dy * dy;
  }
  return w;
}

Vec2 product_gradient(Vec2 u, const std::array<Vec2, 3>& c) {
  double a[3];
  Vec2 g[3];
  for (int k = 0; k < 3; ++k) {
    const Vec2 d = u - c[k];
    a[k] = d.x * d.x + d.y * d.y;
    g[k] = 2.0 * d;
  }
  return a[1] * a[2] * g[0] + a[0] * a[2] * g[1] + a[0] * a[1] * g[2];
}

std::array<double, 3> product_hessian(Vec2 u, const std::array<Vec2, 3>& c) {
  double a[3];
  Vec2 g[3];
  for (int k = 0; k < 3; ++k) {
    const Vec2 d = u - c[k];
    a[k] = d.x * d.x + d.y * d.y;
    g[k] = 2.0 * d;
  }
  // (xx, xy, yy)
  std::array<double, 3> h{};
  const double diag = 2.0 * (a[1] * a[2] + a[0] * a[2] + a[0] * a[1]);
  h[0] = diag;
  h[2] = diag;
  const int pairs[3][3] = {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}};
  for (const auto& p : pairs) {
    const Vec2 p0 = g[p[0]], p1 = g[p[1]];
    const double f = a[p[2]];
    h[0] += f * 2.0 * p0.x * p1.x;
    h[1] += f * (p0.x * p1.y + p1.x * p0.y);
    h[2] += f * 2.0 * p0.y * p1.y;
  }
  return h;
}

Vec2 BvpSolution::at(double s) const {
  if (s <= x.front()) return u.front();
  if (s >= x.back()) return u.back();
  const double h = x[1] - x[0];
  const auto k = std::min(static_cast<std::size_t>((s - x.front()) / h), x.size() - 2);
  const double t = (s - x[k]) / h;
  return (1.0 - t) * u[k] + t * u[k + 1];
}

namespace {

struct M2 {
  double a, b, c, d;  // [[a, b], [c, d]]
};

M2 inverse(const M2& m) {
  const double det = m.a * m.d - m.b * m.c;
  if (det == 0.0) throw std::runtime_error("singular block");
  return {m.d / det, -m.b / det, -m.c / det, m.a / det};
}

Vec2 mul(const M2& m, Vec2 v) { return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y}; }
M2 mul(const M2& m, const M2& n) {
  return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}
M2 sub(const M2& m, const M2& n) { return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d}; }

}  // namespace

BvpSolution strip_bvp(const std::array<Vec2, 3>& wells, double eps, std::vector<Vec2> guess) {
  const std::size_t n = guess.size();
  if (n < 3) throw std::invalid_argument("need at least three nodes");
  BvpSolution s;
  s.u = std::move(guess);
  const double h = 2.0 / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) s.x.push_back(-1.0 + h * static_cast<double>(i));
  const double k = 0.5 / (eps * eps), ih2 = 1.0 / (h * h);
  const std::size_t m = n - 2;
  std::vector<Vec2> F(m), rhs(m);
  std::vector<M2> diag(m), cprime(m);
  std::vector<Vec2> best = s.u;
  s.residual = std::numeric_limits<double>::infinity();
  for (s.iterations = 0; s.iterations < 100; ++s.iterations) {
    double fmax = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const Vec2 lap = (s.u[i - 1] - 2.0 * s.u[i] + s.u[i + 1]) * ih2;
      F[i - 1] = lap - k * product_gradient(s.u[i], wells);
      fmax = std::max(fmax, tripoint::norm(F[i - 1]));
      const auto H = product_hessian(s.u[i], wells);
      diag[i - 1] = {-2.0 * ih2 - k * H[0], -k * H[1], -k * H[1], -2.0 * ih2 - k * H[2]};
    }
    // Past the round-off floor of the second difference a near-singular
    // Jacobian turns residual noise into large steps, so keep the best iterate.
    if (fmax >= s.residual) break;
    s.residual = fmax;
    best = s.u;
    if (fmax < 1e-11 * k + 1e-14 * ih2) break;
    // Block Thomas for J du = -F with off-diagonal blocks ih2 * I.
    const M2 off{ih2, 0.0, 0.0, ih2};
    M2 inv = inverse(diag[0]);
    cprime[0] = mul(inv, off);
    rhs[0] = mul(inv, -1.0 * F[0]);
    for (std::size_t i = 1; i < m; ++i) {
      inv = inverse(sub(diag[i], mul(off, cprime[i - 1])));
      cprime[i] = mul(inv, off);
      rhs[i] = mul(inv, -1.0 * F[i] - mul(off, rhs[i - 1]));
    }
    for (std::size_t i = m - 1; i-- > 0;) rhs[i] = rhs[i] - mul(cprime[i], rhs[i + 1]);
    for (std::size_t i = 0; i < m; ++i) s.u[i + 1] = s.u[i + 1] + rhs[i];
  }
  s.u = std::move(best);
  return s;
}

double sine_law_scan(const std::array<double, 3>& gamma, int steps) {
  const double pi = std::numbers::pi;
  double best = std::numeric_limits<double>::infinity();
  for (int p = 1; p < steps; ++p) {
    for (int q = 1; q < steps; ++q) {
      const double a1 = pi * p / steps, a2 = pi * q / steps, a3 = 2.0 * pi - a1 - a2;
      if (!(a3 > 0.0 && a3 < pi)) continue;
      const double r[3] = {std::sin(a1) / gamma[0], std::sin(a2) / gamma[1], std::sin(a3) / gamma[2]};
      const double hi = std::max({r[0], r[1], r[2]}), lo = std::min({r[0], r[1], r[2]});
      best = std::min(best, (hi - lo) / hi);
    }
  }
  return best;
}

}  // namespace oracle

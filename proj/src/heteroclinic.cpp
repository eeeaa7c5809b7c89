#include "tripoint/heteroclinic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "tripoint/errors.hpp"

namespace tripoint {

namespace {

Vec2 node_slope(const std::vector<Vec2>& f, std::size_t k, double h) {
  const std::size_t n = f.size();
  if (k == 0) return (f[1] - f[0]) / h;
  if (k + 1 == n) return (f[n - 1] - f[n - 2]) / h;
  return (f[k + 1] - f[k - 1]) / (2.0 * h);
}

Vec2 node_curvature(const std::vector<Vec2>& f, std::size_t k, double h) {
  const std::size_t n = f.size();
  k = std::clamp<std::size_t>(k, 1, n - 2);
  return (f[k + 1] - 2.0 * f[k] + f[k - 1]) / (h * h);
}

std::vector<double> uniform_grid(double L, int n) {
  std::vector<double> tau(static_cast<std::size_t>(n));
  const int half = (n - 1) / 2;
  // Exactly antisymmetric so that reflection maps the grid onto itself.
  for (int k = 0; k < n; ++k) tau[static_cast<std::size_t>(k)] = L * (k - half) / half;
  return tau;
}

void fill_energy(const Potential& pot, HeteroclinicProfile& p) {
  const double h = p.dtau();
  double grad = 0.0, pot_part = 0.0;
  for (std::size_t k = 0; k + 1 < p.size(); ++k) grad += norm2(p.values[k + 1] - p.values[k]) / h;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double weight = (k == 0 || k + 1 == p.size()) ? 0.5 * h : h;
    pot_part += pot.value(p.values[k]) * weight;
  }
  if (!std::isfinite(grad) || !std::isfinite(pot_part)) throw NonFinite("profile energy");
  p.gradient_part = grad;
  p.potential_part = pot_part;
  p.energy = grad + pot_part;
}

// Clamped discrete action on interior unknowns x[0..m) = zeta[1..n-1).
struct Action {
  const Potential& pot;
  Vec2 left, right;
  double h;

  double value(const std::vector<Vec2>& x) const {
    const std::size_t m = x.size();
    double s = norm2(x.front() - left) / h + norm2(right - x.back()) / h;
    for (std::size_t k = 0; k + 1 < m; ++k) s += norm2(x[k + 1] - x[k]) / h;
    for (const Vec2& v : x) s += pot.value(v) * h;
    return s;
  }

  // Returns max |grad W| over the nodes.
  double gradient(const std::vector<Vec2>& x, std::vector<Vec2>& g) const {
    const std::size_t m = x.size();
    double gw_max = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const Vec2 prev = k == 0 ? left : x[k - 1];
      const Vec2 next = k + 1 == m ? right : x[k + 1];
      const Vec2 gw = pot.gradient(x[k]);
      gw_max = std::max(gw_max, norm(gw));
      g[k] = (2.0 / h) * (2.0 * x[k] - prev - next) + h * gw;
    }
    return gw_max;
  }
};

// Solves ((2/h) T + shift I) y = r with T = tridiag(-1, 2, -1), both components at once.
void precondition(double h, double shift, const std::vector<Vec2>& r, std::vector<Vec2>& y,
                  std::vector<double>& work) {
  const std::size_t m = r.size();
  const double off = -2.0 / h, diag = 4.0 / h + shift;
  work.resize(m);
  double denom = diag;
  y[0] = r[0] / denom;
  for (std::size_t k = 1; k < m; ++k) {
    work[k] = off / denom;
    denom = diag - off * work[k];
    y[k] = (r[k] - off * y[k - 1]) / denom;
  }
  for (std::size_t k = m - 1; k-- > 0;) y[k] = y[k] - work[k + 1] * y[k + 1];
}

void apply_preconditioner(double h, double shift, const std::vector<Vec2>& s, std::vector<Vec2>& out) {
  const std::size_t m = s.size();
  for (std::size_t k = 0; k < m; ++k) {
    Vec2 t = (4.0 / h + shift) * s[k];
    if (k > 0) t = t - (2.0 / h) * s[k - 1];
    if (k + 1 < m) t = t - (2.0 / h) * s[k + 1];
    out[k] = t;
  }
}

double dot_all(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += dot(a[k], b[k]);
  return s;
}

// Equipartition reparameterization dtau = ds / sqrt(W), centred where half the action is spent.
std::vector<Vec2> initial_values(const Potential& pot, const UPath& path, const std::vector<double>& tau) {
  const UPath fine = resample_path(path, std::max<int>(1025, static_cast<int>(path.size())));
  const auto& p = fine.nodes;
  std::vector<double> T(p.size(), 0.0), A(p.size(), 0.0);
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    const double ds = distance(p[k], p[k + 1]);
    const double root = std::sqrt(std::max(pot.value(0.5 * (p[k] + p[k + 1])), 0.0));
    const double floor_root = std::max(root, 1e-12);
    T[k + 1] = T[k] + ds / floor_root;
    A[k + 1] = A[k] + root * ds;
  }
  const double half = 0.5 * A.back();
  std::size_t c = 0;
  while (c + 2 < A.size() && A[c + 1] < half) ++c;
  const double span = A[c + 1] - A[c];
  const double frac = span > 0.0 ? (half - A[c]) / span : 0.0;
  const double centre = T[c] + frac * (T[c + 1] - T[c]);
  for (double& t : T) t -= centre;

  std::vector<Vec2> out(tau.size());
  std::size_t seg = 0;
  for (std::size_t q = 0; q < tau.size(); ++q) {
    const double t = tau[q];
    if (t <= T.front()) {
      out[q] = p.front();
      continue;
    }
    if (t >= T.back()) {
      out[q] = p.back();
      continue;
    }
    while (seg + 2 < T.size() && T[seg + 1] < t) ++seg;
    const double w = (t - T[seg]) / (T[seg + 1] - T[seg]);
    out[q] = (1.0 - w) * p[seg] + w * p[seg + 1];
  }
  out.front() = p.front();
  out.back() = p.back();
  return out;
}

void check_arguments(const Potential& pot, int i, int j, const ConnectionOptions& opts) {
  const int count = pot.well_count();
  if (i < 0 || j < 0 || i >= count || j >= count) throw InvalidArgument("well index out of range");
  if (i == j) throw InvalidArgument("connection needs two distinct wells");
  if (!(opts.L >= 8.0)) throw InvalidArgument("half-length L must be at least 8");
  if (opts.n < 401 || opts.n % 2 == 0) throw InvalidArgument("node count must be odd and >= 401");
  if (!(opts.tol > 0.0)) throw InvalidArgument("tolerance must be positive");
}

HeteroclinicProfile descend(const Potential& pot, int i, int j, const UPath& init,
                            const ConnectionOptions& opts) {
  HeteroclinicProfile prof;
  prof.from = i;
  prof.to = j;
  prof.L = opts.L;
  prof.tau = uniform_grid(opts.L, opts.n);
  std::vector<Vec2> zeta = initial_values(pot, init, prof.tau);

  const double h = prof.dtau();
  const Vec2 left = pot.well(i), right = pot.well(j);
  const Action action{pot, left, right, h};
  const double lambda =
      std::max(0.5 * (pot.hessian(left).min_eigenvalue() + pot.hessian(right).min_eigenvalue()), 1e-3);
  const double shift = lambda * h;

  const std::size_t m = zeta.size() - 2;
  std::vector<Vec2> x(zeta.begin() + 1, zeta.end() - 1);
  std::vector<Vec2> g(m), d(m), x_new(m), g_new(m), s(m), ys(m), Ps(m);
  std::vector<double> work;

  double f = action.value(x);
  double gw = action.gradient(x, g);
  std::deque<double> history{f};
  double alpha = 1.0;
  double residual = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    double gmax = 0.0;
    for (const Vec2& v : g) gmax = std::max(gmax, norm(v));
    residual = gmax / (2.0 * h);
    if (residual <= opts.tol * (1.0 + gw)) break;

    precondition(h, shift, g, d, work);
    const double slope = dot_all(g, d);
    const double ref = *std::max_element(history.begin(), history.end());
    double f_new = 0.0;
    int halvings = 0;
    for (;; ++halvings) {
      for (std::size_t k = 0; k < m; ++k) x_new[k] = x[k] - alpha * d[k];
      f_new = action.value(x_new);
      if (std::isfinite(f_new) && f_new <= ref - 1e-4 * alpha * slope) break;
      if (halvings >= 60) throw ResidualTooLarge(residual);
      alpha *= 0.5;
    }
    const double gw_new = action.gradient(x_new, g_new);
    for (std::size_t k = 0; k < m; ++k) {
      s[k] = x_new[k] - x[k];
      ys[k] = g_new[k] - g[k];
    }
    apply_preconditioner(h, shift, s, Ps);
    const double sy = dot_all(s, ys);
    const double sPs = dot_all(s, Ps);
    alpha = (sy > 0.0 && sPs > 0.0) ? std::clamp(sPs / sy, 1e-6, 1e6) : 1.0;
    x.swap(x_new);
    g.swap(g_new);
    f = f_new;
    gw = gw_new;
    history.push_back(f);
    if (history.size() > 10) history.pop_front();
  }
  if (!(residual <= opts.tol * (1.0 + gw))) throw ResidualTooLarge(residual);

  std::copy(x.begin(), x.end(), zeta.begin() + 1);
  prof.values = std::move(zeta);
  prof.iterations = it;
  fill_energy(pot, prof);
  prof.residual = ode_residual(pot, prof);

  const double settle = 1e-3;
  if (distance(prof.sample(-opts.L + 1.0), left) > settle ||
      distance(prof.sample(opts.L - 1.0), right) > settle) {
    throw TailNotSettled("profile is not within 1e-3 of its wells one unit from the ends");
  }
  try {
    prof.decay_rate = tail_decay_rate(prof);
  } catch (const TailNotSettled&) {
    prof.decay_rate = std::numeric_limits<double>::quiet_NaN();
  }
  return prof;
}

}  // namespace

Vec2 HeteroclinicProfile::sample(double t) const {
  if (!(t > tau.front())) return values.front();
  if (!(t < tau.back())) return values.back();
  const double h = dtau();
  const std::size_t k =
      std::min(static_cast<std::size_t>((t - tau.front()) / h), values.size() - 2);
  const double s = (t - tau[k]) / h;
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  const double h0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
  const double h1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
  const double h2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
  const double h3 = 0.5 * s3 - s4 + 0.5 * s5;
  const double h4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
  const double h5 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
  const Vec2 d0 = node_slope(values, k, h), d1 = node_slope(values, k + 1, h);
  const Vec2 c0 = node_curvature(values, k, h), c1 = node_curvature(values, k + 1, h);
  return h0 * values[k] + (h1 * h) * d0 + (h2 * h * h) * c0 + (h3 * h * h) * c1 + (h4 * h) * d1 +
         h5 * values[k + 1];
}

HeteroclinicProfile HeteroclinicProfile::reflected() const {
  HeteroclinicProfile r = *this;
  std::swap(r.from, r.to);
  std::reverse(r.values.begin(), r.values.end());
  return r;
}

HeteroclinicProfile make_profile(const Potential& pot, int from, int to, double L,
                                 std::vector<Vec2> values) {
  const int n = static_cast<int>(values.size());
  if (n < 3 || n % 2 == 0) throw InvalidArgument("profile needs an odd number of nodes >= 3");
  if (!(L > 0.0)) throw InvalidArgument("profile half-length must be positive");
  HeteroclinicProfile p;
  p.from = from;
  p.to = to;
  p.L = L;
  p.tau = uniform_grid(L, n);
  p.values = std::move(values);
  fill_energy(pot, p);
  p.residual = ode_residual(pot, p);
  return p;
}

HeteroclinicProfile solve_connection(const Potential& pot, int i, int j, const UPath& init,
                                     const ConnectionOptions& opts) {
  check_arguments(pot, i, j, opts);
  if (i > j) {
    UPath reversed = init;
    std::reverse(reversed.nodes.begin(), reversed.nodes.end());
    return descend(pot, j, i, reversed, opts).reflected();
  }
  return descend(pot, i, j, init, opts);
}

HeteroclinicProfile solve_connection(const Potential& pot, int i, int j, const ConnectionOptions& opts) {
  check_arguments(pot, i, j, opts);
  const int lo = std::min(i, j), hi = std::max(i, j);
  const GeodesicResult geo = geodesic_distance(pot, pot.well(lo), pot.well(hi), opts.geodesic);
  const HeteroclinicProfile prof = descend(pot, lo, hi, geo.path, opts);
  return i < j ? prof : prof.reflected();
}

double ode_residual(const Potential& pot, const HeteroclinicProfile& p) {
  const double h = p.dtau();
  double r = 0.0;
  for (std::size_t k = 1; k + 1 < p.size(); ++k) {
    const Vec2 dd = (p.values[k + 1] - 2.0 * p.values[k] + p.values[k - 1]) / (h * h);
    r = std::max(r, norm(dd - 0.5 * pot.gradient(p.values[k])));
  }
  return r;
}

Equipartition equipartition_residual(const HeteroclinicProfile& p) {
  if (!(p.energy > 0.0)) return {0.0, true};
  return {std::abs(p.potential_part - p.gradient_part) / p.energy, false};
}

double tail_decay_rate(const HeteroclinicProfile& p) {
  const Vec2 c = p.values.back();
  if (distance(p.sample(p.L - 1.0), c) > 1e-3) {
    throw TailNotSettled("profile is farther than 1e-3 from its end well at L - 1");
  }
  // Outer quarter, stopping one unit short of the clamp where the tail bends to zero.
  const double floor = 1e-9 * (1.0 + norm(c));
  std::vector<double> ts, ls;
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    const double t = p.tau[k];
    if (t < 0.5 * p.L || t > p.L - 1.0) continue;
    const double e = distance(p.values[k], c);
    if (e < floor) continue;
    ts.push_back(t);
    ls.push_back(std::log(e));
  }
  if (ts.size() < 8) throw TailNotSettled("too few tail samples above the noise floor");
  const double n = static_cast<double>(ts.size());
  double mt = 0.0, ml = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    mt += ts[k];
    ml += ls[k];
  }
  mt /= n;
  ml /= n;
  double stt = 0.0, stl = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    stt += (ts[k] - mt) * (ts[k] - mt);
    stl += (ts[k] - mt) * (ls[k] - ml);
  }
  const double slope = stl / stt;
  double worst = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    worst = std::max(worst, std::abs(ls[k] - (ml + slope * (ts[k] - mt))));
  }
  if (worst > 0.5) throw TailNotSettled("tail is not log-linear (fit residual " + std::to_string(worst) + ")");
  if (!(slope < 0.0)) throw TailNotSettled("tail does not decay");
  return -slope;
}

}  // namespace tripoint

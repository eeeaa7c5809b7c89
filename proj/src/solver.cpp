#include "tripoint/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "tripoint/errors.hpp"

namespace tripoint {

namespace {

FlowEval run_evaluate(const FlowState& s, const Field2D& u, Field2D& r) {
  return s.parallel ? parallel::evaluate(u, r, *s.potential, s.eps) : serial::evaluate(u, r, *s.potential, s.eps);
}

void run_advance(const FlowState& s, const Field2D& u, const Field2D& r, double dt, Field2D& out) {
  if (s.parallel) {
    parallel::advance(u, r, dt, out);
  } else {
    serial::advance(u, r, dt, out);
  }
}

constexpr double kLambdaBucket = 0.05;

void refresh_lambda(FlowState& s, double sup) {
  if (sup <= s.lambda_radius && s.lambda > 0.0) return;
  const double radius = kLambdaBucket * std::ceil(std::max(sup, kLambdaBucket) / kLambdaBucket + 1e-12);
  s.lambda = std::max(s.lambda, 1.1 * hessian_bound(*s.potential, radius));
  s.lambda_radius = radius;
}

}  // namespace

Field2D make_grid(int n, double eps, const BoundaryMap& map) {
  if (n < 64) throw InvalidArgument("grid needs n >= 64 nodes per side");
  if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("eps must lie in (0, 1]");
  auto grid = std::make_shared<const DiskGrid>(DiskGrid::disk(n));
  if (eps < 3.0 * grid->h()) {
    throw ResolutionTooCoarse("eps " + std::to_string(eps) + " is below 3h = " + std::to_string(3.0 * grid->h()));
  }
  Field2D f(grid, eps);
  for (std::size_t c = 0; c < grid->size(); ++c) {
    if (grid->kind(c) != NodeKind::outside) f.set(c, eval_phi_eps(map, grid->position(c), eps));
  }
  return f;
}

Field2D make_strip(int n, double eps, const HeteroclinicProfile& profile) {
  if (n < 64) throw InvalidArgument("grid needs n >= 64 nodes per side");
  auto grid = std::make_shared<const DiskGrid>(DiskGrid::strip(n));
  if (eps < 3.0 * grid->h()) {
    throw ResolutionTooCoarse("eps " + std::to_string(eps) + " is below 3h = " + std::to_string(3.0 * grid->h()));
  }
  Field2D f(grid, eps);
  for (std::size_t c = 0; c < grid->size(); ++c) f.set(c, profile.sample(grid->position(c).x / eps));
  return f;
}

double hessian_bound(const Potential& pot, double radius) {
  double bound = 0.0;
  constexpr int radii = 24, angles = 64;
  for (int a = 0; a <= radii; ++a) {
    const double r = radius * a / radii;
    for (int b = 0; b < angles; ++b) {
      const Vec2 u = r * unit_vector(2.0 * std::numbers::pi * b / angles);
      bound = std::max(bound, pot.hessian(u).spectral_norm());
      if (a == 0) break;
    }
  }
  for (const Vec2& c : pot.wells()) {
    if (norm(c) <= radius) bound = std::max(bound, pot.hessian(c).spectral_norm());
  }
  return bound;
}

FlowState start_flow(const Potential& pot, Field2D init, double eps, bool parallel_kernels) {
  if (!init.grid) throw InvalidArgument("field has no grid");
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  if (!init.all_finite()) throw NonFinite("initial field");
  FlowState s;
  s.potential = &pot;
  s.eps = eps;
  s.parallel = parallel_kernels;
  s.apriori_bound = pot.max_well_norm() + 0.5;
  s.residual = Field2D(init.grid, eps);
  s.candidate = init;
  s.candidate_residual = Field2D(init.grid, eps);
  s.field = std::move(init);
  s.current = run_evaluate(s, s.field, s.residual);
  const double sup = s.field.sup_norm();
  s.max_field_sup = sup;
  refresh_lambda(s, sup);
  s.dt = stability_bound(s);
  s.J_history.push_back(s.J());
  s.residual_history.push_back(s.current.residual_sup);
  return s;
}

double stability_bound(const FlowState& s) {
  const double h = s.field.grid->h();
  return 1.8 / (8.0 / (h * h) + s.lambda / (2.0 * s.eps * s.eps));
}

bool step_flow(FlowState& s, StepPolicy policy) {
  s.dt = s.dt_scale * stability_bound(s);
  run_advance(s, s.field, s.residual, s.dt, s.candidate);
  const FlowEval ev = run_evaluate(s, s.candidate, s.candidate_residual);
  if (!std::isfinite(ev.energy) || !std::isfinite(ev.residual_sup)) throw NonFinite("flow step");
  if (ev.field_sup > 1.1 * s.apriori_bound) {
    throw Blowup("sup |u| = " + std::to_string(ev.field_sup) + " exceeds 1.1 (max |c_i| + 0.5) = " +
                 std::to_string(1.1 * s.apriori_bound));
  }
  const double J_old = s.J();
  const double J_new = ev.energy / (2.0 * s.eps);
  if (J_new > J_old + 1e-12 * std::abs(J_old)) {
    ++s.rejected;
    s.streak = 0;
    s.dt_scale *= 0.5;
    if (policy == StepPolicy::strict) throw EnergyIncreased(J_new - J_old);
    return false;
  }
  std::swap(s.field, s.candidate);
  std::swap(s.residual, s.candidate_residual);
  s.current = ev;
  s.t += s.dt;
  ++s.accepted;
  s.J_history.push_back(J_new);
  s.residual_history.push_back(ev.residual_sup);
  s.max_field_sup = std::max(s.max_field_sup, ev.field_sup);
  refresh_lambda(s, ev.field_sup);
  // Recover a halved step slowly, never beyond the stability bound.
  if (++s.streak >= 50 && s.dt_scale < 1.0) {
    s.dt_scale = std::min(1.0, 2.0 * s.dt_scale);
    s.streak = 0;
  }
  return true;
}

SolveReport solve_steady(FlowState& s, const SolverOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  SolveReport rep;
  const double target = opts.tol / (s.eps * s.eps);
  auto trace = [&] {
    rep.trace.push_back({s.accepted, s.t, s.current.residual_sup, s.J(), s.current.energy});
  };
  trace();
  long steps = 0;
  while (s.current.residual_sup > target) {
    if (steps >= opts.max_steps) {
      std::vector<double> residuals;
      for (const auto& row : rep.trace) residuals.push_back(row.residual);
      throw MaxStepsExceeded(steps, s.current.residual_sup, std::move(residuals));
    }
    ++steps;
    if (step_flow(s, StepPolicy::retry) && s.accepted % opts.trace_every == 0) trace();
  }
  if (rep.trace.back().step != s.accepted) trace();
  rep.iterations = steps;
  rep.accepted = s.accepted;
  rep.rejected = s.rejected;
  rep.residual = s.current.residual_sup;
  rep.I_eps = s.current.energy;
  rep.t = s.t;
  rep.sup_u = s.current.field_sup;
  rep.max_sup_u = s.max_field_sup;
  rep.apriori_bound = s.apriori_bound;
  rep.apriori_pass = s.max_field_sup <= s.apriori_bound;
  rep.J_monotone = true;
  for (std::size_t k = 1; k < s.J_history.size(); ++k) {
    if (s.J_history[k] > s.J_history[k - 1] + 1e-12 * std::abs(s.J_history[k - 1])) rep.J_monotone = false;
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

double energy_Ieps(const Field2D& field, const Potential& pot, double eps) {
  Field2D r(field.grid, eps);
  return serial::evaluate(field, r, pot, eps).energy;
}

double residual_sup(const Field2D& field, const Potential& pot, double eps) {
  Field2D r(field.grid, eps);
  return serial::evaluate(field, r, pot, eps).residual_sup;
}

AprioriCheck apriori_bound_check(const Field2D& field, const Potential& pot, double boundary_sup) {
  AprioriCheck out;
  const DiskGrid& g = *field.grid;
  double w_cap = 0.0;
  constexpr int radii = 48, angles = 128;
  for (int a = 1; a <= radii; ++a) {
    const double r = boundary_sup * a / radii;
    for (int b = 0; b < angles; ++b) w_cap = std::max(w_cap, pot.value(r * unit_vector(2.0 * std::numbers::pi * b / angles)));
  }
  w_cap = std::max(w_cap, pot.value({0.0, 0.0}));
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (g.kind(c) == NodeKind::boundary) w_cap = std::max(w_cap, pot.value(field.at(c)));
  }
  out.w_bound = w_cap + 1e-9 * (1.0 + w_cap);
  out.sup_bound = pot.max_well_norm() + 0.5;
  double worst_excess = -1.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (g.kind(c) == NodeKind::outside) continue;
    const Vec2 u = field.at(c);
    const double w = pot.value(u);
    out.worst_w = std::max(out.worst_w, w);
    out.sup_u = std::max(out.sup_u, norm(u));
    const double excess = std::max(w / out.w_bound, norm(u) / out.sup_bound);
    if (excess > worst_excess) {
      worst_excess = excess;
      out.witness = g.position(c);
    }
  }
  out.pass = out.worst_w <= out.w_bound && out.sup_u <= out.sup_bound;
  return out;
}

}  // namespace tripoint

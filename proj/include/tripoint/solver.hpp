#pragma once

#include <vector>

#include "tripoint/ansatz.hpp"
#include "tripoint/grid.hpp"
#include "tripoint/kernels.hpp"

namespace tripoint {

/// Disk grid with boundary band and interior set to phi_eps at the nodes.
/// Throws InvalidArgument for n < 64 and ResolutionTooCoarse if eps < 3h.
Field2D make_grid(int n, double eps, const BoundaryMap& map);

/// Periodic strip grid with every node set to profile(x / eps).
Field2D make_strip(int n, double eps, const HeteroclinicProfile& profile);

enum class StepPolicy {
  /// A rejected step halves dt and reports not-accepted.
  retry,
  /// A rejected step halves dt and throws EnergyIncreased.
  strict,
};

/// Explicit Euler integration of u_t = Delta_h u - grad W(u) / (2 eps^2),
/// which is the gradient flow of J = I_eps / (2 eps) scaled by 1 / h^2.
struct FlowState {
  const Potential* potential = nullptr;
  Field2D field;
  /// r = -Delta_h u + grad W(u) / (2 eps^2) for the current field.
  Field2D residual;
  double eps = 0.0;
  double t = 0.0;
  double dt = 0.0;
  /// Multiplier on the stability bound; halved on every rejection.
  double dt_scale = 1.0;
  /// Upper estimate of |W''| on |u| <= lambda_radius.
  double lambda = 0.0;
  double lambda_radius = 0.0;
  FlowEval current;
  /// Blowup fires when sup |u| exceeds 1.1 times this (max |c_i| + 0.5).
  double apriori_bound = 0.0;
  double max_field_sup = 0.0;
  long accepted = 0;
  long rejected = 0;
  int streak = 0;
  bool parallel = true;
  std::vector<double> J_history;
  std::vector<double> residual_history;
  Field2D candidate;
  Field2D candidate_residual;

  double J() const { return current.energy / (2.0 * eps); }
};

FlowState start_flow(const Potential& potential, Field2D init, double eps, bool parallel = true);

/// Stable step 1.8 / (8 / h^2 + lambda / (2 eps^2)) for the current lambda.
double stability_bound(const FlowState& state);

/// One explicit step with dt = dt_scale * stability_bound. Returns whether the
/// step was accepted (J did not rise by more than 1e-12 |J|). Throws Blowup,
/// NonFinite, or EnergyIncreased under StepPolicy::strict.
bool step_flow(FlowState& state, StepPolicy policy = StepPolicy::retry);

struct SolverOptions {
  /// Stop when sup |r| <= tol / eps^2.
  double tol = 1e-6;
  long max_steps = 4'000'000;
  /// Trace row every this many accepted steps (and at the end).
  int trace_every = 500;
};

struct TraceRow {
  long step = 0;
  double t = 0.0;
  double residual = 0.0;
  double J = 0.0;
  double I_eps = 0.0;
};

struct SolveReport {
  long iterations = 0;
  long accepted = 0;
  long rejected = 0;
  double residual = 0.0;
  double I_eps = 0.0;
  double t = 0.0;
  double sup_u = 0.0;
  double max_sup_u = 0.0;
  double apriori_bound = 0.0;
  bool apriori_pass = false;
  bool J_monotone = false;
  double wall_seconds = 0.0;
  std::vector<TraceRow> trace;
};

/// Steps until sup |r| <= tol / eps^2. Throws MaxStepsExceeded (with the
/// residual) when the budget runs out; Blowup propagates.
SolveReport solve_steady(FlowState& state, const SolverOptions& opts = {});

/// ε Σ_edges |Δu|^2 + (h^2 / ε) Σ_interior W(u).
double energy_Ieps(const Field2D& field, const Potential& potential, double eps);

/// sup over interior nodes of |-Delta_h u + grad W(u) / (2 eps^2)|.
double residual_sup(const Field2D& field, const Potential& potential, double eps);

/// max |W''| over |u| <= radius, sampled on a polar grid.
double hessian_bound(const Potential& potential, double radius);

struct AprioriCheck {
  bool pass = false;
  /// W(u) <= max(sup_{|u| <= boundary_sup} W, sup W(boundary values), 0) + tolerance.
  double w_bound = 0.0;
  double worst_w = 0.0;
  /// sup |u| <= max |c_i| + 0.5.
  double sup_bound = 0.0;
  double sup_u = 0.0;
  Vec2 witness;
};

AprioriCheck apriori_bound_check(const Field2D& field, const Potential& potential, double boundary_sup);

}  // namespace tripoint

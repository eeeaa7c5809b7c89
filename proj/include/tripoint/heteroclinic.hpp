#pragma once

#include <vector>

#include "tripoint/geodesics.hpp"
#include "tripoint/potential.hpp"

namespace tripoint {

/// One-dimensional connection zeta(tau) from well `from` (tau = -L) to well
/// `to` (tau = +L) on a uniform symmetric grid, endpoints clamped to the wells.
struct HeteroclinicProfile {
  int from = 0;
  int to = 1;
  double L = 0.0;
  std::vector<double> tau;
  std::vector<Vec2> values;
  /// Discrete sum of |zeta'|^2 dtau and W(zeta) dtau.
  double gradient_part = 0.0;
  double potential_part = 0.0;
  double energy = 0.0;
  double decay_rate = 0.0;
  double residual = 0.0;
  int iterations = 0;

  double dtau() const { return tau[1] - tau[0]; }
  std::size_t size() const { return tau.size(); }
  /// C^2 quintic Hermite interpolant; clamped to the end values outside [-L, L].
  Vec2 sample(double t) const;
  /// tau -> -tau, swapping the end wells.
  HeteroclinicProfile reflected() const;
};

/// Wraps sampled values in a profile and computes its energy parts. The grid
/// is uniform on [-L, L].
HeteroclinicProfile make_profile(const Potential& potential, int from, int to, double L,
                                 std::vector<Vec2> values);

struct ConnectionOptions {
  double L = 10.0;
  int n = 2001;
  double tol = 1e-10;
  int max_iters = 100000;
  GeodesicOptions geodesic;
};

/// Minimizes the clamped discrete action sum |dzeta/dtau|^2 + W(zeta) by
/// preconditioned Barzilai-Borwein descent, starting from the geodesic
/// path reparameterized by equipartition. The result satisfies
/// zeta'' = grad W(zeta) / 2 on interior nodes to tol (1 + max|grad W|).
HeteroclinicProfile solve_connection(const Potential& potential, int i, int j,
                                     const ConnectionOptions& opts = {});

/// Same, from a given initial path (e.g. a precomputed geodesic).
HeteroclinicProfile solve_connection(const Potential& potential, int i, int j, const UPath& init,
                                     const ConnectionOptions& opts = {});

/// Max over interior nodes of |zeta'' - grad W(zeta)/2| with the 3-point stencil.
double ode_residual(const Potential& potential, const HeteroclinicProfile& profile);

struct Equipartition {
  double residual = 0.0;
  bool degenerate = false;
};

/// |int W - int |zeta'|^2| / energy; degenerate (residual 0) for zero energy.
Equipartition equipartition_residual(const HeteroclinicProfile& profile);

/// Exponential rate at which zeta approaches its end well: minus the
/// least-squares slope of log|zeta - c_to| over the outer quarter of the
/// grid (values above the numerical noise floor, clamped node excluded).
/// Throws TailNotSettled if the log-linear fit is off by more than 0.5.
double tail_decay_rate(const HeteroclinicProfile& profile);

}  // namespace tripoint

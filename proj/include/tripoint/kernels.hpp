#pragma once

#include "tripoint/grid.hpp"
#include "tripoint/potential.hpp"

namespace tripoint {

/// One fused sweep over the interior nodes.
struct FlowEval {
  /// eps sum_edges |u_p - u_q|^2 + (h^2 / eps) sum_interior W(u), edges having
  /// at least one interior endpoint.
  double energy = 0.0;
  /// max |r| with r = -Delta_h u + grad W(u) / (2 eps^2).
  double residual_sup = 0.0;
  /// max |u| over interior nodes.
  double field_sup = 0.0;
};

// The serial and parallel kernels perform the same per-node arithmetic, so
// residual fields and candidates agree bit for bit; only the energy sum
// order differs.

namespace serial {

/// Writes r on interior nodes and returns the sweep summary.
FlowEval evaluate(const Field2D& u, Field2D& r, const Potential& potential, double eps);
/// out = u - dt r on interior nodes; other nodes of out are left untouched.
void advance(const Field2D& u, const Field2D& r, double dt, Field2D& out);

}  // namespace serial

namespace parallel {

FlowEval evaluate(const Field2D& u, Field2D& r, const Potential& potential, double eps);
void advance(const Field2D& u, const Field2D& r, double dt, Field2D& out);
/// Worker threads the parallel kernels use (1 without OpenMP).
int thread_count();

}  // namespace parallel

}  // namespace tripoint

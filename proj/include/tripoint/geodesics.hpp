#pragma once

#include <array>
#include <vector>

#include "tripoint/potential.hpp"

namespace tripoint {

/// Polyline in the order-parameter plane, traversed from front() to back().
struct UPath {
  std::vector<Vec2> nodes;

  std::size_t size() const { return nodes.size(); }
  double length() const;
  /// Throws InvalidArgument unless there are >= 2 finite nodes, consecutive
  /// ones distinct.
  void validate() const;
};

/// Composite-midpoint quadrature of sqrt(W)|gamma'| along the polyline.
double path_action(const Potential& potential, const UPath& path);

/// Equal-arclength resampling of a polyline to `nodes` points.
UPath resample_path(const UPath& path, int nodes);

struct GeodesicOptions {
  int nodes = 129;
  int max_iters = 20000;
  /// Relative action change per 10-iteration window that counts as converged.
  double tol = 1e-10;
};

struct GeodesicResult {
  UPath path;
  double action = 0.0;
  int iterations = 0;
  double final_step = 0.0;
};

/// Least action among descents started from the straight segment and two
/// bowed detours. Throws NoConvergence if no start meets the Cauchy
/// criterion within max_iters.
GeodesicResult geodesic_distance(const Potential& potential, Vec2 a, Vec2 b,
                                 const GeodesicOptions& opts = {});

/// Pairwise degenerate distances between the three wells (0-based indices).
struct DistanceTable {
  std::array<std::array<double, 3>, 3> gamma{};
  /// Optimizing paths for pairs (0,1), (0,2), (1,2), from lower to higher index.
  std::array<UPath, 3> paths;

  double operator()(int i, int j) const { return gamma[i][j]; }
  /// Entry opposite well k, i.e. the distance between the other two wells.
  double opposite(int k) const;
  static int pair_slot(int i, int j);
  /// Stored path of the pair, running from the lower-indexed well.
  const UPath& path(int i, int j) const { return paths[pair_slot(i, j)]; }
  /// Copy of the pair's path running from well i to well j.
  UPath oriented_path(int i, int j) const;
  /// Table built from the three opposite-side values (Gamma23, Gamma13, Gamma12).
  static DistanceTable from_opposite(double g23, double g13, double g12);
};

DistanceTable distance_table(const Potential& potential, const GeodesicOptions& opts = {});

/// g_i(p): degenerate distance from well i (0-based) to p.
double well_distance(const Potential& potential, int i, Vec2 p, const GeodesicOptions& opts = {});

struct ConnectionCheck {
  bool exists = false;
  /// Smallest Euclidean distance from the witness path to the third well.
  double clearance = 0.0;
  UPath witness;
};

/// True iff the optimizing path from well i to well j keeps at least
/// exclusion_radius away from the remaining well.
ConnectionCheck connection_exists(const Potential& potential, int i, int j,
                                  double exclusion_radius, const GeodesicOptions& opts = {});

}  // namespace tripoint

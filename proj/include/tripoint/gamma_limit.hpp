#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "tripoint/ansatz.hpp"
#include "tripoint/grid.hpp"
#include "tripoint/potential.hpp"

namespace tripoint {

/// Per-node phase labels 1..3 on the interior of a disk grid; 0 elsewhere.
struct SharpPartition {
  enum class Source { analytic, quantized, synthetic };

  std::shared_ptr<const DiskGrid> grid;
  std::vector<std::uint8_t> labels;
  Source source = Source::synthetic;

  std::array<std::size_t, 3> counts() const;
  int label(int i, int j) const { return labels[grid->index(i, j)]; }
};

/// Angle -> label of phi_0 on the unit circle: label k + 1 on (theta[k-1], theta[k]].
struct BoundaryTrace {
  std::array<double, 3> theta{};
  int label_at(double angle) const;
};

BoundaryTrace u0_trace(const JunctionAngles& angles);

/// Sector index (0-based) of an angle, sector k being (theta[k-1], theta[k]]
/// so that points on a ray belong to the sector clockwise from it.
int u0_sector(const JunctionAngles& angles, double angle);

/// Piecewise-constant u_0: well k on sector k, at every non-outside node.
Field2D u0_field(std::shared_ptr<const DiskGrid> grid, const JunctionAngles& angles,
                 const std::array<Vec2, 3>& wells);

/// Analytic sector labels of u_0.
SharpPartition u0_partition(std::shared_ptr<const DiskGrid> grid, const JunctionAngles& angles);

/// Euclidean-nearest-well labels; ties go to the lower index.
SharpPartition quantize_to_wells(const Field2D& field, const std::array<Vec2, 3>& wells);

/// Interface lengths of a partition inside the unit disk and its mismatch
/// with a boundary trace, pair order (1,2), (1,3), (2,3).
struct InterfaceParts {
  std::array<double, 3> interior{};
  std::array<double, 3> mismatch{};
  /// Contour length of each phase boundary inside the open disk.
  std::array<double, 3> perimeter{};
};

/// Measures InterfaceParts. Each label indicator is smoothed by a Gaussian of
/// width 3h (normalized within the disk), contoured at level 1/2 by marching
/// squares and clipped to the disk; the length shared by phases i and j is
/// (P_i + P_j - P_k) / 2. The boundary trace of the partition is the label
/// with the largest smoothed indicator at each of trace_samples circle points.
InterfaceParts measure_interfaces(const SharpPartition& partition, const BoundaryTrace& trace,
                                  int trace_samples = 8192);

struct I0Result {
  /// 2 sum_{i<j} Gamma_ij (interior_ij + mismatch_ij): every unordered pair is
  /// counted from both of its phases, matching I_eps -> 2 Gamma per unit length.
  double total = 0.0;
  /// sum_{i<j} Gamma_ij (interior_ij + mismatch_ij): each pair once.
  double partition_functional = 0.0;
  InterfaceParts parts;
};

/// Gamma weight of pair slot p (order (1,2), (1,3), (2,3)).
double pair_weight(const DistanceTable& table, int slot);

I0Result energy_I0(const SharpPartition& partition, const DistanceTable& table, const BoundaryTrace& trace);

/// h^2 sum over interior nodes of |a1 - b1| + |a2 - b2|; throws GridMismatch.
double l1_distance(const Field2D& a, const Field2D& b);

/// sup over interior nodes with |x| >= eps^alpha of |u - phi_eps|.
/// Throws EmptyAnnulus if eps^alpha >= 1.
double annulus_sup_error(const Field2D& u, const BoundaryMap& map, double eps, double alpha);

/// Same sup for the central-difference gradients of u and of phi_eps
/// sampled at the grid nodes (Frobenius norm of the 2x2 difference).
double annulus_gradient_error(const Field2D& u, const BoundaryMap& map, double eps, double alpha);

/// sup over |x| <= eps^alpha / 2 of |u_eps(x) - u_sigma(sigma x / eps)|, with
/// eps and sigma taken from the fields. Throws ScaleConditionViolated unless
/// sigma <= eps^(1 - alpha).
double two_scale_core_error(const Field2D& u_eps, const Field2D& u_sigma, double alpha);

/// Rings of 64 points at radii 2^k, k >= -2, up to 1 / eps_min, plus the origin.
std::vector<Vec2> default_probe_points(double eps_min);

/// v~_eps(x) = u_eps(eps x) for |x| <= 1 / eps, phi(x) beyond.
Vec2 blowdown_value(const Field2D& u, const BoundaryMap& map, Vec2 x);

/// Pairwise sup distances of v~ over the probe points; symmetric, zero diagonal.
std::vector<std::vector<double>> blowdown_cauchy(const std::vector<const Field2D*>& fields,
                                                 const BoundaryMap& map, const std::vector<Vec2>& probes);

/// phi_eps at every non-outside node of the grid.
Field2D phi_field(std::shared_ptr<const DiskGrid> grid, const BoundaryMap& map, double eps);

/// (I_eps(u) - I_eps(phi_eps)) / eps on the grid of u.
double relative_energy_G(const Field2D& u, const BoundaryMap& map, const Potential& potential, double eps);

struct JunctionMeasurement {
  /// Opening of the region of each label, measured counter-clockwise from
  /// the interface shared with the previous label to the one shared with the next.
  std::array<double, 3> alpha{};
  /// Direction of each interface ray, pair order (1,2), (1,3), (2,3).
  std::array<double, 3> ray{};
  /// RMS perpendicular distance of the fitted interface points.
  std::array<double, 3> fit_residual{};
  std::array<int, 3> points{};
  Vec2 junction;
  double alpha_sum = 0.0;
};

/// Detects the triple point (centroid of 3x3 node neighbourhoods holding all
/// three labels within |x| <= 0.3) and fits each interface ray through it by
/// total least squares on interface edge midpoints in 0.2 <= |x| <= 0.6.
/// Throws NoTriplePoint.
JunctionMeasurement measure_junction_angles(const SharpPartition& partition);

struct ProbeResult {
  bool all_pass = false;
  double base_value = 0.0;
  double tolerance = 0.0;
  int trials = 0;
  int worst_trial = -1;
  /// min over trials of F(perturbed) - F(base).
  double worst_delta = 0.0;
  double max_flipped_fraction = 0.0;
};

/// Relabels up to three random disk-shaped blobs (total area <= 2% of the
/// disk; half the trials centre blobs on the interfaces) and compares the
/// partition functional with the base. Tolerance 3 h sum Gamma.
ProbeResult partition_perturbation_probe(const SharpPartition& base, const DistanceTable& table,
                                         const BoundaryTrace& trace, int trials, std::uint64_t seed);

}  // namespace tripoint

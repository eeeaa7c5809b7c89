#pragma once

#include <array>

#include "tripoint/heteroclinic.hpp"
#include "tripoint/junction.hpp"

namespace tripoint {

/// Quintic smoothstep: 0 below 0, 1 above 1, C^2 in between.
double smoothstep5(double t);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

/// Six angular bumps summing to one. Junction bump k (index 2k+1 in the
/// 0-based layout below) equals 1 within delta/2 of theta[k] and vanishes
/// beyond delta; sector bump k fills the rest of the sector between
/// theta[k-1] and theta[k].
struct AngularPartition {
  double delta = 0.0;
  std::array<double, 3> theta{};

  double junction(int k, double angle) const;
  /// Sector k holds angles in (theta[k-1], theta[k]] modulo 2 pi, theta[-1] = theta0.
  int sector_of(double angle) const;
  double sector(int k, double angle) const;
  /// Bumps in order sector 0, junction 0, sector 1, junction 1, sector 2, junction 2.
  std::array<double, 6> bumps(double angle) const;
  /// Open support (lo, hi) of bump j in the same order, with lo < hi, angles unwrapped.
  std::pair<double, double> support(int j) const;
};

/// Throws DeltaTooLarge unless 0 < delta < min alpha / 2.
AngularPartition build_partition(const JunctionAngles& angles, double delta);

/// Default interface half-width: 0.15 min alpha.
double default_delta(const JunctionAngles& angles);

/// Far-field map phi. Sector k carries well k; across the half-line at
/// theta[k] phi follows the connection from well k to well (k+1) mod 3,
/// evaluated at the signed distance (positive towards sector k+1).
/// Inside |x| <= 1/2 phi vanishes, and the radial cutoff is complete at |x| = 1.
struct BoundaryMap {
  JunctionAngles angles;
  AngularPartition partition;
  std::array<Vec2, 3> wells{};
  /// profiles[k] joins wells k and (k+1) mod 3.
  std::array<HeteroclinicProfile, 3> profiles;

  /// Sector-3 wiring: which pair of wells the half-line at theta[k] separates.
  static std::pair<int, int> junction_wells(int k) { return {k, (k + 1) % 3}; }
  /// Largest |phi| any convex combination can reach.
  double bound() const;
};

BoundaryMap build_boundary_map(const JunctionAngles& angles, double delta,
                               std::array<HeteroclinicProfile, 3> profiles, std::array<Vec2, 3> wells);

/// phi(x); (1 - eta(|x|)) times the convex blend of wells and profiles.
Vec2 eval_phi(const BoundaryMap& map, Vec2 x);

/// phi(x / eps).
Vec2 eval_phi_eps(const BoundaryMap& map, Vec2 x, double eps);

/// Argument passed to profile k at x for scale eps: the signed distance to
/// the line through the half-line, divided by eps.
double profile_argument(const BoundaryMap& map, int k, Vec2 x, double eps);

/// Radial cutoff eta: 1 on |x| <= 1/2, 0 on |x| >= 1.
double inner_cutoff(double r);

/// |-Delta phi_eps + grad W(phi_eps) / (2 eps^2)| at x with the 5-point stencil of step h.
double phi_residual_at(const BoundaryMap& map, const Potential& potential, Vec2 x, double eps, double h);

struct PhiResidualRecord {
  double eps = 0.0;
  double alpha = 0.0;
  double h = 0.0;
  int samples = 0;
  double sup = 0.0;
  /// eps^2 sup: the residual in units of the rescaled equation.
  double scaled_sup = 0.0;
  Vec2 worst;
};

/// Sup of phi_residual_at over a polar sample of eps^alpha <= |x| <= 1.
/// h defaults to eps / 40; throws StepTooCoarse if h > eps / 10.
PhiResidualRecord phi_residual_profile(const BoundaryMap& map, const Potential& potential, double eps,
                                       double alpha, int samples, double h = 0.0);

}  // namespace tripoint

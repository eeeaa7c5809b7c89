#pragma once

#include <array>

#include "tripoint/geodesics.hpp"
#include "tripoint/vec.hpp"

namespace tripoint {

/// Sector openings alpha (sector k lies between directions theta[k-1] and
/// theta[k], with theta[-1] = theta0) and their running sums theta.
/// alpha sums to 2 pi and sin(alpha_k) is proportional to the distance
/// between the two wells other than k.
struct JunctionAngles {
  std::array<double, 3> alpha{};
  std::array<double, 3> theta{};
  double theta0 = 0.0;
  DistanceTable table;

  /// max_k |sin(alpha_k) / Gamma_opposite(k) - mean ratio|.
  double sine_law_residual() const;
};

/// alpha_k = pi - beta_k, beta_k the angles of the triangle with sides
/// (Gamma23, Gamma13, Gamma12). Throws NoJunction (side = offending well,
/// 0-based) unless each side is strictly shorter than the other two together.
JunctionAngles solve_angles(const DistanceTable& table);

/// theta_k = theta0 + alpha_1 + ... + alpha_k; the last equals theta0 + 2 pi.
std::array<double, 3> directions(const JunctionAngles& angles, double theta0);

/// The same angles with the direction origin moved to theta0.
JunctionAngles rotated(const JunctionAngles& angles, double theta0);

/// Euclidean distance from x to the closed half-line {r (cos t, sin t) : r >= 0}.
double halfline_distance(double direction, Vec2 x);

/// Distance to the line through the origin with that direction, positive on
/// the counter-clockwise side.
double signed_line_offset(double direction, Vec2 x);

}  // namespace tripoint

#include "tripoint/junction.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tripoint/errors.hpp"

namespace tripoint {

double JunctionAngles::sine_law_residual() const {
  std::array<double, 3> ratio{};
  double mean = 0.0;
  for (int k = 0; k < 3; ++k) {
    ratio[k] = std::sin(alpha[k]) / table.opposite(k);
    mean += ratio[k] / 3.0;
  }
  double worst = 0.0;
  for (double r : ratio) worst = std::max(worst, std::abs(r - mean));
  return worst;
}

JunctionAngles solve_angles(const DistanceTable& table) {
  const std::array<double, 3> side{table.opposite(0), table.opposite(1), table.opposite(2)};
  for (int k = 0; k < 3; ++k) {
    if (!(side[k] > 0.0) || !std::isfinite(side[k])) {
      throw NoJunction(k, "distance opposite well " + std::to_string(k + 1) + " is not positive");
    }
  }
  for (int k = 0; k < 3; ++k) {
    const double others = side[(k + 1) % 3] + side[(k + 2) % 3];
    if (!(side[k] < others)) {
      throw NoJunction(k, "distance opposite well " + std::to_string(k + 1) + " (" +
                              std::to_string(side[k]) + ") is not below the sum of the others (" +
                              std::to_string(others) + ")");
    }
  }
  JunctionAngles out;
  out.table = table;
  std::array<double, 3> beta{};
  for (int k = 0; k < 3; ++k) {
    const double a = side[k], b = side[(k + 1) % 3], c = side[(k + 2) % 3];
    const double cosine = std::clamp((b * b + c * c - a * a) / (2.0 * b * c), -1.0, 1.0);
    beta[k] = std::acos(cosine);
  }
  // Distribute the rounding defect of beta so that alpha sums to 2 pi.
  const double defect = (beta[0] + beta[1] + beta[2] - std::numbers::pi) / 3.0;
  for (int k = 0; k < 3; ++k) out.alpha[k] = std::numbers::pi - (beta[k] - defect);
  out.theta = directions(out, 0.0);
  return out;
}

std::array<double, 3> directions(const JunctionAngles& angles, double theta0) {
  std::array<double, 3> theta{};
  theta[0] = theta0 + angles.alpha[0];
  theta[1] = theta[0] + angles.alpha[1];
  theta[2] = theta0 + 2.0 * std::numbers::pi;
  return theta;
}

JunctionAngles rotated(const JunctionAngles& angles, double theta0) {
  JunctionAngles out = angles;
  out.theta0 = theta0;
  out.theta = directions(angles, theta0);
  return out;
}

double halfline_distance(double direction, Vec2 x) {
  const Vec2 e = unit_vector(direction);
  const double along = dot(x, e);
  if (along <= 0.0) return norm(x);
  return std::abs(cross(e, x));
}

double signed_line_offset(double direction, Vec2 x) { return cross(unit_vector(direction), x); }

}  // namespace tripoint

#pragma once

#include <array>
#include <vector>

#include "tripoint/vec.hpp"

namespace oracle {

using tripoint::Vec2;

/// prod |u - c_i|^2 as a plain scalar expression.
double product_w(Vec2 u, const std::array<Vec2, 3>& wells);

/// Gradient and Hessian of product_w from the product rule.
Vec2 product_gradient(Vec2 u, const std::array<Vec2, 3>& wells);
std::array<double, 3> product_hessian(Vec2 u, const std::array<Vec2, 3>& wells);

/// Solution of u'' = grad W(u) / (2 eps^2) on [-1, 1] with u(-1), u(1) given,
/// on a uniform grid of nodes points, by Newton iteration with a 2x2 block
/// tridiagonal solve.
struct BvpSolution {
  std::vector<double> x;
  std::vector<Vec2> u;
  double residual = 0.0;
  int iterations = 0;

  /// Linear interpolation in x.
  Vec2 at(double s) const;
};

BvpSolution strip_bvp(const std::array<Vec2, 3>& wells, double eps, std::vector<Vec2> guess);

/// Smallest relative spread (max - min) / max of sin(alpha_k) / gamma_k over
/// a grid of steps x steps sector pairs with every opening in (0, pi).
/// Near zero iff a sine-law junction exists.
double sine_law_scan(const std::array<double, 3>& gamma, int steps);

}  // namespace oracle

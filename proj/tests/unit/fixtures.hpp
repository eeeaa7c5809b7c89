#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "tripoint/solver.hpp"

namespace fixtures {

using namespace tripoint;

const Potential& equilateral();
const DistanceTable& equilateral_table();
const std::array<HeteroclinicProfile, 3>& equilateral_profiles();
const JunctionAngles& equilateral_angles();
const BoundaryMap& equilateral_map();
std::array<Vec2, 3> wells_of(const Potential& p);

/// Steady equilateral solution on an n x n disk grid, cached per (n, eps).
struct Solved {
  Field2D field;
  SolveReport report;
};
const Solved& solved(int n, double eps);

/// Seeded uniform point in the square [-r, r]^2.
inline Vec2 random_point(std::mt19937_64& rng, double r) {
  std::uniform_real_distribution<double> d(-r, r);
  const double x = d(rng);
  return {x, d(rng)};
}

}  // namespace fixtures

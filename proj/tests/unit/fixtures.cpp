#include "fixtures.hpp"

#include <map>
#include <utility>

namespace fixtures {

const Potential& equilateral() {
  static const Potential p = equilateral_product_potential();
  return p;
}

const DistanceTable& equilateral_table() {
  static const DistanceTable t = distance_table(equilateral());
  return t;
}

const std::array<HeteroclinicProfile, 3>& equilateral_profiles() {
  static const auto profiles = [] {
    std::array<HeteroclinicProfile, 3> out;
    for (int k = 0; k < 3; ++k) {
      const auto [a, b] = BoundaryMap::junction_wells(k);
      out[static_cast<std::size_t>(k)] = solve_connection(equilateral(), a, b);
    }
    return out;
  }();
  return profiles;
}

const JunctionAngles& equilateral_angles() {
  static const JunctionAngles a = solve_angles(equilateral_table());
  return a;
}

std::array<Vec2, 3> wells_of(const Potential& p) { return {p.well(0), p.well(1), p.well(2)}; }

const BoundaryMap& equilateral_map() {
  static const BoundaryMap m = build_boundary_map(equilateral_angles(), default_delta(equilateral_angles()),
                                                  equilateral_profiles(), wells_of(equilateral()));
  return m;
}

const Solved& solved(int n, double eps) {
  static std::map<std::pair<int, double>, Solved> cache;
  const auto key = std::make_pair(n, eps);
  auto it = cache.find(key);
  if (it == cache.end()) {
    FlowState s = start_flow(equilateral(), make_grid(n, eps, equilateral_map()), eps);
    SolveReport rep = solve_steady(s);
    it = cache.emplace(key, Solved{std::move(s.field), std::move(rep)}).first;
  }
  return it->second;
}

}  // namespace fixtures

#include <cmath>
#include <random>

#include <doctest.h>

#include "fixtures.hpp"
#include "oracles/oracles.hpp"
#include "tripoint/errors.hpp"

using namespace tripoint;

namespace {

Field2D constant_field(int n, Vec2 c) {
  auto grid = std::make_shared<const DiskGrid>(DiskGrid::disk(n));
  Field2D f(grid, 0.2);
  for (std::size_t k = 0; k < grid->size(); ++k) {
    if (grid->kind(k) != NodeKind::outside) f.set(k, c);
  }
  return f;
}

Field2D noisy(Field2D f, std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-amplitude, amplitude);
  for (std::size_t k = 0; k < f.grid->size(); ++k) {
    if (f.grid->kind(k) == NodeKind::interior) {
      const double dx = d(rng);
      f.set(k, f.at(k) + Vec2{dx, d(rng)});
    }
  }
  return f;
}

}  // namespace

TEST_SUITE("elliptic_solver") {
  TEST_CASE("make_grid holds phi_eps on every valued node") {
    const Field2D f = make_grid(96, 0.2, fixtures::equilateral_map());
    const DiskGrid& g = *f.grid;
    CHECK(g.interior_count() > 0);
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (g.kind(k) == NodeKind::outside) {
        CHECK(f.at(k) == Vec2{0.0, 0.0});
      } else {
        CHECK(f.at(k) == eval_phi_eps(fixtures::equilateral_map(), g.position(k), 0.2));
      }
    }
  }

  TEST_CASE("make_grid rejects coarse grids") {
    CHECK_THROWS_AS(make_grid(32, 0.2, fixtures::equilateral_map()), InvalidArgument);
    CHECK_THROWS_AS(make_grid(64, 0.05, fixtures::equilateral_map()), ResolutionTooCoarse);
    CHECK_THROWS_AS(make_grid(96, 0.0, fixtures::equilateral_map()), InvalidArgument);
  }

  TEST_CASE("disk grid interior nodes have valued neighbours") {
    const DiskGrid g = DiskGrid::disk(80);
    for (int j = 0; j < g.n(); ++j) {
      for (int i = 0; i < g.n(); ++i) {
        if (g.kind(i, j) != NodeKind::interior) continue;
        CHECK(norm(g.position(i, j)) < 1.0);
        CHECK(g.kind(i - 1, j) != NodeKind::outside);
        CHECK(g.kind(i + 1, j) != NodeKind::outside);
        CHECK(g.kind(i, j - 1) != NodeKind::outside);
        CHECK(g.kind(i, j + 1) != NodeKind::outside);
      }
    }
  }

  TEST_CASE("a well is a fixed point of the flow") {
    const Potential& pot = fixtures::equilateral();
    FlowState s = start_flow(pot, constant_field(80, pot.well(0)), 0.2);
    CHECK(s.current.residual_sup == 0.0);
    CHECK(s.J() == 0.0);
    const Field2D before = s.field;
    for (int k = 0; k < 5; ++k) CHECK(step_flow(s));
    CHECK(s.field.u1 == before.u1);
    CHECK(s.field.u2 == before.u2);
  }

  TEST_CASE("constant boundary data converge to the constant") {
    const Potential& pot = fixtures::equilateral();
    FlowState s = start_flow(pot, constant_field(96, pot.well(1)), 0.2);
    const SolveReport rep = solve_steady(s);
    CHECK(rep.accepted <= 2);
    CHECK(rep.residual < 1e-10);
    CHECK(rep.I_eps == 0.0);
  }

  TEST_CASE("a well with interior noise relaxes back to the well") {
    const Potential& pot = fixtures::equilateral();
    FlowState s = start_flow(pot, noisy(constant_field(64, pot.well(2)), 3, 0.05), 0.2);
    SolverOptions o;
    o.tol = 1e-10;
    const SolveReport rep = solve_steady(s, o);
    CHECK(rep.J_monotone);
    double worst = 0.0;
    for (std::size_t k = 0; k < s.field.grid->size(); ++k) {
      if (s.field.grid->kind(k) == NodeKind::interior) worst = std::max(worst, distance(s.field.at(k), pot.well(2)));
    }
    CHECK(worst < 1e-9);
  }

  TEST_CASE("strict policy raises on an energy increase and halves dt") {
    const Potential& pot = fixtures::equilateral();
    FlowState s = start_flow(pot, noisy(make_grid(96, 0.2, fixtures::equilateral_map()), 11, 0.01), 0.2);
    s.dt_scale = 3.0;
    const double J0 = s.J();
    const Field2D before = s.field;
    CHECK_THROWS_AS(step_flow(s, StepPolicy::strict), EnergyIncreased);
    CHECK(s.dt_scale == 1.5);
    CHECK(s.J() == J0);
    CHECK(s.field.u1 == before.u1);
    CHECK(s.rejected == 1);
    CHECK(s.accepted == 0);
  }

  TEST_CASE("retry policy rejects and recovers") {
    const Potential& pot = fixtures::equilateral();
    FlowState s = start_flow(pot, noisy(make_grid(96, 0.2, fixtures::equilateral_map()), 11, 0.01), 0.2);
    s.dt_scale = 3.0;
    CHECK_FALSE(step_flow(s));
    long tries = 0;
    while (!step_flow(s) && ++tries < 10) {
    }
    CHECK(s.accepted == 1);
    CHECK(s.dt_scale < 3.0);
    CHECK(s.rejected >= 1);
  }

  TEST_CASE("every accepted step leaves J nonincreasing") {
    const Potential& pot = fixtures::equilateral();
    FlowState s = start_flow(pot, noisy(make_grid(96, 0.2, fixtures::equilateral_map()), 5, 0.02), 0.2);
    for (int k = 0; k < 400; ++k) step_flow(s);
    for (std::size_t k = 1; k < s.J_history.size(); ++k) {
      CHECK(s.J_history[k] <= s.J_history[k - 1] + 1e-12 * std::abs(s.J_history[k - 1]));
    }
  }

  TEST_CASE("blowup guard fires above the a priori bound") {
    const Potential& pot = fixtures::equilateral();
    Field2D f = constant_field(64, pot.well(0));
    const DiskGrid& g = *f.grid;
    const std::size_t centre = g.index(g.n() / 2, g.n() / 2);
    f.set(centre, Vec2{3.0 * pot.max_well_norm(), 0.0});
    FlowState s = start_flow(pot, f, 0.2);
    CHECK_THROWS_AS(step_flow(s), Blowup);
  }

  TEST_CASE("a priori check flags a spike and passes steady states") {
    const Potential& pot = fixtures::equilateral();
    Field2D f = constant_field(64, pot.well(0));
    const DiskGrid& g = *f.grid;
    f.set(g.index(g.n() / 2, g.n() / 2), Vec2{0.0, 2.0 * pot.max_well_norm() + 1.0});
    const AprioriCheck bad = apriori_bound_check(f, pot, pot.max_well_norm());
    CHECK_FALSE(bad.pass);
    CHECK(bad.sup_u > bad.sup_bound);

    const auto& sol = fixtures::solved(128, 0.2);
    const AprioriCheck ok = apriori_bound_check(sol.field, pot, pot.max_well_norm());
    CHECK(ok.pass);
    CHECK(sol.report.apriori_pass);
    CHECK(sol.report.max_sup_u <= pot.max_well_norm() + 0.5);
  }

  TEST_CASE("steady state report is consistent with an independent recomputation") {
    const auto& sol = fixtures::solved(128, 0.2);
    const Potential& pot = fixtures::equilateral();
    CHECK(sol.report.J_monotone);
    CHECK(sol.report.residual <= 1e-6 / (0.2 * 0.2));
    CHECK(std::abs(residual_sup(sol.field, pot, 0.2) - sol.report.residual) <= 1e-12 * sol.report.residual);
    CHECK(std::abs(energy_Ieps(sol.field, pot, 0.2) - sol.report.I_eps) <= 1e-12 * sol.report.I_eps);
    CHECK(sol.report.I_eps < energy_Ieps(make_grid(128, 0.2, fixtures::equilateral_map()), pot, 0.2));
  }

  TEST_CASE("energy vanishes on a well and is positive otherwise") {
    const Potential& pot = fixtures::equilateral();
    CHECK(energy_Ieps(constant_field(64, pot.well(2)), pot, 0.3) == 0.0);
    CHECK(energy_Ieps(constant_field(64, Vec2{0.0, 0.0}), pot, 0.3) > 0.0);
  }

  TEST_CASE("strip steady state matches the one-dimensional boundary value problem") {
    const double eps = 0.15;
    const HeteroclinicProfile& prof = fixtures::equilateral_profiles()[0];
    FlowState s = start_flow(fixtures::equilateral(), make_strip(96, eps, prof), eps);
    SolverOptions o;
    o.tol = 1e-9;
    solve_steady(s, o);

    std::vector<Vec2> guess;
    const int fine = 2001;
    for (int k = 0; k < fine; ++k) guess.push_back(prof.sample((-1.0 + 2.0 * k / (fine - 1)) / eps));
    const oracle::BvpSolution bvp = oracle::strip_bvp(fixtures::wells_of(fixtures::equilateral()), eps, guess);
    REQUIRE(bvp.residual < 1e-6);

    const DiskGrid& g = *s.field.grid;
    double worst = 0.0, row_spread = 0.0;
    for (int j = 0; j < g.n(); ++j) {
      for (int i = 0; i < g.n(); ++i) {
        const Vec2 u = s.field.at(g.index(i, j));
        worst = std::max(worst, distance(u, bvp.at(g.coord(i))));
        row_spread = std::max(row_spread, distance(u, s.field.at(g.index(i, 0))));
      }
    }
    CHECK(worst < 1e-2);
    CHECK(row_spread < 1e-12);
  }

  TEST_CASE("serial and parallel kernels agree") {
    const Potential& pot = fixtures::equilateral();
    const Field2D u = noisy(make_grid(128, 0.2, fixtures::equilateral_map()), 21, 0.05);
    Field2D rs(u.grid, 0.2), rp(u.grid, 0.2), rp2(u.grid, 0.2);
    const FlowEval es = serial::evaluate(u, rs, pot, 0.2);
    const FlowEval ep = parallel::evaluate(u, rp, pot, 0.2);
    const FlowEval ep2 = parallel::evaluate(u, rp2, pot, 0.2);
    CHECK(rs.u1 == rp.u1);
    CHECK(rs.u2 == rp.u2);
    CHECK(es.residual_sup == ep.residual_sup);
    CHECK(es.field_sup == ep.field_sup);
    CHECK(ep.energy == ep2.energy);
    CHECK(std::abs(es.energy - ep.energy) <= 1e-12 * es.energy);

    Field2D as = u, ap = u;
    serial::advance(u, rs, 1e-5, as);
    parallel::advance(u, rp, 1e-5, ap);
    CHECK(as.u1 == ap.u1);
    CHECK(as.u2 == ap.u2);
  }

  TEST_CASE("serial and parallel flows take identical steps") {
    const Potential& pot = fixtures::equilateral();
    const Field2D init = make_grid(80, 0.25, fixtures::equilateral_map());
    FlowState a = start_flow(pot, init, 0.25, false);
    FlowState b = start_flow(pot, init, 0.25, true);
    for (int k = 0; k < 200; ++k) {
      step_flow(a);
      step_flow(b);
    }
    CHECK(a.accepted == b.accepted);
    CHECK(a.field.u1 == b.field.u1);
    CHECK(a.field.u2 == b.field.u2);
  }
}

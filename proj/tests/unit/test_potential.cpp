#include <cmath>
#include <random>

#include <doctest.h>

#include "../oracles/oracles.hpp"
#include "fixtures.hpp"
#include "tripoint/errors.hpp"

using namespace tripoint;

TEST_SUITE("potential") {
  TEST_CASE("equilateral wells are roots and the origin has W = 1") {
    const Potential& p = fixtures::equilateral();
    for (Vec2 c : p.wells()) CHECK(std::abs(p.value(c)) <= 1e-28);
    CHECK(p.value({0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("W at (2, 0) matches a direct product evaluation") {
    const Potential& p = fixtures::equilateral();
    const double expect = oracle::product_w({2.0, 0.0}, fixtures::wells_of(p));
    CHECK(p.value({2.0, 0.0}) == doctest::Approx(expect).epsilon(1e-14));
  }

  TEST_CASE("duplicate wells are rejected") {
    CHECK_THROWS_AS(build_product_potential({0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}), DuplicateWells);
  }

  TEST_CASE("evaluate at a well gives zero value and gradient") {
    const PotentialEval e = evaluate(fixtures::equilateral(), fixtures::equilateral().well(1));
    CHECK(std::abs(e.w) < 1e-30);
    CHECK(norm(e.grad) < 1e-14);
  }

  TEST_CASE("evaluate rejects non-finite input") {
    CHECK_THROWS_AS(evaluate(fixtures::equilateral(), {std::nan(""), 0.0}), NonFinite);
  }

  TEST_CASE("gradient agrees with central differences at seeded random points") {
    const Potential& p = fixtures::equilateral();
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 200; ++trial) {
      const Vec2 u = fixtures::random_point(rng, 2.0);
      constexpr double h = 1e-5;
      const Vec2 fd{(p.value({u.x + h, u.y}) - p.value({u.x - h, u.y})) / (2 * h),
                    (p.value({u.x, u.y + h}) - p.value({u.x, u.y - h})) / (2 * h)};
      const Vec2 g = p.gradient(u);
      CHECK(norm(g - fd) <= 1e-6 * std::max(1.0, norm(g)));
      CHECK(norm(g - oracle::product_gradient(u, fixtures::wells_of(p))) <= 1e-12 * std::max(1.0, norm(g)));
    }
  }

  TEST_CASE("Hessian at each well is 2 prod |c_i - c_j|^2 times the identity") {
    const Potential& p = fixtures::equilateral();
    for (int i = 0; i < 3; ++i) {
      double expect = 2.0;
      for (int j = 0; j < 3; ++j) {
        if (j != i) expect *= norm2(p.well(i) - p.well(j));
      }
      const Sym2 H = p.hessian(p.well(i));
      CHECK(H.min_eigenvalue() > 0.0);
      CHECK(H.min_eigenvalue() == doctest::Approx(expect).epsilon(1e-12));
      CHECK(H.max_eigenvalue() == doctest::Approx(expect).epsilon(1e-12));
    }
  }

  TEST_CASE("Hessian matches the product-rule oracle at seeded random points") {
    const Potential& p = fixtures::equilateral();
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
      const Vec2 u = fixtures::random_point(rng, 2.5);
      const auto h = oracle::product_hessian(u, fixtures::wells_of(p));
      const Sym2 H = p.hessian(u);
      const double scale = std::max(1.0, std::abs(h[0]) + std::abs(h[2]));
      CHECK(std::abs(H.xx - h[0]) <= 1e-12 * scale);
      CHECK(std::abs(H.xy - h[1]) <= 1e-12 * scale);
      CHECK(std::abs(H.yy - h[2]) <= 1e-12 * scale);
    }
  }

  TEST_CASE("equilateral family passes every hypothesis with growth exponent near 6") {
    const HypothesisReport r = validate_hypotheses(fixtures::equilateral(), 3.0, 3.0, 20000, 11);
    CHECK(r.all_pass());
    CHECK(r.minima.size() == 3);
    CHECK(r.fitted_p == doctest::Approx(6.0).epsilon(0.05));
  }

  TEST_CASE("hypothesis report round-trips through JSON") {
    const HypothesisReport r = check_hypotheses(fixtures::equilateral(), 3.0, 3.0, 2000, 5);
    const HypothesisReport back = nlohmann::json(r).get<HypothesisReport>();
    CHECK(nlohmann::json(back) == nlohmann::json(r));
  }

  TEST_CASE("a two-well potential violates the three-minima hypothesis") {
    try {
      validate_hypotheses(two_well_section(), 3.0, 3.0, 5000, 3);
      FAIL("expected HypothesisViolated");
    } catch (const HypothesisViolated& e) {
      CHECK(e.hypothesis() == "three minima");
    }
  }

  TEST_CASE("a quartic well violates the non-degeneracy hypothesis") {
    const std::array<Vec2, 3> c{Vec2{0.0, 1.0}, Vec2{-0.9, -0.5}, Vec2{0.9, -0.5}};
    auto value = [c](Vec2 u) { return norm2(u - c[0]) * norm2(u - c[0]) * norm2(u - c[1]) * norm2(u - c[2]); };
    const Potential p = Potential::custom("quartic_well", {c[0], c[1], c[2]}, value);
    try {
      validate_hypotheses(p, 3.0, 3.0, 5000, 3);
      FAIL("expected HypothesisViolated");
    } catch (const HypothesisViolated& e) {
      CHECK(e.hypothesis() == "non-degenerate");
      CHECK(distance(e.witness(), c[0]) < 1e-9);
    }
    const HypothesisReport r = check_hypotheses(p, 3.0, 3.0, 5000, 3);
    CHECK(std::abs(r.well_hessians.at(0).min_eigenvalue) < 1e-6);
  }
}

#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "fixtures.hpp"
#include "tripoint/errors.hpp"

using namespace tripoint;

namespace {

constexpr double pi = std::numbers::pi;

double mid_sector(const JunctionAngles& a, int k) {
  return a.theta[static_cast<std::size_t>(k)] - 0.5 * a.alpha[static_cast<std::size_t>(k)];
}

}  // namespace

TEST_SUITE("boundary_ansatz") {
  TEST_CASE("bumps sum to one around the circle") {
    const AngularPartition p = build_partition(fixtures::equilateral_angles(), 0.2);
    double worst = 0.0;
    for (int s = 0; s < 10000; ++s) {
      const auto b = p.bumps(-pi + 2.0 * pi * (s + 0.5) / 10000);
      double sum = 0.0;
      for (double x : b) {
        CHECK(x >= 0.0);
        sum += x;
      }
      worst = std::max(worst, std::abs(sum - 1.0));
    }
    CHECK(worst < 1e-10);
  }

  TEST_CASE("on a junction direction only that junction bump is active") {
    const AngularPartition p = build_partition(fixtures::equilateral_angles(), 0.2);
    for (int k = 0; k < 3; ++k) {
      const auto b = p.bumps(p.theta[static_cast<std::size_t>(k)]);
      for (int j = 0; j < 6; ++j) CHECK(b[static_cast<std::size_t>(j)] == (j == 2 * k + 1 ? 1.0 : 0.0));
    }
  }

  TEST_CASE("bumps vanish outside their supports") {
    const AngularPartition p = build_partition(fixtures::equilateral_angles(), 0.3);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int s = 0; s < 2000; ++s) {
      const double t = angle(rng);
      const auto b = p.bumps(t);
      for (int j = 0; j < 6; ++j) {
        const auto [lo, hi] = p.support(j);
        bool inside = false;
        for (int w = -2; w <= 2; ++w) inside = inside || (t + 2.0 * pi * w > lo && t + 2.0 * pi * w < hi);
        if (!inside) CHECK(b[static_cast<std::size_t>(j)] == 0.0);
      }
    }
  }

  TEST_CASE("delta must stay below half the smallest opening") {
    CHECK_THROWS_AS(build_partition(fixtures::equilateral_angles(), pi / 3.0), DeltaTooLarge);
    CHECK_THROWS_AS(build_partition(fixtures::equilateral_angles(), 0.0), DeltaTooLarge);
    CHECK_NOTHROW(build_partition(fixtures::equilateral_angles(), 1.0));
  }

  TEST_CASE("phi vanishes on the inner half disk") {
    const BoundaryMap& m = fixtures::equilateral_map();
    std::mt19937_64 rng(5);
    for (int s = 0; s < 200; ++s) {
      Vec2 x = fixtures::random_point(rng, 0.5);
      if (norm(x) > 0.5) x = 0.5 * x / norm(x);
      CHECK(eval_phi(m, x) == Vec2{0.0, 0.0});
    }
  }

  TEST_CASE("phi equals the well in mid-sector far field and the profile centre on a half-line") {
    const BoundaryMap& m = fixtures::equilateral_map();
    const JunctionAngles& a = fixtures::equilateral_angles();
    for (int k = 0; k < 3; ++k) {
      const Vec2 mid = 50.0 * unit_vector(mid_sector(a, k));
      CHECK(eval_phi(m, mid) == m.wells[static_cast<std::size_t>(k)]);
      const Vec2 on = 50.0 * unit_vector(a.theta[static_cast<std::size_t>(k)]);
      CHECK(distance(eval_phi(m, on), m.profiles[static_cast<std::size_t>(k)].sample(0.0)) < 1e-12);
    }
  }

  TEST_CASE("profile wiring joins the wells of adjacent sectors") {
    const BoundaryMap& m = fixtures::equilateral_map();
    const JunctionAngles& a = fixtures::equilateral_angles();
    for (int k = 0; k < 3; ++k) {
      const double t = a.theta[static_cast<std::size_t>(k)];
      // Just clockwise of the half-line lies sector k, just counter-clockwise sector k + 1.
      const Vec2 cw = 200.0 * unit_vector(t) - 30.0 * unit_vector(t + pi / 2.0);
      const Vec2 ccw = 200.0 * unit_vector(t) + 30.0 * unit_vector(t + pi / 2.0);
      CHECK(distance(eval_phi(m, cw), m.wells[static_cast<std::size_t>(k)]) < 1e-9);
      CHECK(distance(eval_phi(m, ccw), m.wells[static_cast<std::size_t>((k + 1) % 3)]) < 1e-9);
    }
  }

  TEST_CASE("eval_phi_eps scales its argument") {
    const BoundaryMap& m = fixtures::equilateral_map();
    const JunctionAngles& a = fixtures::equilateral_angles();
    std::mt19937_64 rng(17);
    for (int s = 0; s < 100; ++s) {
      const Vec2 x = fixtures::random_point(rng, 3.0);
      CHECK(eval_phi_eps(m, x, 1.0) == eval_phi(m, x));
    }
    for (double eps : {0.5, 0.2, 0.05}) {
      for (int k = 0; k < 3; ++k) CHECK(eval_phi_eps(m, unit_vector(mid_sector(a, k)), eps) == m.wells[static_cast<std::size_t>(k)]);
    }
  }

  TEST_CASE("profile argument is the signed distance over eps") {
    const BoundaryMap& m = fixtures::equilateral_map();
    std::mt19937_64 rng(23);
    for (int s = 0; s < 100; ++s) {
      const Vec2 x = fixtures::random_point(rng, 1.0);
      const double eps = 0.05 + 0.2 * (s % 5);
      for (int k = 0; k < 3; ++k) {
        const double expect = signed_line_offset(m.partition.theta[static_cast<std::size_t>(k)], x) / eps;
        CHECK(std::abs(profile_argument(m, k, x, eps) - expect) <= 1e-12 * std::max(1.0, std::abs(expect)));
      }
    }
  }

  TEST_CASE("inner cutoff") {
    CHECK(inner_cutoff(0.0) == 1.0);
    CHECK(inner_cutoff(0.5) == 1.0);
    CHECK(inner_cutoff(1.0) == 0.0);
    CHECK(inner_cutoff(0.75) == doctest::Approx(0.5));
  }

  TEST_CASE("residual vanishes on the sector plateaus") {
    const BoundaryMap& m = fixtures::equilateral_map();
    const JunctionAngles& a = fixtures::equilateral_angles();
    for (int k = 0; k < 3; ++k) {
      for (double r : {0.4, 0.7, 1.0}) {
        CHECK(phi_residual_at(m, fixtures::equilateral(), r * unit_vector(mid_sector(a, k)), 0.1, 0.0025) < 1e-8);
      }
    }
  }

  TEST_CASE("ansatz residual decreases as eps halves") {
    const BoundaryMap& m = fixtures::equilateral_map();
    const PhiResidualRecord coarse = phi_residual_profile(m, fixtures::equilateral(), 0.2, 0.5, 4096);
    const PhiResidualRecord fine = phi_residual_profile(m, fixtures::equilateral(), 0.1, 0.5, 4096);
    CHECK(fine.scaled_sup < coarse.scaled_sup);
    CHECK(fine.samples >= 4000);
  }

  TEST_CASE("residual step must resolve eps") {
    CHECK_THROWS_AS(phi_residual_profile(fixtures::equilateral_map(), fixtures::equilateral(), 0.1, 0.5, 256, 0.02),
                    StepTooCoarse);
  }
}

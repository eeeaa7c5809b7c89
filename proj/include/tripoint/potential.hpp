#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tripoint/vec.hpp"

namespace tripoint {

struct PotentialEval {
  double w = 0.0;
  Vec2 grad;
  Sym2 hess;
};

/// A multi-well energy density W on the plane.
///
/// The built-in family is the sextic product W(u) = prod_i |u - c_i|^2 with
/// closed-form derivatives. Other potentials are wrapped callables; missing
/// derivatives fall back to central differences with step 1e-5.
class Potential {
 public:
  using ValueFn = std::function<double(Vec2)>;
  using GradientFn = std::function<Vec2(Vec2)>;
  using HessianFn = std::function<Sym2(Vec2)>;

  static Potential product(Vec2 c1, Vec2 c2, Vec2 c3);
  static Potential custom(std::string family, std::vector<Vec2> wells, ValueFn value,
                          GradientFn gradient = {}, HessianFn hessian = {});

  double value(Vec2 u) const {
    if (is_product_) return product_value(u);
    return value_(u);
  }
  Vec2 gradient(Vec2 u) const {
    if (is_product_) return product_gradient(u);
    return gradient_ ? gradient_(u) : fd_gradient(u);
  }
  Sym2 hessian(Vec2 u) const;

  const std::string& family() const noexcept { return family_; }
  bool is_product() const noexcept { return is_product_; }
  std::span<const Vec2> wells() const noexcept { return wells_; }
  Vec2 well(int i) const { return wells_.at(static_cast<std::size_t>(i)); }
  int well_count() const noexcept { return static_cast<int>(wells_.size()); }
  double max_well_norm() const;

  /// Closed-form product-family evaluators (valid only when is_product()).
  double product_value(Vec2 u) const {
    const Vec2 a = u - wells_[0], b = u - wells_[1], c = u - wells_[2];
    return norm2(a) * norm2(b) * norm2(c);
  }
  Vec2 product_gradient(Vec2 u) const {
    const Vec2 a = u - wells_[0], b = u - wells_[1], c = u - wells_[2];
    const double na = norm2(a), nb = norm2(b), nc = norm2(c);
    return 2.0 * (nb * nc) * a + 2.0 * (na * nc) * b + 2.0 * (na * nb) * c;
  }

 private:
  Vec2 fd_gradient(Vec2 u) const;
  Sym2 fd_hessian(Vec2 u) const;

  std::string family_;
  std::vector<Vec2> wells_;
  bool is_product_ = false;
  ValueFn value_;
  GradientFn gradient_;
  HessianFn hessian_;
};

/// W(u) = prod_i |u - c_i|^2. Throws DuplicateWells if two wells coincide.
Potential build_product_potential(Vec2 c1, Vec2 c2, Vec2 c3);

/// Wells on the unit circle at angles 90, 210 and 330 degrees.
Potential equilateral_product_potential();

/// W(u) = (1 - u_x^2)^2 + u_y^2: the scalar two-well (1 - s^2)^2 on the
/// x-axis, wells at (-1, 0) and (1, 0).
Potential two_well_section();

/// Value, gradient and Hessian in one call; throws NonFinite.
PotentialEval evaluate(const Potential& potential, Vec2 u);

struct CriticalPoint {
  Vec2 location;
  double value = 0.0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

struct HypothesisReport {
  double K = 0.0;
  double m = 0.0;
  std::uint64_t seed = 0;
  int sample_budget = 0;
  bool defaults_used = false;

  // (a) only three local minima, each with W = 0
  std::vector<CriticalPoint> minima;
  int descent_starts = 0;
  bool three_minima = false;

  // (b) non-degenerate minima: Hessian eigenvalues at the declared wells
  std::vector<CriticalPoint> well_hessians;
  bool nondegenerate = false;

  // (c) W'' positive semidefinite on K < |u| <= 4K
  int psd_samples = 0;
  double psd_fraction = 0.0;
  double psd_min_eigenvalue = 0.0;
  Vec2 psd_worst_point;
  bool psd_outside_K = false;

  // (d) K1 |u|^p <= W(u) <= K2 |u|^p on m <= |u| <= 8m
  double fitted_p = 0.0;
  double K1 = 0.0;
  double K2 = 0.0;
  bool growth = false;

  bool all_pass() const { return three_minima && nondegenerate && psd_outside_K && growth; }
};

void to_json(nlohmann::json& j, const CriticalPoint& c);
void from_json(const nlohmann::json& j, CriticalPoint& c);
void to_json(nlohmann::json& j, const HypothesisReport& r);
void from_json(const nlohmann::json& j, HypothesisReport& r);

/// Gathers numeric evidence for the four structural hypotheses on W.
/// Never throws on a failed hypothesis; see validate_hypotheses.
HypothesisReport check_hypotheses(const Potential& potential, double K, double m,
                                  int sample_budget, std::uint64_t seed);

/// check_hypotheses, then throws HypothesisViolated naming the first failed
/// hypothesis ("three minima", "non-degenerate", "psd outside K", "growth").
HypothesisReport validate_hypotheses(const Potential& potential, double K, double m,
                                     int sample_budget, std::uint64_t seed);

}  // namespace tripoint

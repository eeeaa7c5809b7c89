#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tripoint/vec.hpp"

namespace tripoint {

/// Validation errors reject inputs; numerical errors come from a computation
/// that did not reach its contract. The CLI maps them to exit codes 2 and 3.
enum class ErrorCategory { validation, numerical };

class Error : public std::runtime_error {
 public:
  Error(std::string kind, ErrorCategory category, const std::string& detail)
      : std::runtime_error(kind + ": " + detail), kind_(std::move(kind)), category_(category) {}

  const std::string& kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_; }

 private:
  std::string kind_;
  ErrorCategory category_;
};

#define TRIPOINT_DEFINE_ERROR(Name, Category)                                   \
  class Name : public Error {                                                   \
   public:                                                                      \
    explicit Name(const std::string& detail) : Error(#Name, Category, detail) {} \
  };

TRIPOINT_DEFINE_ERROR(DuplicateWells, ErrorCategory::validation)
TRIPOINT_DEFINE_ERROR(InvalidArgument, ErrorCategory::validation)
TRIPOINT_DEFINE_ERROR(DeltaTooLarge, ErrorCategory::validation)
TRIPOINT_DEFINE_ERROR(StepTooCoarse, ErrorCategory::validation)
TRIPOINT_DEFINE_ERROR(ResolutionTooCoarse, ErrorCategory::validation)
TRIPOINT_DEFINE_ERROR(GridMismatch, ErrorCategory::validation)
TRIPOINT_DEFINE_ERROR(EmptyAnnulus, ErrorCategory::validation)
TRIPOINT_DEFINE_ERROR(ScaleConditionViolated, ErrorCategory::validation)
TRIPOINT_DEFINE_ERROR(ConfigError, ErrorCategory::validation)
TRIPOINT_DEFINE_ERROR(NonFinite, ErrorCategory::numerical)
TRIPOINT_DEFINE_ERROR(TailNotSettled, ErrorCategory::numerical)
TRIPOINT_DEFINE_ERROR(Blowup, ErrorCategory::numerical)
TRIPOINT_DEFINE_ERROR(NoTriplePoint, ErrorCategory::numerical)

#undef TRIPOINT_DEFINE_ERROR

class HypothesisViolated : public Error {
 public:
  HypothesisViolated(std::string hypothesis, Vec2 witness, const std::string& detail)
      : Error("HypothesisViolated", ErrorCategory::validation,
              "\"" + hypothesis + "\" at (" + std::to_string(witness.x) + ", " +
                  std::to_string(witness.y) + "): " + detail),
        hypothesis_(std::move(hypothesis)),
        witness_(witness) {}

  const std::string& hypothesis() const noexcept { return hypothesis_; }
  Vec2 witness() const noexcept { return witness_; }

 private:
  std::string hypothesis_;
  Vec2 witness_;
};

class NoConvergence : public Error {
 public:
  NoConvergence(int iterations, const std::string& detail)
      : Error("NoConvergence", ErrorCategory::numerical,
              detail + " after " + std::to_string(iterations) + " iterations"),
        iterations_(iterations) {}
  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

class ResidualTooLarge : public Error {
 public:
  explicit ResidualTooLarge(double residual)
      : Error("ResidualTooLarge", ErrorCategory::numerical,
              "ODE residual " + std::to_string(residual)),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Strict triangle inequality fails on the distance table; `side` is the
/// index of the entry that is not shorter than the sum of the other two.
class NoJunction : public Error {
 public:
  NoJunction(int side, const std::string& detail)
      : Error("NoJunction", ErrorCategory::validation, detail), side_(side) {}
  int side() const noexcept { return side_; }

 private:
  int side_;
};

class EnergyIncreased : public Error {
 public:
  explicit EnergyIncreased(double delta)
      : Error("EnergyIncreased", ErrorCategory::numerical,
              "Lyapunov functional rose by " + std::to_string(delta)),
        delta_(delta) {}
  double delta() const noexcept { return delta_; }

 private:
  double delta_;
};

class MaxStepsExceeded : public Error {
 public:
  MaxStepsExceeded(long steps, double residual, std::vector<double> trace = {})
      : Error("MaxStepsExceeded", ErrorCategory::numerical,
              std::to_string(steps) + " steps, residual " + std::to_string(residual)),
        steps_(steps),
        residual_(residual),
        trace_(std::move(trace)) {}
  long steps() const noexcept { return steps_; }
  double residual() const noexcept { return residual_; }
  /// Residual sup at the recorded trace points.
  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  long steps_;
  double residual_;
  std::vector<double> trace_;
};

}  // namespace tripoint

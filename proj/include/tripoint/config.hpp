#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tripoint/potential.hpp"

namespace tripoint {

/// Wells of equilateral_product_potential().
std::array<Vec2, 3> equilateral_wells();

/// Wells of the product potential W = prod |u - c_i|^2.
struct PotentialSpec {
  std::string family = "product";
  std::array<Vec2, 3> wells = equilateral_wells();
};

/// Everything a pipeline run depends on. Zero delta selects the default
/// interface half-width; zero K or m selects 3 max |c_i|.
struct RunConfig {
  PotentialSpec potential;
  /// Distances (Gamma23, Gamma13, Gamma12) injected in place of the
  /// geodesic stage.
  std::optional<std::array<double, 3>> synthetic_table;
  double delta = 0.0;
  double theta0 = 0.0;
  std::vector<double> eps_ladder{0.2, 0.1, 0.05};
  int n = 256;
  std::vector<double> alphas{0.5};
  double tol = 1e-6;
  long max_steps = 4'000'000;
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  double hypothesis_K = 0.0;
  double hypothesis_m = 0.0;
  int hypothesis_samples = 20000;
  double connection_L = 10.0;
  int connection_nodes = 2001;
  int probe_trials = 100;
  /// OpenMP flow kernels when true, serial reference kernels otherwise.
  bool parallel = true;
};

/// Throws ConfigError unless the ladder is strictly decreasing, every eps
/// is at least 3h, and the remaining fields are in range.
void validate_config(const RunConfig& config);

Potential build_potential(const PotentialSpec& spec);

void to_json(nlohmann::json& j, const RunConfig& c);
/// Missing keys keep their defaults; unknown keys and wrong types throw ConfigError.
void from_json(const nlohmann::json& j, RunConfig& c);

/// Parses and validates a JSON config file.
RunConfig load_config(const std::filesystem::path& path);

/// SHA-256 of the canonical JSON serialization.
std::string config_hash(const RunConfig& config);

}  // namespace tripoint

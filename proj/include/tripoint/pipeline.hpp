#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tripoint/config.hpp"
#include "tripoint/errors.hpp"
#include "tripoint/gamma_limit.hpp"
#include "tripoint/io.hpp"
#include "tripoint/solver.hpp"

namespace tripoint {

/// Stage names in dependency order.
inline constexpr std::array<const char*, 8> kStages{
    "validate_potential", "metric_geodesics", "heteroclinics", "junction_geometry",
    "boundary_ansatz",    "elliptic_solver",  "gamma_limit",   "report"};

/// Index of a stage name in kStages; throws InvalidArgument for unknown names.
int stage_index(const std::string& name);

/// An error raised inside a stage. kind() and category() are those of the
/// original error; the message is prefixed with the stage name.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.kind(), cause.category(), stage + ": " + cause.what()), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct StageRecord {
  std::string name;
  std::vector<ArtifactFile> files;
};

struct RunManifest {
  std::string config_hash;
  std::uint64_t seed = 0;
  ArtifactFile config_file;
  std::vector<StageRecord> stages;
  /// "complete", "stopped" (ran up to a requested stage) or "halted".
  std::string status;
  std::string failed_stage;
  std::string error;
  nlohmann::json versions;
};

void to_json(nlohmann::json& j, const StageRecord& s);
void to_json(nlohmann::json& j, const RunManifest& m);

struct SweepEntry {
  double eps = 0.0;
  Field2D field;
  SolveReport report;
};

/// In-memory results of a run, for callers that go on computing.
struct PipelineOutcome {
  RunManifest manifest;
  std::optional<Potential> potential;
  DistanceTable table;
  bool synthetic_table = false;
  std::array<HeteroclinicProfile, 3> profiles;
  JunctionAngles angles;
  BoundaryMap map;
  std::vector<SweepEntry> sweep;
  nlohmann::json diagnostics;
  nlohmann::json report;
};

/// Runs the stages in order up to and including last_stage, writing every
/// output below config.output_dir and manifest.json last. On the first error
/// the manifest is written with status "halted" and a StageError is thrown.
PipelineOutcome run_pipeline(const RunConfig& config, int last_stage = 7);

/// The full run; returns its manifest.
RunManifest cmd_pipeline(const RunConfig& config);

}  // namespace tripoint

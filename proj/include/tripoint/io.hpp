#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tripoint/gamma_limit.hpp"
#include "tripoint/heteroclinic.hpp"

namespace tripoint {

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/// Comma-delimited table with a header row; doubles use format_double.
std::string csv_text(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

/// JSON text with two-space indent and a trailing newline.
std::string json_text(const nlohmann::json& j);

/// Raw little-endian float64 dump: layer u1 then layer u2, each row-major
/// (index j n + i), outside nodes written as NaN.
std::string field_raw_bytes(const Field2D& field);

/// Sidecar describing a raw dump: grid shape, h, eps and layout.
nlohmann::json field_sidecar(const Field2D& field, const std::string& raw_name);

/// Reads a raw dump back onto a grid of the sidecar's shape; outside nodes hold zero.
Field2D read_field_raw(const std::filesystem::path& raw, const std::filesystem::path& sidecar);

/// Binary PGM (P5) of the labels, row j = n - 1 first so +y points up.
/// Label 0 is black and labels 1..3 map to grey levels 85, 170, 255.
std::string pgm_bytes(const SharpPartition& partition);

/// "tau,zeta1,zeta2" text, one node per line.
std::string profile_text(const HeteroclinicProfile& profile);

/// One file recorded in a manifest.
struct ArtifactFile {
  std::string path;
  std::string sha256;
  std::size_t bytes = 0;
};

/// Writes files below a root directory, creating parents, and records each one.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }
  ArtifactFile write(const std::string& relative, std::string_view bytes);
  const std::vector<ArtifactFile>& files() const noexcept { return files_; }
  /// Files written since the given count, for per-stage grouping.
  std::vector<ArtifactFile> files_since(std::size_t count) const;

 private:
  std::filesystem::path root_;
  std::vector<ArtifactFile> files_;
};

void to_json(nlohmann::json& j, const ArtifactFile& f);
void from_json(const nlohmann::json& j, ArtifactFile& f);

}  // namespace tripoint

#include "tripoint/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include <openssl/evp.h>

#include "tripoint/errors.hpp"

namespace tripoint {

namespace {

void append_le(std::string& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) {
    out.push_back(static_cast<char>(bits & 0xffu));
    bits >>= 8;
  }
}

double read_le(const char* p) {
  std::uint64_t bits = 0;
  for (int b = 7; b >= 0; --b) bits = (bits << 8) | static_cast<unsigned char>(p[b]);
  return std::bit_cast<double>(bits);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw InvalidArgument("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int k = 0; k < len; ++k) {
    out.push_back(hex[digest[k] >> 4]);
    out.push_back(hex[digest[k] & 0xf]);
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_text(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (k) out.push_back(',');
    out += header[k];
  }
  out.push_back('\n');
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw InvalidArgument("CSV row width does not match the header");
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out.push_back(',');
      out += format_double(row[k]);
    }
    out.push_back('\n');
  }
  return out;
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string field_raw_bytes(const Field2D& field) {
  const DiskGrid& g = *field.grid;
  std::string out;
  out.reserve(16 * g.size());
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto* layer : {&field.u1, &field.u2}) {
    for (std::size_t c = 0; c < g.size(); ++c) append_le(out, g.kind(c) == NodeKind::outside ? nan : (*layer)[c]);
  }
  return out;
}

nlohmann::json field_sidecar(const Field2D& field, const std::string& raw_name) {
  const DiskGrid& g = *field.grid;
  return {{"file", raw_name},
          {"dtype", "float64"},
          {"endian", "little"},
          {"grid", g.periodic_rows() ? "strip" : "disk"},
          {"n", g.n()},
          {"h", g.h()},
          {"eps", field.eps},
          {"layers", {"u1", "u2"}},
          {"order", "row-major, index j*n+i, node (i,j) at (-1+i*h, -1+j*h)"},
          {"outside", "NaN"}};
}

Field2D read_field_raw(const std::filesystem::path& raw, const std::filesystem::path& sidecar) {
  const auto meta = nlohmann::json::parse(read_file(sidecar));
  const int n = meta.at("n").get<int>();
  const std::string kind = meta.at("grid").get<std::string>();
  auto grid = std::make_shared<const DiskGrid>(kind == "strip" ? DiskGrid::strip(n) : DiskGrid::disk(n));
  const std::string bytes = read_file(raw);
  if (bytes.size() != 16 * grid->size()) throw InvalidArgument("raw field size does not match its sidecar");
  Field2D f(grid, meta.at("eps").get<double>());
  for (std::size_t c = 0; c < grid->size(); ++c) {
    if (grid->kind(c) == NodeKind::outside) continue;
    f.u1[c] = read_le(bytes.data() + 8 * c);
    f.u2[c] = read_le(bytes.data() + 8 * (grid->size() + c));
  }
  return f;
}

std::string pgm_bytes(const SharpPartition& p) {
  const DiskGrid& g = *p.grid;
  const int n = g.n();
  std::string out = "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
  for (int j = n - 1; j >= 0; --j) {
    for (int i = 0; i < n; ++i) out.push_back(static_cast<char>(85 * p.labels[g.index(i, j)]));
  }
  return out;
}

std::string profile_text(const HeteroclinicProfile& prof) {
  std::string out = "tau,zeta1,zeta2\n";
  for (std::size_t k = 0; k < prof.size(); ++k) {
    out += format_double(prof.tau[k]) + "," + format_double(prof.values[k].x) + "," +
           format_double(prof.values[k].y) + "\n";
  }
  return out;
}

ArtifactWriter::ArtifactWriter(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_);
}

ArtifactFile ArtifactWriter::write(const std::string& relative, std::string_view bytes) {
  const auto path = root_ / relative;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InvalidArgument("short write to " + path.string());
  ArtifactFile f{relative, sha256_hex(bytes), bytes.size()};
  files_.push_back(f);
  return f;
}

std::vector<ArtifactFile> ArtifactWriter::files_since(std::size_t count) const {
  return {files_.begin() + static_cast<std::ptrdiff_t>(std::min(count, files_.size())), files_.end()};
}

void to_json(nlohmann::json& j, const ArtifactFile& f) {
  j = {{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}};
}

void from_json(const nlohmann::json& j, ArtifactFile& f) {
  f.path = j.at("path").get<std::string>();
  f.sha256 = j.at("sha256").get<std::string>();
  f.bytes = j.at("bytes").get<std::size_t>();
}

}  // namespace tripoint

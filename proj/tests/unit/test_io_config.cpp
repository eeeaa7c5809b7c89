#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include <doctest.h>

#include "fixtures.hpp"
#include "tripoint/config.hpp"
#include "tripoint/errors.hpp"
#include "tripoint/io.hpp"

using namespace tripoint;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("tripoint_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

RunConfig parse(const std::string& text) { return nlohmann::json::parse(text, nullptr, true, true).get<RunConfig>(); }

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }

  TEST_CASE("doubles round-trip through text bit for bit") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> d(-1e3, 1e3);
    for (int k = 0; k < 1000; ++k) {
      const double v = d(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
      CHECK(std::stod(format_double(v)) == v);
      CHECK(nlohmann::json::parse(json_text(nlohmann::json(v))).get<double>() == v);
    }
    CHECK(format_double(0.5) == "0.5");
  }

  TEST_CASE("csv layout") {
    CHECK(csv_text({"a", "b"}, {{1.0, 0.25}, {-2.0, 3.0}}) == "a,b\n1,0.25\n-2,3\n");
  }

  TEST_CASE("raw field dump round-trips") {
    const auto& sol = fixtures::solved(128, 0.2);
    const std::string bytes = field_raw_bytes(sol.field);
    CHECK(bytes.size() == 2 * sizeof(double) * sol.field.grid->size());
    double first = 0.0;
    std::memcpy(&first, bytes.data(), sizeof(double));
    CHECK(std::isnan(first));
    const fs::path dir = scratch("raw");
    write_text(dir / "u.f64", bytes);
    write_text(dir / "u.json", json_text(field_sidecar(sol.field, "u.f64")));
    const Field2D back = read_field_raw(dir / "u.f64", dir / "u.json");
    CHECK(back.eps == sol.field.eps);
    CHECK(back.grid->n() == sol.field.grid->n());
    CHECK(back.u1 == sol.field.u1);
    CHECK(back.u2 == sol.field.u2);
    const nlohmann::json side = field_sidecar(sol.field, "u.f64");
    CHECK(side.at("dtype") == "float64");
    CHECK(side.at("n") == 128);
  }

  TEST_CASE("pgm header and grey levels") {
    const auto grid = std::make_shared<const DiskGrid>(DiskGrid::disk(64));
    const SharpPartition p = u0_partition(grid, fixtures::equilateral_angles());
    const std::string pgm = pgm_bytes(p);
    const std::string header = "P5\n64 64\n255\n";
    REQUIRE(pgm.size() == header.size() + 64 * 64);
    CHECK(pgm.substr(0, header.size()) == header);
    CHECK(static_cast<unsigned char>(pgm[header.size()]) == 0);
    // Row j = n - 1 comes first.
    const int i = 32, j = 40;
    CHECK(static_cast<unsigned char>(pgm[header.size() + static_cast<std::size_t>((63 - j) * 64 + i)]) == 85 * p.label(i, j));
  }

  TEST_CASE("profile text") {
    const std::string t = profile_text(fixtures::equilateral_profiles()[0]);
    CHECK(t.rfind("tau,zeta1,zeta2\n", 0) == 0);
    CHECK(static_cast<std::size_t>(std::count(t.begin(), t.end(), '\n')) ==
          fixtures::equilateral_profiles()[0].tau.size() + 1);
  }

  TEST_CASE("artifact writer records hashes") {
    const fs::path dir = scratch("writer");
    ArtifactWriter w(dir);
    const ArtifactFile f = w.write("a/b/c.txt", "abc");
    CHECK(f.path == "a/b/c.txt");
    CHECK(f.bytes == 3);
    CHECK(f.sha256 == sha256_hex("abc"));
    CHECK(fs::exists(dir / "a/b/c.txt"));
    w.write("d.txt", "x");
    CHECK(w.files().size() == 2);
    CHECK(w.files_since(1).size() == 1);
    CHECK(w.files_since(1)[0].path == "d.txt");
    const ArtifactFile back = nlohmann::json(f).get<ArtifactFile>();
    CHECK(back.path == f.path);
    CHECK(back.sha256 == f.sha256);
    CHECK(back.bytes == f.bytes);
  }
}

TEST_SUITE("config") {
  TEST_CASE("defaults") {
    const RunConfig c;
    CHECK(c.eps_ladder == std::vector<double>{0.2, 0.1, 0.05});
    CHECK(c.n == 256);
    CHECK_NOTHROW(validate_config(c));
    const auto w = equilateral_wells();
    for (int k = 0; k < 3; ++k) CHECK(w[static_cast<std::size_t>(k)] == fixtures::equilateral().well(k));
  }

  TEST_CASE("JSON round-trip is exact") {
    RunConfig c;
    c.eps_ladder = {0.3, 0.1 + 1e-17, 0.07};
    c.potential.wells[1] = {std::nextafter(0.3, 1.0), -1.0 / 3.0};
    c.synthetic_table = std::array<double, 3>{1.0, 1.1, 1.2};
    c.theta0 = 0.1;
    c.seed = 987654321;
    c.parallel = false;
    const RunConfig back = nlohmann::json::parse(json_text(nlohmann::json(c))).get<RunConfig>();
    CHECK(nlohmann::json(back) == nlohmann::json(c));
    CHECK(back.potential.wells[1] == c.potential.wells[1]);
    CHECK(config_hash(back) == config_hash(c));
    c.seed = 2;
    CHECK(config_hash(back) != config_hash(c));
  }

  TEST_CASE("partial files keep defaults and accept comments") {
    const RunConfig c = parse(R"({ // sweep only
      "sweep": {"eps": [0.3, 0.2]}, "seed": 9 })");
    CHECK(c.eps_ladder == std::vector<double>{0.3, 0.2});
    CHECK(c.n == 256);
    CHECK(c.seed == 9);
  }

  TEST_CASE("malformed configs are rejected") {
    CHECK_THROWS_AS(parse(R"({"sweeps": {}})"), ConfigError);
    CHECK_THROWS_AS(parse(R"({"sweep": {"eps": "small"}})"), ConfigError);
    CHECK_THROWS_AS(parse(R"({"potential": {"wells": [[0, 0], [1, 0]]}})"), ConfigError);
    CHECK_THROWS_AS(parse(R"({"synthetic_table": [1, 2]})"), ConfigError);
    CHECK_THROWS_AS(parse(R"({"solver": {"tolerance": 1}})"), ConfigError);

    auto invalid = [](auto edit) {
      RunConfig c;
      edit(c);
      CHECK_THROWS_AS(validate_config(c), ConfigError);
    };
    invalid([](RunConfig& c) { c.eps_ladder = {0.1, 0.2}; });
    invalid([](RunConfig& c) { c.eps_ladder = {}; });
    invalid([](RunConfig& c) { c.eps_ladder = {0.01}; });
    invalid([](RunConfig& c) { c.n = 32; });
    invalid([](RunConfig& c) { c.alphas = {1.0}; });
    invalid([](RunConfig& c) { c.connection_nodes = 2000; });
    invalid([](RunConfig& c) { c.synthetic_table = std::array<double, 3>{1.0, -1.0, 1.0}; });
    invalid([](RunConfig& c) { c.potential.family = "quartic"; });
    invalid([](RunConfig& c) { c.potential.wells[0] = {std::numeric_limits<double>::infinity(), 0.0}; });
  }

  TEST_CASE("load_config reads and validates files") {
    const fs::path dir = scratch("config");
    write_text(dir / "ok.json", R"({"sweep": {"eps": [0.4], "n": 64}})");
    CHECK(load_config(dir / "ok.json").n == 64);
    write_text(dir / "bad.json", R"({"sweep": {"eps": [0.05], "n": 64}})");
    CHECK_THROWS_AS(load_config(dir / "bad.json"), ConfigError);
    write_text(dir / "broken.json", "{");
    CHECK_THROWS_AS(load_config(dir / "broken.json"), ConfigError);
    CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
  }

  TEST_CASE("build_potential uses the configured wells") {
    PotentialSpec spec;
    spec.wells = {Vec2{0.0, 0.0}, Vec2{2.0, 0.0}, Vec2{0.5, 1.5}};
    const Potential p = build_potential(spec);
    for (int k = 0; k < 3; ++k) CHECK(p.well(k) == spec.wells[static_cast<std::size_t>(k)]);
  }
}

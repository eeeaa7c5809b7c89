#include "tripoint/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "tripoint/errors.hpp"
#include "tripoint/io.hpp"

namespace tripoint {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError("unknown key \"" + key + "\" in " + where);
  }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

json vec_json(Vec2 v) { return json::array({v.x, v.y}); }

Vec2 vec_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(where + " must be a pair of numbers");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::array<Vec2, 3> equilateral_wells() {
  const Potential p = equilateral_product_potential();
  return {p.well(0), p.well(1), p.well(2)};
}

void validate_config(const RunConfig& c) {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (c.potential.family != "product") fail("potential.family must be \"product\"");
  for (const Vec2& w : c.potential.wells) {
    if (!is_finite(w)) fail("potential.wells must be finite");
  }
  if (c.synthetic_table) {
    for (double g : *c.synthetic_table) {
      if (!std::isfinite(g) || g <= 0.0) fail("synthetic_table entries must be positive and finite");
    }
  }
  if (c.n < 64) fail("sweep.n must be at least 64");
  const double h = 2.0 / (c.n - 1);
  if (c.eps_ladder.empty()) fail("sweep.eps must not be empty");
  for (std::size_t k = 0; k < c.eps_ladder.size(); ++k) {
    const double e = c.eps_ladder[k];
    if (!(e > 0.0 && e <= 1.0)) fail("sweep.eps entries must lie in (0, 1]");
    if (e < 3.0 * h) {
      fail("eps " + format_double(e) + " is below 3h = " + format_double(3.0 * h) + " for n = " + std::to_string(c.n));
    }
    if (k > 0 && !(e < c.eps_ladder[k - 1])) fail("sweep.eps must be strictly decreasing");
  }
  for (double a : c.alphas) {
    if (!(a > 0.0 && a < 1.0)) fail("sweep.alphas entries must lie in (0, 1)");
  }
  if (!(c.delta >= 0.0) || !std::isfinite(c.delta)) fail("geometry.delta must be >= 0 (0 selects the default)");
  if (!std::isfinite(c.theta0)) fail("geometry.theta0 must be finite");
  if (!(c.tol > 0.0)) fail("solver.tol must be positive");
  if (c.max_steps <= 0) fail("solver.max_steps must be positive");
  if (!(c.hypothesis_K >= 0.0) || !(c.hypothesis_m >= 0.0)) fail("hypotheses.K and hypotheses.m must be >= 0");
  if (c.hypothesis_samples < 100) fail("hypotheses.samples must be at least 100");
  if (!(c.connection_L >= 8.0)) fail("connections.L must be at least 8");
  if (c.connection_nodes < 401 || c.connection_nodes % 2 == 0) fail("connections.nodes must be odd and >= 401");
  if (c.probe_trials < 0) fail("probe.trials must be >= 0");
  if (c.output_dir.empty()) fail("output_dir must not be empty");
}

Potential build_potential(const PotentialSpec& spec) {
  if (spec.family != "product") throw ConfigError("unknown potential family \"" + spec.family + "\"");
  return build_product_potential(spec.wells[0], spec.wells[1], spec.wells[2]);
}

void to_json(json& j, const RunConfig& c) {
  json wells = json::array();
  for (const Vec2& w : c.potential.wells) wells.push_back(vec_json(w));
  j = json{{"potential", {{"family", c.potential.family}, {"wells", wells}}},
           {"synthetic_table", c.synthetic_table ? json(*c.synthetic_table) : json(nullptr)},
           {"geometry", {{"delta", c.delta}, {"theta0", c.theta0}}},
           {"sweep", {{"eps", c.eps_ladder}, {"n", c.n}, {"alphas", c.alphas}}},
           {"solver", {{"tol", c.tol}, {"max_steps", c.max_steps}, {"parallel", c.parallel}}},
           {"hypotheses", {{"K", c.hypothesis_K}, {"m", c.hypothesis_m}, {"samples", c.hypothesis_samples}}},
           {"connections", {{"L", c.connection_L}, {"nodes", c.connection_nodes}}},
           {"probe", {{"trials", c.probe_trials}}},
           {"seed", c.seed},
           {"output_dir", c.output_dir}};
}

void from_json(const json& j, RunConfig& c) {
  require_keys(j, "config",
               {"potential", "synthetic_table", "geometry", "sweep", "solver", "hypotheses", "connections", "probe",
                "seed", "output_dir"});
  if (j.contains("potential")) {
    const json& p = j.at("potential");
    require_keys(p, "potential", {"family", "wells"});
    read(p, "family", c.potential.family, "potential");
    if (p.contains("wells")) {
      const json& w = p.at("wells");
      if (!w.is_array() || w.size() != 3) throw ConfigError("potential.wells must list three wells");
      for (std::size_t k = 0; k < 3; ++k) c.potential.wells[k] = vec_from(w[k], "potential.wells[" + std::to_string(k) + "]");
    }
  }
  if (j.contains("synthetic_table")) {
    const json& t = j.at("synthetic_table");
    if (t.is_null()) {
      c.synthetic_table.reset();
    } else {
      if (!t.is_array() || t.size() != 3) throw ConfigError("synthetic_table must list (Gamma23, Gamma13, Gamma12)");
      std::array<double, 3> g{};
      for (std::size_t k = 0; k < 3; ++k) {
        if (!t[k].is_number()) throw ConfigError("synthetic_table entries must be numbers");
        g[k] = t[k].get<double>();
      }
      c.synthetic_table = g;
    }
  }
  if (j.contains("geometry")) {
    const json& g = j.at("geometry");
    require_keys(g, "geometry", {"delta", "theta0"});
    read(g, "delta", c.delta, "geometry");
    read(g, "theta0", c.theta0, "geometry");
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    require_keys(s, "sweep", {"eps", "n", "alphas"});
    read(s, "eps", c.eps_ladder, "sweep");
    read(s, "n", c.n, "sweep");
    read(s, "alphas", c.alphas, "sweep");
  }
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    require_keys(s, "solver", {"tol", "max_steps", "parallel"});
    read(s, "tol", c.tol, "solver");
    read(s, "max_steps", c.max_steps, "solver");
    read(s, "parallel", c.parallel, "solver");
  }
  if (j.contains("hypotheses")) {
    const json& h = j.at("hypotheses");
    require_keys(h, "hypotheses", {"K", "m", "samples"});
    read(h, "K", c.hypothesis_K, "hypotheses");
    read(h, "m", c.hypothesis_m, "hypotheses");
    read(h, "samples", c.hypothesis_samples, "hypotheses");
  }
  if (j.contains("connections")) {
    const json& s = j.at("connections");
    require_keys(s, "connections", {"L", "nodes"});
    read(s, "L", c.connection_L, "connections");
    read(s, "nodes", c.connection_nodes, "connections");
  }
  if (j.contains("probe")) {
    const json& s = j.at("probe");
    require_keys(s, "probe", {"trials"});
    read(s, "trials", c.probe_trials, "probe");
  }
  read(j, "seed", c.seed, "config");
  read(j, "output_dir", c.output_dir, "config");
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  RunConfig c = j.get<RunConfig>();
  validate_config(c);
  return c;
}

std::string config_hash(const RunConfig& c) { return sha256_hex(json(c).dump()); }

}  // namespace tripoint

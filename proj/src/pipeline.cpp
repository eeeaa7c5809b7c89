#include "tripoint/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>

#include <openssl/opensslv.h>

#include "tripoint/junction.hpp"

namespace tripoint {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";
constexpr double kDeg = 180.0 / std::numbers::pi;

json vec_json(Vec2 v) { return json::array({v.x, v.y}); }

json table_json(const DistanceTable& t) {
  return {{"gamma", t.gamma},
          {"gamma23", t.opposite(0)},
          {"gamma13", t.opposite(1)},
          {"gamma12", t.opposite(2)}};
}

json angles_json(const JunctionAngles& a) {
  json deg = json::array();
  for (double x : a.alpha) deg.push_back(x * kDeg);
  return {{"alpha", a.alpha},
          {"alpha_degrees", deg},
          {"theta", a.theta},
          {"theta0", a.theta0},
          {"alpha_sum", a.alpha[0] + a.alpha[1] + a.alpha[2]},
          {"sine_law_residual", a.sine_law_residual()}};
}

json profile_json(const HeteroclinicProfile& p) {
  const Equipartition eq = equipartition_residual(p);
  return {{"from", p.from + 1},
          {"to", p.to + 1},
          {"L", p.L},
          {"nodes", p.size()},
          {"energy", p.energy},
          {"gradient_part", p.gradient_part},
          {"potential_part", p.potential_part},
          {"equipartition_residual", eq.residual},
          {"decay_rate", std::isfinite(p.decay_rate) ? json(p.decay_rate) : json(nullptr)},
          {"ode_residual", p.residual},
          {"iterations", p.iterations}};
}

json solve_json(const SolveReport& r) {
  return {{"iterations", r.iterations},
          {"accepted", r.accepted},
          {"rejected", r.rejected},
          {"residual", r.residual},
          {"I_eps", r.I_eps},
          {"t", r.t},
          {"sup_u", r.sup_u},
          {"max_sup_u", r.max_sup_u},
          {"apriori_bound", r.apriori_bound},
          {"apriori_pass", r.apriori_pass},
          {"J_monotone", r.J_monotone}};
}

std::string eps_tag(double eps) { return "eps_" + format_double(eps); }

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (!(v[k] < v[k - 1])) return false;
  }
  return true;
}

bool nonincreasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (!(v[k] <= v[k - 1])) return false;
  }
  return true;
}

void log_line(const std::string& stage, const std::string& msg) { std::clog << "[" << stage << "] " << msg << "\n"; }

class Runner {
 public:
  Runner(const RunConfig& c, int last) : cfg_(c), last_(last), writer_(c.output_dir) {}

  PipelineOutcome run() {
    out_.manifest.config_hash = config_hash(cfg_);
    out_.manifest.seed = cfg_.seed;
    out_.manifest.versions = {{"tripoint", kVersion},
                              {"compiler", __VERSION__},
                              {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                                    std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                                    std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                              {"openssl", OPENSSL_VERSION_TEXT}};
    out_.manifest.config_file = writer_.write("config.json", json_text(json(cfg_)));
    stage(0, [&] { validate_potential(); });
    stage(1, [&] { geodesics(); });
    stage(2, [&] { connections(); });
    stage(3, [&] { junction_geometry(); });
    stage(4, [&] { boundary_ansatz(); });
    stage(5, [&] { elliptic_solver(); });
    stage(6, [&] { gamma_limit(); });
    stage(7, [&] { report(); });
    out_.manifest.status = last_ >= 7 ? "complete" : "stopped";
    write_manifest();
    return std::move(out_);
  }

 private:
  template <class F>
  void stage(int idx, F&& body) {
    if (idx > last_) return;
    const std::string name = kStages[static_cast<std::size_t>(idx)];
    const std::size_t before = writer_.files().size();
    log_line(name, "start");
    try {
      body();
    } catch (const Error& e) {
      halt(name, before, e);
    } catch (const std::exception& e) {
      halt(name, before, Error("InternalError", ErrorCategory::numerical, e.what()));
    }
    out_.manifest.stages.push_back({name, writer_.files_since(before)});
  }

  [[noreturn]] void halt(const std::string& name, std::size_t before, const Error& e) {
    out_.manifest.stages.push_back({name, writer_.files_since(before)});
    out_.manifest.status = "halted";
    out_.manifest.failed_stage = name;
    out_.manifest.error = e.what();
    write_manifest();
    log_line(name, std::string("halted: ") + e.what());
    throw StageError(name, e);
  }

  void write_manifest() {
    writer_.write("manifest.json", json_text(json(out_.manifest)));
  }

  const Potential& pot() const { return *out_.potential; }

  std::array<Vec2, 3> wells() const { return {pot().well(0), pot().well(1), pot().well(2)}; }

  void validate_potential() {
    out_.potential = build_potential(cfg_.potential);
    const double scale = 3.0 * pot().max_well_norm();
    const double K = cfg_.hypothesis_K > 0.0 ? cfg_.hypothesis_K : scale;
    const double m = cfg_.hypothesis_m > 0.0 ? cfg_.hypothesis_m : scale;
    HypothesisReport rep = check_hypotheses(pot(), K, m, cfg_.hypothesis_samples, cfg_.seed);
    rep.defaults_used = cfg_.hypothesis_K == 0.0 || cfg_.hypothesis_m == 0.0;
    writer_.write("validate_potential/hypotheses.json", json_text(json(rep)));
    // Re-raise the first failed hypothesis after its evidence is on disk.
    if (!rep.all_pass()) validate_hypotheses(pot(), K, m, cfg_.hypothesis_samples, cfg_.seed);
  }

  void geodesics() {
    json doc;
    if (cfg_.synthetic_table) {
      const auto& g = *cfg_.synthetic_table;
      out_.table = DistanceTable::from_opposite(g[0], g[1], g[2]);
      out_.synthetic_table = true;
      doc = table_json(out_.table);
      doc["source"] = "synthetic";
    } else {
      out_.table = distance_table(pot());
      doc = table_json(out_.table);
      doc["source"] = "descent";
      std::vector<std::vector<double>> rows;
      for (int slot = 0; slot < 3; ++slot) {
        const UPath& p = out_.table.paths[static_cast<std::size_t>(slot)];
        for (std::size_t k = 0; k < p.size(); ++k) {
          rows.push_back({static_cast<double>(slot), static_cast<double>(k), p.nodes[k].x, p.nodes[k].y});
        }
      }
      writer_.write("metric_geodesics/paths.csv", csv_text({"pair_slot", "node", "u1", "u2"}, rows));
    }
    writer_.write("metric_geodesics/distance_table.json", json_text(doc));
    log_line("metric_geodesics", "Gamma23 " + format_double(out_.table.opposite(0)) + ", Gamma13 " +
                                     format_double(out_.table.opposite(1)) + ", Gamma12 " +
                                     format_double(out_.table.opposite(2)));
  }

  void connections() {
    ConnectionOptions opts;
    opts.L = cfg_.connection_L;
    opts.n = cfg_.connection_nodes;
    json doc = json::array();
    for (int k = 0; k < 3; ++k) {
      const auto [a, b] = BoundaryMap::junction_wells(k);
      HeteroclinicProfile p = out_.synthetic_table ? solve_connection(pot(), a, b, opts)
                                                   : solve_connection(pot(), a, b, out_.table.oriented_path(a, b), opts);
      const std::string name = "zeta_" + std::to_string(a + 1) + std::to_string(b + 1);
      writer_.write("heteroclinics/" + name + ".csv", profile_text(p));
      json j = profile_json(p);
      j["junction"] = k;
      j["file"] = name + ".csv";
      doc.push_back(j);
      out_.profiles[static_cast<std::size_t>(k)] = std::move(p);
    }
    writer_.write("heteroclinics/connections.json", json_text(doc));
  }

  void junction_geometry() {
    out_.angles = rotated(solve_angles(out_.table), cfg_.theta0);
    json doc = angles_json(out_.angles);
    doc["table"] = table_json(out_.table);
    writer_.write("junction_geometry/angles.json", json_text(doc));
  }

  void boundary_ansatz() {
    const double delta = cfg_.delta > 0.0 ? cfg_.delta : default_delta(out_.angles);
    out_.map = build_boundary_map(out_.angles, delta, out_.profiles, wells());
    json rows = json::array();
    for (double eps : cfg_.eps_ladder) {
      for (double alpha : cfg_.alphas) {
        const PhiResidualRecord r = phi_residual_profile(out_.map, pot(), eps, alpha, 4096);
        rows.push_back({{"eps", eps},
                        {"alpha", alpha},
                        {"h", r.h},
                        {"samples", r.samples},
                        {"sup", r.sup},
                        {"scaled_sup", r.scaled_sup},
                        {"worst", vec_json(r.worst)}});
      }
    }
    json wiring = json::array();
    for (int k = 0; k < 3; ++k) {
      const auto [a, b] = BoundaryMap::junction_wells(k);
      wiring.push_back({{"junction", k}, {"theta", out_.angles.theta[static_cast<std::size_t>(k)]},
                        {"wells", {a + 1, b + 1}}});
    }
    writer_.write("boundary_ansatz/ansatz.json",
                  json_text({{"delta", delta}, {"wiring", wiring}, {"residual", rows}}));
  }

  void elliptic_solver() {
    SolverOptions opts;
    opts.tol = cfg_.tol;
    opts.max_steps = cfg_.max_steps;
    for (double eps : cfg_.eps_ladder) {
      const std::string tag = eps_tag(eps);
      FlowState s = start_flow(pot(), make_grid(cfg_.n, eps, out_.map), eps, cfg_.parallel);
      SolveReport rep = solve_steady(s, opts);
      log_line("elliptic_solver", tag + ": " + std::to_string(rep.accepted) + " steps, I_eps " +
                                      format_double(rep.I_eps) + ", " + format_double(rep.wall_seconds) + " s");
      std::vector<std::vector<double>> rows;
      for (const TraceRow& t : rep.trace) rows.push_back({static_cast<double>(t.step), t.t, t.residual, t.J, t.I_eps});
      writer_.write("elliptic_solver/" + tag + "/trace.csv", csv_text({"step", "t", "residual", "J", "I_eps"}, rows));
      json doc = solve_json(rep);
      doc["eps"] = eps;
      doc["n"] = cfg_.n;
      doc["tol"] = cfg_.tol;
      writer_.write("elliptic_solver/" + tag + "/solve.json", json_text(doc));
      writer_.write("elliptic_solver/" + tag + "/u.f64", field_raw_bytes(s.field));
      writer_.write("elliptic_solver/" + tag + "/u.json", json_text(field_sidecar(s.field, "u.f64")));
      out_.sweep.push_back({eps, std::move(s.field), std::move(rep)});
    }
  }

  void gamma_limit() {
    const auto& sweep = out_.sweep;
    const auto grid = sweep.front().field.grid;
    const SharpPartition u0 = u0_partition(grid, out_.angles);
    const BoundaryTrace trace = u0_trace(out_.angles);
    const I0Result I0 = energy_I0(u0, out_.table, trace);
    const Field2D u0f = u0_field(grid, out_.angles, wells());
    writer_.write("gamma_limit/labels_u0.pgm", pgm_bytes(u0));

    json per_eps = json::array();
    std::vector<std::vector<double>> csv_rows;
    std::vector<double> G;
    for (const SweepEntry& e : sweep) {
      const Field2D& u = e.field;
      json j;
      j["eps"] = e.eps;
      const double l1 = l1_distance(u, u0f);
      const double I_eps = energy_Ieps(u, pot(), e.eps);
      const double gap = std::abs(I_eps - I0.total) / I0.total;
      j["l1_to_u0"] = l1;
      j["I_eps"] = I_eps;
      j["relative_gap"] = gap;
      json ann = json::array();
      double sup_first = 0.0, grad_first = 0.0;
      for (std::size_t a = 0; a < cfg_.alphas.size(); ++a) {
        const double alpha = cfg_.alphas[a];
        const double s = annulus_sup_error(u, out_.map, e.eps, alpha);
        const double g = annulus_gradient_error(u, out_.map, e.eps, alpha);
        if (a == 0) {
          sup_first = s;
          grad_first = g;
        }
        ann.push_back({{"alpha", alpha}, {"sup_error", s}, {"gradient_error", g}});
      }
      j["annulus"] = ann;
      G.push_back(relative_energy_G(u, out_.map, pot(), e.eps));
      j["G"] = G.back();
      const AprioriCheck ap = apriori_bound_check(u, pot(), out_.map.bound());
      j["apriori"] = {{"pass", ap.pass}, {"w_bound", ap.w_bound}, {"worst_w", ap.worst_w},
                      {"sup_bound", ap.sup_bound}, {"sup_u", ap.sup_u}};
      const SharpPartition q = quantize_to_wells(u, wells());
      writer_.write("gamma_limit/labels_" + eps_tag(e.eps) + ".pgm", pgm_bytes(q));
      j["I0_quantized"] = energy_I0(q, out_.table, trace).total;
      double angle_dev = std::numeric_limits<double>::quiet_NaN();
      try {
        const JunctionMeasurement m = measure_junction_angles(q);
        angle_dev = 0.0;
        json dev = json::array();
        for (std::size_t k = 0; k < 3; ++k) {
          const double d = std::abs(m.alpha[k] - out_.angles.alpha[k]) * kDeg;
          angle_dev = std::max(angle_dev, d);
          dev.push_back(d);
        }
        json deg = json::array();
        for (double x : m.alpha) deg.push_back(x * kDeg);
        j["junction"] = {{"alpha", m.alpha}, {"alpha_degrees", deg}, {"deviation_degrees", dev},
                         {"point", vec_json(m.junction)}, {"fit_residual", m.fit_residual}};
      } catch (const NoTriplePoint& err) {
        j["junction"] = {{"error", err.what()}};
      }
      csv_rows.push_back({e.eps, l1, I_eps, gap, sup_first, grad_first, G.back(), angle_dev});
      per_eps.push_back(j);
    }

    json pairs = json::array();
    std::vector<const Field2D*> fields;
    for (const SweepEntry& e : sweep) fields.push_back(&e.field);
    const auto probes = default_probe_points(sweep.back().eps);
    const auto cauchy = blowdown_cauchy(fields, out_.map, probes);
    for (std::size_t k = 0; k + 1 < sweep.size(); ++k) {
      pairs.push_back({{"eps", {sweep[k].eps, sweep[k + 1].eps}},
                       {"blowdown_sup", cauchy[k][k + 1]},
                       {"G_difference", std::abs(G[k + 1] - G[k])}});
    }
    json two_scale = json::array();
    for (double alpha : cfg_.alphas) {
      for (std::size_t a = 0; a < sweep.size(); ++a) {
        for (std::size_t b = a + 1; b < sweep.size(); ++b) {
          if (sweep[b].eps > std::pow(sweep[a].eps, 1.0 - alpha)) continue;
          two_scale.push_back({{"alpha", alpha},
                               {"eps", sweep[a].eps},
                               {"sigma", sweep[b].eps},
                               {"core_error", two_scale_core_error(sweep[a].field, sweep[b].field, alpha)}});
        }
      }
    }
    const ProbeResult probe = partition_perturbation_probe(u0, out_.table, trace, cfg_.probe_trials, cfg_.seed);

    out_.diagnostics = {{"I0", I0.total},
                        {"partition_functional", I0.partition_functional},
                        {"interfaces", {{"interior", I0.parts.interior}, {"mismatch", I0.parts.mismatch}}},
                        {"per_eps", per_eps},
                        {"consecutive", pairs},
                        {"two_scale", two_scale},
                        {"probe",
                         {{"all_pass", probe.all_pass},
                          {"trials", probe.trials},
                          {"base_value", probe.base_value},
                          {"tolerance", probe.tolerance},
                          {"worst_delta", probe.worst_delta},
                          {"worst_trial", probe.worst_trial},
                          {"max_flipped_fraction", probe.max_flipped_fraction}}}};
    writer_.write("gamma_limit/diagnostics.json", json_text(out_.diagnostics));
    writer_.write("gamma_limit/sweep.csv",
                  csv_text({"eps", "l1_to_u0", "I_eps", "relative_gap", "annulus_sup", "annulus_gradient", "G",
                            "max_angle_deviation_deg"},
                           csv_rows));
  }

  void report() {
    const json& d = out_.diagnostics;
    std::vector<double> l1, gap, sup, grad, cauchy, gdiff;
    bool apriori = true, monotone = true;
    for (const json& e : d.at("per_eps")) {
      l1.push_back(e.at("l1_to_u0").get<double>());
      gap.push_back(e.at("relative_gap").get<double>());
      sup.push_back(e.at("annulus")[0].at("sup_error").get<double>());
      grad.push_back(e.at("annulus")[0].at("gradient_error").get<double>());
    }
    for (const json& p : d.at("consecutive")) {
      cauchy.push_back(p.at("blowdown_sup").get<double>());
      gdiff.push_back(p.at("G_difference").get<double>());
    }
    for (const SweepEntry& e : out_.sweep) {
      apriori = apriori && e.report.apriori_pass;
      monotone = monotone && e.report.J_monotone;
    }
    const json& last = d.at("per_eps").back();
    json angle = last.at("junction");
    out_.report = {{"eps_ladder", cfg_.eps_ladder},
                   {"n", cfg_.n},
                   {"table_source", out_.synthetic_table ? "synthetic" : "descent"},
                   {"predicted_alpha_degrees", angles_json(out_.angles).at("alpha_degrees")},
                   {"junction_at_smallest_eps", angle},
                   {"trends",
                    {{"l1_strictly_decreasing", strictly_decreasing(l1)},
                     {"relative_gap_decreasing", nonincreasing(gap)},
                     {"final_relative_gap", gap.back()},
                     {"annulus_sup_strictly_decreasing", strictly_decreasing(sup)},
                     {"annulus_gradient_strictly_decreasing", strictly_decreasing(grad)},
                     {"blowdown_strictly_decreasing", strictly_decreasing(cauchy)},
                     {"G_differences_contracting", nonincreasing(gdiff)}}},
                   {"J_monotone", monotone},
                   {"apriori_pass", apriori},
                   {"probe_pass", d.at("probe").at("all_pass")}};
    writer_.write("report/report.json", json_text(out_.report));
  }

  const RunConfig& cfg_;
  int last_;
  ArtifactWriter writer_;
  PipelineOutcome out_;
};

}  // namespace

int stage_index(const std::string& name) {
  for (std::size_t k = 0; k < kStages.size(); ++k) {
    if (name == kStages[k]) return static_cast<int>(k);
  }
  throw InvalidArgument("unknown stage \"" + name + "\"");
}

void to_json(json& j, const StageRecord& s) { j = {{"name", s.name}, {"files", s.files}}; }

void to_json(json& j, const RunManifest& m) {
  j = {{"config_hash", m.config_hash}, {"seed", m.seed},      {"config", m.config_file},
       {"stages", m.stages},           {"status", m.status},  {"versions", m.versions}};
  if (!m.failed_stage.empty()) {
    j["failed_stage"] = m.failed_stage;
    j["error"] = m.error;
  }
}

PipelineOutcome run_pipeline(const RunConfig& config, int last_stage) {
  validate_config(config);
  if (last_stage < 0 || last_stage > 7) throw InvalidArgument("last stage index must lie in [0, 7]");
  return Runner(config, last_stage).run();
}

RunManifest cmd_pipeline(const RunConfig& config) { return run_pipeline(config).manifest; }

}  // namespace tripoint

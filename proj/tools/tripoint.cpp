#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tripoint/pipeline.hpp"

namespace {

using namespace tripoint;

struct Common {
  std::string config;
  std::optional<double> eps;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON run configuration (defaults apply when omitted)");
  cmd->add_option("--eps", c.eps, "Run a single eps instead of the configured ladder");
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--seed", c.seed, "Seed for every randomized stage");
}

RunConfig resolve(const Common& c, bool smallest_eps) {
  RunConfig cfg = c.config.empty() ? RunConfig{} : load_config(c.config);
  if (c.eps) {
    cfg.eps_ladder = {*c.eps};
  } else if (smallest_eps) {
    cfg.eps_ladder = {cfg.eps_ladder.back()};
  }
  if (c.out) cfg.output_dir = *c.out;
  if (c.seed) cfg.seed = *c.seed;
  validate_config(cfg);
  return cfg;
}

/// Prints the main output of the last stage that ran.
void summarize(const PipelineOutcome& o, int last) {
  nlohmann::json j;
  switch (last) {
    case 0:
      j = {{"potential", "validated"}, {"wells", o.potential->well_count()}};
      break;
    case 1:
      j = {{"gamma23", o.table.opposite(0)}, {"gamma13", o.table.opposite(1)}, {"gamma12", o.table.opposite(2)}};
      break;
    case 2:
      for (const auto& p : o.profiles) j.push_back({{"from", p.from + 1}, {"to", p.to + 1}, {"energy", p.energy}});
      break;
    case 3:
      j = {{"alpha", o.angles.alpha}, {"theta", o.angles.theta}};
      break;
    case 5:
      for (const auto& e : o.sweep) {
        j.push_back({{"eps", e.eps}, {"I_eps", e.report.I_eps}, {"residual", e.report.residual},
                     {"steps", e.report.accepted}});
      }
      break;
    case 6:
      j = o.diagnostics;
      break;
    default:
      j = o.report;
  }
  std::cout << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triple-junction phase-field pipeline"};
  app.require_subcommand(1);
  struct Sub {
    const char* name;
    const char* help;
    int last;
    bool smallest_eps;
  };
  const Sub subs[] = {
      {"validate-potential", "Check the structural hypotheses on W", 0, false},
      {"geodesics", "Degenerate geodesic distances between the wells", 1, false},
      {"connections", "Heteroclinic profiles for the three junctions", 2, false},
      {"angles", "Junction angles from the distance table", 3, false},
      {"solve", "Steady state at one eps (--eps, default the smallest)", 5, true},
      {"sweep", "Solve the eps ladder and compute the limit diagnostics", 6, false},
      {"report", "Full run; prints the report", 7, false},
      {"pipeline", "Full run; prints the manifest", 7, false},
  };
  Common common;
  const Sub* chosen = nullptr;
  for (const Sub& s : subs) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    add_common(cmd, common);
    cmd->callback([&chosen, &s] { chosen = &s; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    const RunConfig cfg = resolve(common, chosen->smallest_eps);
    PipelineOutcome o = run_pipeline(cfg, chosen->last);
    if (std::string(chosen->name) == "pipeline") {
      std::cout << nlohmann::json(o.manifest).dump(2) << "\n";
    } else {
      summarize(o, chosen->last);
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.category() == ErrorCategory::validation ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

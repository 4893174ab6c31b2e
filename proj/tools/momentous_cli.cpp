// Batch front-end: simulate | sweep | surface | classical | check-algebra.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "momentous/runner.hpp"

namespace {

namespace fs = std::filesystem;
using namespace momentous;

enum ExitCode { kOk = 0, kConfigError = 1, kIntegrationFailure = 2, kGoldenMismatch = 3 };

struct Options {
  std::string config_path;
  std::string out_path;
  int order = -1;
  std::string golden_path;
};

RunConfig resolve_config(const Options& opt, int forced_order) {
  RunConfig cfg = opt.config_path.empty() ? parse_config_text("{}") : load_config(opt.config_path);
  if (forced_order >= 0) {
    cfg.model.order = forced_order;
  } else if (opt.order >= 0) {
    cfg.model.order = opt.order;
  }
  cfg.validate();
  return cfg;
}

fs::path output_for(const Options& opt, const RunConfig& cfg, const char* fallback) {
  if (!opt.out_path.empty()) return opt.out_path;
  if (!cfg.output_path.empty()) return cfg.output_path;
  return fallback;
}

void write_outputs(const fs::path& data, const std::string& table, const nlohmann::ordered_json& summary) {
  write_file_atomic(data, table);
  write_file_atomic(summary_path(data), summary.dump(2) + "\n");
}

int run_simulate(const Options& opt, int forced_order) {
  RunConfig cfg = resolve_config(opt, forced_order);
  if (cfg.sweep) throw ConfigError("field 'sweep' is not allowed for simulate; use the sweep subcommand");
  const SimulationResult r = simulate(cfg);
  const fs::path out = output_for(opt, cfg, "trajectory.csv");
  write_outputs(out, trajectory_csv(r.trajectory, cfg.model.order), simulation_summary(r));
  std::printf("%s: %s (%s), energy drift %.3g, %zu samples -> %s\n", to_string(r.outcome.tag).c_str(),
              r.outcome.reason.c_str(), to_string(r.trajectory.termination).c_str(), r.trajectory.max_energy_drift(),
              r.trajectory.samples.size(), out.c_str());
  if (r.trajectory.termination == Termination::StepFailure) {
    std::fprintf(stderr, "integration failed: %s\n", r.trajectory.message.c_str());
    return kIntegrationFailure;
  }
  return kOk;
}

int run_sweep(const Options& opt) {
  RunConfig cfg = resolve_config(opt, -1);
  if (!cfg.sweep) throw ConfigError("field 'sweep' is required for the sweep subcommand");
  const auto rows = sweep(cfg);
  const fs::path out = output_for(opt, cfg, "sweep.csv");
  const auto summary = sweep_summary(cfg, rows);
  write_outputs(out, sweep_csv(rows), summary);
  std::printf("%s -> %s\n", summary["counts"].dump().c_str(), out.c_str());
  return kOk;
}

int run_surface(const Options& opt) {
  RunConfig cfg = resolve_config(opt, -1);
  if (!cfg.surface) throw ConfigError("field 'surface' is required for the surface subcommand");
  const SurfaceResult s = surface(cfg);
  const fs::path out = output_for(opt, cfg, "surface.csv");
  write_outputs(out, surface_csv(s), surface_summary(s));
  std::printf("%zu x %zu grid -> %s\n", s.t.size(), s.q.size(), out.c_str());
  if (s.reference.trajectory.termination == Termination::StepFailure) {
    std::fprintf(stderr, "integration failed: %s\n", s.reference.trajectory.message.c_str());
    return kIntegrationFailure;
  }
  return kOk;
}

int run_check_algebra(const Options& opt) {
  std::optional<std::string> golden;
  if (!opt.golden_path.empty()) {
    std::ifstream in(opt.golden_path);
    if (!in) throw ConfigError("cannot read golden report '" + opt.golden_path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    golden = ss.str();
  }
  const AlgebraCheck check = check_algebra(eom_table(2), eom_table(3), golden);
  const fs::path out = opt.out_path.empty() ? fs::path("check_algebra.json") : fs::path(opt.out_path);
  write_file_atomic(out, check.json);
  fs::path text = out;
  text.replace_extension(".txt");
  write_file_atomic(text, check.report.to_text());
  std::fputs(check.report.to_text().c_str(), stdout);
  if (!check.failure.empty()) {
    std::fprintf(stderr, "algebra check failed: %s\n", check.failure.c_str());
    return kGoldenMismatch;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical moment dynamics for a smooth tunneling barrier"};
  app.require_subcommand(1);
  Options opt;

  auto add_run_flags = [&opt](CLI::App* sub, bool with_order) {
    sub->add_option("--config", opt.config_path, "JSON run configuration (defaults when omitted)");
    sub->add_option("--out", opt.out_path, "output table path; the summary goes next to it");
    if (with_order) sub->add_option("--order", opt.order, "moment order override")->check(CLI::IsMember({0, 2, 3}));
  };
  auto* simulate_cmd = app.add_subcommand("simulate", "integrate one packet and classify it");
  add_run_flags(simulate_cmd, true);
  auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep and tabulate outcomes");
  add_run_flags(sweep_cmd, true);
  auto* surface_cmd = app.add_subcommand("surface", "sample V_eff(q, t) along a reference trajectory");
  add_run_flags(surface_cmd, true);
  auto* classical_cmd = app.add_subcommand("classical", "simulate with order 0 (point particle)");
  add_run_flags(classical_cmd, false);
  auto* algebra_cmd = app.add_subcommand("check-algebra", "check the equations of motion against the moment bracket");
  algebra_cmd->add_option("--out", opt.out_path, "report path (JSON; a .txt rendering is written alongside)");
  algebra_cmd->add_option("--golden", opt.golden_path, "expected report; any difference fails");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (simulate_cmd->parsed()) return run_simulate(opt, -1);
    if (classical_cmd->parsed()) return run_simulate(opt, 0);
    if (sweep_cmd->parsed()) return run_sweep(opt);
    if (surface_cmd->parsed()) return run_surface(opt);
    if (algebra_cmd->parsed()) return run_check_algebra(opt);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kConfigError;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kIntegrationFailure;
  }
  return kOk;
}

#include "momentous/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <thread>

namespace momentous {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

nlohmann::ordered_json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

double min_residual(const Trajectory& traj) {
  double m = std::numeric_limits<double>::infinity();
  for (double r : traj.uncertainty_residual) {
    if (std::isnan(r)) return r;
    m = std::min(m, r);
  }
  return m;
}

}  // namespace

SimulationResult simulate(const RunConfig& cfg) {
  cfg.validate();
  SimulationResult r;
  r.config = cfg;
  r.energy = cfg.classification_energy();

  const auto& pot = cfg.model.potential;
  const MomentState init =
      initial_moments(cfg.gaussian_packet(), cfg.model.order, cfg.packet.third_moment_convention);
  IntegratorConfig icfg = cfg.integrator;
  if (pot.gamma(r.energy).classically_forbidden()) {
    const auto [left, right] = pot.turning_points(r.energy);
    icfg.watch_levels = {left, right};
  }
  r.trajectory = integrate(init, cfg.model, icfg);
  r.outcome = classify(r.trajectory, pot, r.energy, cfg.effective_margin());
  return r;
}

RunConfig sweep_point(const RunConfig& cfg, int i) {
  RunConfig point = cfg;
  point.sweep.reset();
  if (!cfg.sweep) return point;
  const double v = cfg.sweep->value(i);
  if (cfg.sweep->parameter == "q0") {
    point.packet.q0 = v;
  } else if (cfg.sweep->parameter == "p0") {
    point.packet.p0 = v;
    point.packet.energy.reset();
  } else {
    point.packet.sigma0 = v;
  }
  return point;
}

std::vector<SweepRow> sweep(const RunConfig& cfg, unsigned threads) {
  cfg.validate();
  const int count = cfg.sweep ? cfg.sweep->count : 1;
  std::vector<SweepRow> rows(static_cast<std::size_t>(count));

  auto run_one = [&](int i) {
    SweepRow& row = rows[static_cast<std::size_t>(i)];
    const RunConfig point = sweep_point(cfg, i);
    row.value = cfg.sweep ? cfg.sweep->value(i) : point.packet.q0;
    try {
      const SimulationResult r = simulate(point);
      row.outcome = r.outcome;
      row.termination = r.trajectory.termination;
      row.energy_drift = r.trajectory.max_energy_drift();
      row.min_uncertainty_residual = min_residual(r.trajectory);
      row.constraint_violated = r.trajectory.constraint_violation_time.has_value();
    } catch (const std::exception& e) {
      row.outcome = Outcome{};
      row.outcome.reason = std::string("run failed: ") + e.what();
      row.energy_drift = std::numeric_limits<double>::quiet_NaN();
      row.min_uncertainty_residual = std::numeric_limits<double>::quiet_NaN();
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(count));
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) run_one(i);
    });
  }
  for (auto& th : pool) th.join();
  return rows;
}

SurfaceResult surface(const RunConfig& cfg) {
  cfg.validate();
  if (!cfg.surface) throw ConfigError("field 'surface' is required for a surface run");
  const SurfaceSpec& spec = *cfg.surface;

  RunConfig ref = cfg;
  std::vector<double> times;
  for (int i = 0; i < spec.t.count; ++i) times.push_back(spec.t.value(i));
  ref.integrator.t_max = std::max(spec.t.max, spec.t.min);
  if (!(ref.integrator.t_max > 0.0)) ref.integrator.t_max = cfg.integrator.sample_dt;
  ref.integrator.extra_sample_times = times;

  SurfaceResult out;
  out.reference = simulate(ref);
  for (int i = 0; i < spec.q.count; ++i) out.q.push_back(spec.q.value(i));

  const auto& samples = out.reference.trajectory.samples;
  for (double t : times) {
    auto it = std::lower_bound(samples.begin(), samples.end(), t,
                               [](const MomentState& s, double v) { return s.t() < v; });
    if (it == samples.end() || std::abs(it->t() - t) > 1e-12 * std::max(1.0, t)) continue;
    out.t.push_back(t);
    for (double q : out.q) out.veff.push_back(effective_potential(q, *it, cfg.model));
  }
  return out;
}

std::vector<std::string> trajectory_columns(int order) {
  std::vector<std::string> cols{"t", "q", "p"};
  if (order == 0) return cols;
  for (const char* g : {"G20", "G11", "G02"}) cols.push_back(g);
  if (order >= 3) {
    for (const char* g : {"G30", "G21", "G12", "G03"}) cols.push_back(g);
  }
  for (const char* c : {"H_Q", "V_eff", "uncertainty_residual"}) cols.push_back(c);
  return cols;
}

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols{"value",  "tag",          "entry_time",          "exit_time",
                                             "exit_side", "final_q",   "final_p",             "energy_drift",
                                             "min_uncertainty_residual", "constraint_violated", "termination"};
  return cols;
}

std::string trajectory_csv(const Trajectory& traj, int order) {
  std::string out = join(trajectory_columns(order));
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const MomentState& s = traj.samples[i];
    std::vector<std::string> row{fmt(s.t())};
    for (std::size_t k = 0; k < s.size(); ++k) row.push_back(fmt(s.vector()[k]));
    if (order != 0) {
      row.push_back(fmt(traj.hamiltonian[i]));
      row.push_back(fmt(traj.effective_potential[i]));
      row.push_back(fmt(traj.uncertainty_residual[i]));
    }
    out += join(row);
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = join(sweep_columns());
  for (const auto& r : rows) {
    out += join({fmt(r.value), to_string(r.outcome.tag), fmt(r.outcome.entry_time), fmt(r.outcome.exit_time),
                 std::to_string(r.outcome.exit_side), fmt(r.outcome.final_q), fmt(r.outcome.final_p),
                 fmt(r.energy_drift), fmt(r.min_uncertainty_residual), r.constraint_violated ? "1" : "0",
                 r.termination ? to_string(*r.termination) : "NotRun"});
  }
  return out;
}

std::string surface_csv(const SurfaceResult& s) {
  std::string out = "t,q,V_eff\n";
  std::size_t k = 0;
  for (double t : s.t) {
    for (double q : s.q) out += join({fmt(t), fmt(q), fmt(s.veff[k++])});
  }
  return out;
}

nlohmann::ordered_json outcome_json(const Outcome& o) {
  return {{"tag", to_string(o.tag)},
          {"reason", o.reason},
          {"turning_point", o.turning_point},
          {"horizon", o.horizon},
          {"entry_time", optional_json(o.entry_time)},
          {"exit_time", optional_json(o.exit_time)},
          {"exit_side", o.exit_side},
          {"sign_changes_inside", o.sign_changes_inside},
          {"closest_approach", o.closest_approach},
          {"final_q", o.final_q},
          {"final_p", o.final_p}};
}

nlohmann::ordered_json simulation_summary(const SimulationResult& r) {
  const Trajectory& tr = r.trajectory;
  nlohmann::ordered_json j;
  j["config"] = to_json(r.config);
  j["energy"] = r.energy;
  j["initial_momentum"] = r.config.initial_momentum();
  j["outcome"] = outcome_json(r.outcome);
  j["termination"] = to_string(tr.termination);
  j["message"] = tr.message;
  j["constraint_violation_time"] = optional_json(tr.constraint_violation_time);
  j["energy_drift"] = tr.max_energy_drift();
  j["min_uncertainty_residual"] = min_residual(tr);
  j["accepted_steps"] = tr.accepted_steps;
  j["rejected_steps"] = tr.rejected_steps;
  j["samples"] = tr.samples.size();
  j["columns"] = trajectory_columns(r.config.model.order);
  return j;
}

nlohmann::ordered_json sweep_summary(const RunConfig& cfg, const std::vector<SweepRow>& rows) {
  nlohmann::ordered_json j;
  j["config"] = to_json(cfg);
  nlohmann::ordered_json counts;
  for (OutcomeTag tag : {OutcomeTag::Reflected, OutcomeTag::Tunneled, OutcomeTag::Trapped, OutcomeTag::Undetermined}) {
    counts[to_string(tag)] = std::count_if(rows.begin(), rows.end(), [tag](const SweepRow& r) { return r.outcome.tag == tag; });
  }
  j["counts"] = counts;
  nlohmann::ordered_json points = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    points.push_back({{"value", r.value},
                      {"termination", r.termination ? to_string(*r.termination) : "NotRun"},
                      {"outcome", outcome_json(r.outcome)}});
  }
  j["points"] = points;
  j["columns"] = sweep_columns();
  return j;
}

nlohmann::ordered_json surface_summary(const SurfaceResult& s) {
  nlohmann::ordered_json j = simulation_summary(s.reference);
  j["columns"] = {"t", "q", "V_eff"};
  j["surface_times"] = s.t.size();
  j["surface_positions"] = s.q.size();
  return j;
}

AlgebraCheck check_algebra(const EomTable& order2, const EomTable& order3, const std::optional<std::string>& golden_json) {
  AlgebraCheck out;
  out.report = verify_eom_consistency(order2, order3);
  out.json = out.report.to_json();
  if (!out.report.clean()) {
    out.failure = std::to_string(out.report.count(CheckStatus::Unexpected)) + " unexpected equation difference(s)";
    for (const auto& p : out.report.properties) {
      if (!p.passed) out.failure += "; property '" + p.name + "' failed";
    }
    return out;
  }
  if (golden_json) {
    nlohmann::json golden, fresh = nlohmann::json::parse(out.json);
    try {
      golden = nlohmann::json::parse(*golden_json);
    } catch (const nlohmann::json::parse_error& e) {
      out.failure = std::string("golden report is not valid JSON: ") + e.what();
      return out;
    }
    if (golden != fresh) {
      const auto patch = nlohmann::json::diff(golden, fresh);
      out.failure = "report differs from golden at " + patch.front().value("path", std::string("/"));
    }
  }
  return out;
}

std::filesystem::path summary_path(const std::filesystem::path& data_path) {
  std::filesystem::path p = data_path;
  p.replace_extension(".summary.json");
  return p;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error("write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, path);
}

}  // namespace momentous

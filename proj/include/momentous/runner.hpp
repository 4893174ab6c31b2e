#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "momentous/classify.hpp"
#include "momentous/config.hpp"
#include "momentous/consistency.hpp"

namespace momentous {

struct SimulationResult {
  RunConfig config;
  double energy = 0.0;  // classification energy
  Trajectory trajectory;
  Outcome outcome;
};

/// Integrates and classifies one packet. Turning points are watched when the energy is below
/// the barrier top.
SimulationResult simulate(const RunConfig& cfg);

struct SweepRow {
  double value = 0.0;
  Outcome outcome;
  std::optional<Termination> termination;  // empty when the run could not start
  double energy_drift = 0.0;
  double min_uncertainty_residual = 0.0;
  bool constraint_violated = false;
};

/// Configuration of the i-th sweep point. Sweeping p0 replaces a configured energy.
RunConfig sweep_point(const RunConfig& cfg, int i);

/// Runs every sweep point on `threads` workers (0: hardware concurrency). Rows come back in
/// sweep order; failed points are Undetermined with the failure as the reason.
std::vector<SweepRow> sweep(const RunConfig& cfg, unsigned threads = 0);

struct SurfaceResult {
  SimulationResult reference;
  std::vector<double> t;
  std::vector<double> q;
  std::vector<double> veff;  // row-major, t outer, q inner
};

/// Integrates the reference trajectory up to the last surface time and evaluates V_eff on the
/// grid with the moments frozen at each time. Times past an early termination are dropped.
SurfaceResult surface(const RunConfig& cfg);

/// Fixed column layouts.
std::vector<std::string> trajectory_columns(int order);
const std::vector<std::string>& sweep_columns();

std::string trajectory_csv(const Trajectory& traj, int order);
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string surface_csv(const SurfaceResult& s);

nlohmann::ordered_json outcome_json(const Outcome& o);
nlohmann::ordered_json simulation_summary(const SimulationResult& r);
nlohmann::ordered_json sweep_summary(const RunConfig& cfg, const std::vector<SweepRow>& rows);
nlohmann::ordered_json surface_summary(const SurfaceResult& s);

struct AlgebraCheck {
  ConsistencyReport report;
  std::string json;
  /// Empty when the report is clean and matches the golden file (if any).
  std::string failure;
};

AlgebraCheck check_algebra(const EomTable& order2, const EomTable& order3,
                           const std::optional<std::string>& golden_json = std::nullopt);

/// Sidecar summary next to a data file: run.csv -> run.summary.json.
std::filesystem::path summary_path(const std::filesystem::path& data_path);

/// Writes through a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace momentous

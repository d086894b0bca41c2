#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "zerolab/harness.hpp"
#include "zerolab/model.hpp"
#include "zerolab/solver.hpp"

namespace zlab::app {

namespace fs = std::filesystem;

struct RunOptions {
  bool checks = false;
  bool plots = false;
  bool export_trajectory = false;
  std::uint64_t seed = 0;
};

struct RunManifest {
  std::string id, config_hash;
  std::uint64_t seed = 0;
  std::vector<fs::path> outputs;
  double wall_time = 0.0;  // seconds
  bool checked = false, passed = true;

  json to_json() const;
};

struct RunResult {
  ScenarioConfig cfg;
  Trajectory traj;
  harness::Analysis analysis;
  std::vector<harness::CheckReport> reports;

  bool passed() const;
};

/// A builtin scenario name or the path of a JSON file.
ScenarioConfig load_config(const std::string& source);

/// Moment classifications the checks apply to: the truncation end of a
/// half-line problem carries no boundary condition and is left out.
std::vector<MomentClassification> checked_moments(const ScenarioConfig& cfg, const harness::Analysis& a);

/// monotone, strict-drop, hypotheses, taxonomy, split, and isolated
/// moments on Robin, Neumann and flux sides.
std::vector<harness::CheckReport> standard_checks(const ScenarioConfig& cfg, const Trajectory& traj,
                                                  const harness::Analysis& a);

/// Solve, analyse and (optionally) check without touching the disk.
RunResult execute(const ScenarioConfig& cfg, bool checks);

/// execute plus output files in `out`:
///   config.json, trace.csv, zeros.csv, events.log, report.txt, manifest.json,
///   fronts.csv for free boundaries, plots/*.svg with plots,
///   trajectory.csv and snapshots.bin with export.
RunManifest run(const ScenarioConfig& cfg, const fs::path& out, const RunOptions& opts);

}  // namespace zlab::app

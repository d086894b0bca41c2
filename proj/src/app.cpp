#include "zerolab/app.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "zerolab/error.hpp"
#include "zerolab/io.hpp"
#include "zerolab/scenarios.hpp"

namespace zlab::app {

json RunManifest::to_json() const {
  json paths = json::array();
  for (const auto& p : outputs) paths.push_back(p.generic_string());
  json j{{"id", id}, {"config_hash", config_hash}, {"seed", seed}, {"outputs", paths}, {"wall_time", wall_time}};
  if (checked) j["passed"] = passed;
  return j;
}

bool RunResult::passed() const {
  for (const auto& r : reports)
    if (!r.passed()) return false;
  return true;
}

ScenarioConfig load_config(const std::string& source) {
  if (scenarios::is_builtin(source)) return build_scenario(scenarios::builtin(source));
  std::ifstream in(source);
  if (!in) throw ConfigError("cannot open config '" + source + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return build_scenario(ss.str());
}

std::vector<MomentClassification> checked_moments(const ScenarioConfig& cfg, const harness::Analysis& a) {
  if (!cfg.half_line) return a.moments;
  return {a.moments.front()};
}

namespace {

bool isolating(BoundaryKind k) {
  return k == BoundaryKind::Robin || k == BoundaryKind::Neumann || k == BoundaryKind::NonlinearFlux;
}

}  // namespace

std::vector<harness::CheckReport> standard_checks(const ScenarioConfig& cfg, const Trajectory& traj,
                                                  const harness::Analysis& a) {
  const double burn = cfg.time.t0 + cfg.tol.burn_in * cfg.time.dt;
  const double dt_out = cfg.time.dt * cfg.time.output_every;
  const auto moments = checked_moments(cfg, a);

  std::vector<harness::CheckReport> out;
  out.push_back(harness::check_monotone(a.zeros, burn));
  out.push_back(harness::check_strict_drop(a.zeros, moments, {burn, cfg.tol.drop_window}));
  harness::HypothesisOptions h;
  h.burn_in = burn;
  h.tau_d = cfg.tol.degenerate;
  h.window = cfg.tol.drop_window * dt_out;
  out.push_back(harness::check_hypotheses(traj, moments, h));
  out.push_back(harness::check_taxonomy(moments));

  std::vector<MomentClassification> iso;
  for (const auto& m : moments)
    if (isolating(m.side == 1 ? cfg.left.kind : cfg.right.kind)) iso.push_back(m);
  if (!iso.empty()) out.push_back(harness::check_isolated_moments(iso));

  if (!cfg.half_line && !cfg.is_free_boundary())
    out.push_back(harness::check_split(traj, cfg.tol.zero, cfg.tol.degenerate, burn));
  return out;
}

RunResult execute(const ScenarioConfig& cfg, bool checks) {
  RunResult r;
  r.cfg = cfg;
  r.traj = solver::solve_trajectory(cfg);
  r.analysis = harness::analyze(r.traj, cfg.tol, cfg.half_line ? cfg.analysis_length : std::nullopt);
  if (checks) r.reports = standard_checks(cfg, r.traj, r.analysis);
  return r;
}

RunManifest run(const ScenarioConfig& cfg, const fs::path& out, const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  fs::create_directories(out);

  RunManifest m;
  m.id = cfg.id;
  m.config_hash = config_hash(cfg);
  m.seed = opts.seed;

  const RunResult r = execute(cfg, opts.checks);
  auto emit = [&](const fs::path& p) { m.outputs.push_back(p); };

  {
    std::ofstream os(out / "config.json");
    os << to_json(cfg).dump(2) << '\n';
    emit(out / "config.json");
  }
  io::write_trace_csv(r.traj, r.analysis.zeros, out / "trace.csv");
  emit(out / "trace.csv");
  io::write_zero_count_csv(r.analysis.zeros, out / "zeros.csv");
  emit(out / "zeros.csv");
  io::write_event_log(r.analysis.zeros, r.analysis.moments, out / "events.log");
  emit(out / "events.log");
  io::write_report(r.reports, out / "report.txt");
  emit(out / "report.txt");
  if (!r.traj.fronts.empty()) {
    io::write_front_csv(r.traj, out / "fronts.csv");
    emit(out / "fronts.csv");
  }
  if (opts.plots || cfg.output.plots) {
    fs::create_directories(out / "plots");
    io::plot_zero_count(r.analysis.zeros, out / "plots" / "zero_count.svg");
    io::plot_zero_curves(r.analysis.zeros, out / "plots" / "zero_curves.svg");
    emit(out / "plots" / "zero_count.svg");
    emit(out / "plots" / "zero_curves.svg");
    if (!r.traj.fronts.empty()) {
      io::plot_fronts(r.traj, out / "plots" / "fronts.svg");
      emit(out / "plots" / "fronts.svg");
    }
  }
  if (opts.export_trajectory || cfg.output.export_trajectory) {
    io::write_trajectory_csv(r.traj, out / "trajectory.csv");
    io::write_snapshot_dump(r.traj, out / "snapshots.bin");
    emit(out / "trajectory.csv");
    emit(out / "snapshots.bin");
  }

  m.checked = opts.checks;
  m.passed = r.passed();
  m.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  emit(out / "manifest.json");
  std::ofstream os(out / "manifest.json");
  os << m.to_json().dump(2) << '\n';
  return m;
}

}  // namespace zlab::app

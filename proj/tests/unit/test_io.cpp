#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "zerolab/app.hpp"
#include "zerolab/io.hpp"

using namespace zlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("zerolab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("shortest round-trip formatting") {
  CHECK(io::fmt(0.1) == "0.1");
  CHECK(io::fmt(-2.5e-12) == "-2.5e-12");
  CHECK(std::stod(io::fmt(1.0 / 3)) == 1.0 / 3);
}

TEST_CASE("binary snapshot dump round-trips exactly") {
  const auto r = app::execute(app::load_config("robin-basic"), false);
  const auto dir = scratch("dump");
  io::write_snapshot_dump(r.traj, dir / "s.bin");
  const auto back = io::read_snapshot_dump(dir / "s.bin");
  REQUIRE(back.size() == r.traj.snapshots.size());
  for (std::size_t k = 0; k < back.size(); ++k) {
    CHECK(back[k].time() == r.traj.snapshots[k].time());
    CHECK(std::equal(back[k].values().begin(), back[k].values().end(), r.traj.snapshots[k].values().begin()));
  }
  std::ofstream(dir / "bad.bin") << "NOTADUMP";
  CHECK_THROWS(io::read_snapshot_dump(dir / "bad.bin"));
}

TEST_CASE("run writes its outputs deterministically") {
  const auto cfg = app::load_config("two-mode-heat");
  const auto a = scratch("run_a"), b = scratch("run_b");
  app::RunOptions opts;
  opts.checks = true;
  opts.plots = true;
  const auto m = app::run(cfg, a, opts);
  app::run(cfg, b, opts);
  CHECK(m.passed);
  for (const auto& p : m.outputs) CHECK(fs::exists(p));
  CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
  CHECK(slurp(a / "events.log") == slurp(b / "events.log"));

  const auto trace = slurp(a / "trace.csv");
  CHECK(trace.rfind("t,Z,w1,w2\n", 0) == 0);
  const auto report = slurp(a / "report.txt");
  CHECK(report.find("overall: PASS") != std::string::npos);
  const auto events = slurp(a / "events.log");
  CHECK(events.find("\"type\":\"drop\"") != std::string::npos);
  CHECK(json::parse(slurp(a / "manifest.json")).at("config_hash") == config_hash(cfg));
  CHECK(slurp(a / "plots" / "zero_count.svg").rfind("<svg", 0) == 0);
}

TEST_CASE("event lines are JSON sorted by time") {
  const auto r = app::execute(app::load_config("robin-basic"), false);
  const auto lines = io::event_lines(r.analysis.zeros, r.analysis.moments);
  REQUIRE_FALSE(lines.empty());
  double prev = -1e300;
  for (const auto& l : lines) {
    const auto j = json::parse(l);
    CHECK(j.at("t").get<double>() >= prev);
    prev = j.at("t").get<double>();
  }
}

TEST_CASE("free-boundary runs write a front trace") {
  const auto dir = scratch("fronts");
  const auto m = app::run(app::load_config("stefan-conservation"), dir, {});
  CHECK(fs::exists(dir / "fronts.csv"));
  CHECK(slurp(dir / "fronts.csv").rfind("t,g,h,Q\n", 0) == 0);
  CHECK(slurp(dir / "trace.csv").rfind("t,Z,w1,w2,g,h,Q\n", 0) == 0);
  CHECK_FALSE(m.checked);
}

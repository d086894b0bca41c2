#include <doctest.h>

#include <cmath>
#include <numbers>

#include "zerolab/app.hpp"
#include "zerolab/harness.hpp"

using namespace zlab;
using std::numbers::pi;

namespace {

ZeroInventory counted(double t, int n) {
  ZeroInventory inv;
  inv.t = t;
  for (int k = 0; k < n; ++k) inv.zeros.push_back({0.1 + 0.2 * k, ZeroKind::Simple, false, 1.0});
  return inv;
}

Trajectory still(double x0, double x1, const std::function<double(double)>& f, int frames = 3) {
  Trajectory tr;
  for (int k = 0; k < frames; ++k) {
    std::vector<double> x(201), u(201);
    for (int i = 0; i < 201; ++i) {
      x[i] = x0 + (x1 - x0) * i / 200.0;
      u[i] = f(x[i]);
    }
    tr.snapshots.emplace_back(0.1 * k, x, u);
  }
  return tr;
}

bool passed(const std::vector<harness::CheckReport>& rs) {
  for (const auto& r : rs)
    if (!r.passed()) return false;
  return true;
}

}  // namespace

TEST_CASE("monotone check flags an increase") {
  ZeroTrace zt;
  zt.inventories = {counted(0.0, 2), counted(0.1, 3)};
  const auto r = harness::check_monotone(zt, 0.0);
  REQUIRE_FALSE(r.passed());
  CHECK(r.violations[0].t == doctest::Approx(0.1));
  CHECK(harness::check_monotone(zt, 0.05).passed());
}

TEST_CASE("report text is line oriented") {
  harness::CheckReport r;
  r.name = "demo";
  r.param("window", 10.0);
  r.violate(0.5, "a", "b");
  const auto text = r.to_text();
  CHECK(text.find("check: demo") != std::string::npos);
  CHECK(text.find("status: FAIL") != std::string::npos);
  CHECK(text.find("param: window = 10") != std::string::npos);
  CHECK(text.find("violation: t=0.5") != std::string::npos);
}

TEST_CASE("two-mode heat passes every check and drops 3 -> 2") {
  const auto r = app::execute(app::load_config("two-mode-heat"), true);
  CHECK(passed(r.reports));
  const auto z = r.analysis.zeros.counts();
  CHECK(z.front() == 3);
  CHECK(z.back() == 2);
  CHECK(r.analysis.zeros.drops.size() == 1u);
}

TEST_CASE("eigenfunction run keeps three zeros and passes vacuously") {
  const auto r = app::execute(app::load_config("eigen-steady"), true);
  CHECK(passed(r.reports));
  for (int z : r.analysis.zeros.counts()) CHECK(z == 3);
  CHECK(r.analysis.zeros.drops.empty());
}

TEST_CASE("Robin run has isolated N and NZN moments only") {
  const auto r = app::execute(app::load_config("robin-basic"), true);
  CHECK(passed(r.reports));
  for (const auto& m : r.analysis.moments)
    for (const auto& l : m.label_set()) CHECK((l == "N" || l == "NZN"));
  CHECK(r.analysis.moments[0].count("NZN") == 1);
}

TEST_CASE("taxonomy and isolation checks catch synthetic traces") {
  std::vector<double> t, w;
  for (int i = 0; i <= 60; ++i) {
    t.push_back(i * 0.01);
    w.push_back(i >= 25 && i <= 30 ? 0.0 : (i < 25 ? 1.0 : -1.0));
  }
  const std::vector<MomentClassification> long_run{classify_moments(t, w, {}, 1e-8, 5, 2)};
  CHECK_FALSE(harness::check_isolated_moments(long_run).passed());
  CHECK(harness::check_taxonomy(long_run).passed());

  std::vector<double> ts, ws;
  for (int i = -2000; i <= 2000; ++i) {
    const double s = i * 5e-5;
    ts.push_back(s);
    ws.push_back(s == 0.0 ? 0.0 : s * s * std::sin(1.0 / s));
  }
  CHECK_FALSE(harness::check_taxonomy({classify_moments(ts, ws, {}, 1e-8, 5, 2)}).passed());
}

TEST_CASE("shift difference of decaying heat") {
  const auto cfg = build_scenario(json{{"initial", "sin(pi*x)"},
                                       {"time", {{"horizon", 0.1}, {"dt", 1e-3}, {"output_every", 10}}},
                                       {"grid", {{"nodes", 201}}}});
  const auto traj = solver::solve_trajectory(cfg);
  const auto d = harness::build_shift_difference(traj, 0.0, 0.01);
  REQUIRE(d.traj.snapshots.size() == traj.snapshots.size() - 1);
  const double factor = std::exp(-pi * pi * 0.01) - 1.0;
  for (std::size_t k = 0; k < d.traj.snapshots.size(); ++k) {
    const auto& eta = d.traj.snapshots[k];
    CHECK_FALSE(d.degenerate[k]);
    CHECK(count_zeros(eta, 1e-8, 1e-4).count() == 2);
    CHECK(eta.values()[100] / traj.snapshots[k].values()[100] == doctest::Approx(factor).epsilon(1e-3));
  }
  CHECK_THROWS(harness::build_shift_difference(traj, 0.0, 0.2));
}

TEST_CASE("shift difference of a steady state is degenerate") {
  const auto cfg = build_scenario(json{{"boundary", {{"left", {{"type", "neumann"}}}, {"right", {{"type", "neumann"}}}}},
                                       {"initial", "1"},
                                       {"time", {{"horizon", 0.1}, {"dt", 1e-3}, {"output_every", 10}}},
                                       {"grid", {{"nodes", 51}}}});
  const auto d = harness::build_shift_difference(solver::solve_trajectory(cfg), 0.0, 0.01);
  for (bool b : d.degenerate) CHECK(b);
}

TEST_CASE("reflection difference") {
  const auto tr = still(-1.0, 1.0, [](double x) { return 1 - x * x; });
  const auto sym = harness::build_reflection_difference(tr, 0.0);
  for (bool b : sym.degenerate) CHECK(b);

  const auto off = harness::build_reflection_difference(tr, 0.05);
  for (std::size_t k = 0; k < off.traj.snapshots.size(); ++k) {
    CHECK_FALSE(off.degenerate[k]);
    CHECK(off.traj.snapshots[k].left() == doctest::Approx(-0.95));
    CHECK(off.traj.snapshots[k].right() == doctest::Approx(0.95));
  }
  CHECK(harness::reflection_center_slope(tr.snapshots[0], 0.05) == doctest::Approx(-0.2).epsilon(1e-8));
  CHECK_THROWS(harness::build_reflection_difference(tr, 1.5));
}

TEST_CASE("interpolation reproduces cubics") {
  const auto tr = still(0.0, 1.0, [](double x) { return x * x * x - 2 * x + 0.5; }, 1);
  for (double x : {0.0, 0.1234, 0.5, 0.99, 1.0})
    CHECK(harness::interpolate(tr.snapshots[0], x) == doctest::Approx(x * x * x - 2 * x + 0.5).epsilon(1e-12));
  CHECK(harness::interpolate(tr.snapshots[0], 1.5) == 0.0);
}

TEST_CASE("strict drop ignores a boundary zero held by a ZZ run") {
  ZeroTrace zt;
  std::vector<double> t, zero_w, one_w;
  for (int k = 0; k <= 40; ++k) {
    ZeroInventory inv;
    inv.t = 0.01 * k;
    if (k <= 10) inv.zeros.push_back({0.0, ZeroKind::Multiple, true, 0.0});
    inv.zeros.push_back({0.5, ZeroKind::Simple, false, 1.0});
    zt.inventories.push_back(inv);
    t.push_back(inv.t);
    zero_w.push_back(0.0);
    one_w.push_back(1.0);
  }
  const std::vector<MomentClassification> held{classify_moments(t, zero_w, {}, 1e-8, 5, 2, 1)};
  const std::vector<MomentClassification> free{classify_moments(t, one_w, {}, 1e-8, 5, 2, 1)};
  CHECK(harness::check_strict_drop(zt, held, {0.0, 5}).passed());
  CHECK_FALSE(harness::check_strict_drop(zt, free, {0.0, 5}).passed());
}

TEST_CASE("moment count is bounded by Z at the last sample before burn-in ends") {
  // Z = 1 from t = 0.02 on; one NZN moment at t = 0.015 paid by the drop 2 -> 1.
  ZeroTrace zt;
  std::vector<double> t, w;
  for (int k = 0; k <= 40; ++k) {
    ZeroInventory inv;
    inv.t = 0.01 * k;
    inv.zeros.push_back({0.7, ZeroKind::Simple, false, 1.0});
    if (k <= 1) inv.zeros.insert(inv.zeros.begin(), {0.01, ZeroKind::Simple, false, 1.0});
    zt.inventories.push_back(inv);
  }
  zt.drops.push_back({0.01, 0.02, 2, 1, WitnessKind::BoundaryExit, {0.01}});
  for (int k = 0; k <= 400; ++k) {
    t.push_back(0.001 * k);
    w.push_back(t.back() - 0.0155);
  }
  const std::vector<MomentClassification> m{classify_moments(t, w, {}, 1e-8, 5, 2, 1)};
  REQUIRE(m[0].count("NZN") == 1);
  // Burn-in between the samples 0.01 and 0.02: the reference is t = 0.01 with Z = 2.
  CHECK(harness::check_strict_drop(zt, m, {0.015, 2}).passed());
}

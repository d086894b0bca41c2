// One line per criterion. A criterion passes when the suite passes it and
// the measured values agree with oracles computed here from closed forms,
// independently of the library's own expectations.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "zerolab/app.hpp"
#include "zerolab/scenarios.hpp"
#include "zerolab/suite.hpp"

using namespace zlab;
using std::numbers::pi;

namespace {

double bisect(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  for (int i = 0; i < 200; ++i) {
    const double c = 0.5 * (a + b), fc = f(c);
    if ((fc > 0) == (fa > 0)) {
      a = c;
      fa = fc;
    } else {
      b = c;
    }
  }
  return 0.5 * (a + b);
}

double get(const suite::CriterionResult& r, const std::string& key) {
  const auto it = r.observed.find(key);
  return it == r.observed.end() ? NAN : it->second;
}

// Interior sign changes, ignoring values below 1e-8 max|u|.
int lap_number(const Snapshot& s) {
  const double floor = 1e-8 * s.scale();
  int n = 0, prev = 0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double v = s.values()[i];
    if (std::abs(v) <= floor) continue;
    const int sg = v > 0 ? 1 : -1;
    if (prev != 0 && sg != prev) ++n;
    prev = sg;
  }
  return n;
}

struct Oracle {
  bool ok = true;
  std::string note;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      note += (note.empty() ? "" : "; ") + what;
    }
  }
};

Oracle a1(const suite::CriterionResult& r, std::uint64_t seed) {
  Oracle o;
  o.require(get(r, "runs") == 100, "expected 100 runs");
  o.require(get(r, "seconds") <= 180.0, "runtime above 3 min");
  // Sign-change count on a subset, counted here from the raw profiles.
  for (int i = 0; i < 10; ++i) {
    const auto cfg = build_scenario(scenarios::random_linear(seed, i));
    const auto traj = solver::solve_trajectory(cfg);
    const double burn = cfg.time.t0 + cfg.tol.burn_in * cfg.time.dt;
    int prev = -1;
    for (const auto& s : traj.snapshots) {
      if (s.time() < burn) continue;
      const int n = lap_number(s);
      if (prev >= 0) o.require(n <= prev, "sign changes increase in linear-" + std::to_string(i));
      prev = n;
    }
  }
  return o;
}

Oracle a2(const suite::CriterionResult& r) {
  Oracle o;
  // u_x(1, t) = -pi e^{-pi^2 t} + 2 pi e^{-4 pi^2 t}.
  const double t_star =
      bisect([](double t) { return -pi * std::exp(-pi * pi * t) + 2 * pi * std::exp(-4 * pi * pi * t); }, 0.0, 0.1);
  o.require(std::abs(get(r, "drop_t") - t_star) <= 2e-3, "drop time off the analytic exit time");
  o.require(std::abs(get(r, "boundary_multiple_t") - t_star) <= 2e-3, "boundary multiple zero not at the exit time");
  return o;
}

Oracle a3(const suite::CriterionResult& r) {
  Oracle o;
  // u / sin(pi x) = e^{-pi^2 t} (1 + e^{-8 pi^2 t} (3 - 4 sin^2 pi x)): the
  // pair sin^2(pi x) = (3 + e^{8 pi^2 t}) / 4 meets at x = 1/2 when this is 1.
  const double t_merge = bisect([](double t) { return (3 + std::exp(8 * pi * pi * t)) / 4 - 1; }, -0.02, 0.02);
  const double x_merge = std::asin(1.0) / pi;
  const double dt = 1e-4;
  o.require(get(r, "merge_t_before") - dt <= t_merge && t_merge <= get(r, "merge_t_after") + dt,
            "merge bracket misses the analytic merge time");
  o.require(std::abs(get(r, "merge_x") - x_merge) <= 5e-3, "merge location off x = 1/2");
  return o;
}

Oracle a4(const suite::CriterionResult& r) {
  Oracle o;
  o.require(get(r, "nzn") > 0, "no boundary touch produced");
  o.require(get(r, "long_runs") == 0, "boundary Z-run longer than one sample");
  o.require(get(r, "unmatched") == 0, "NZN moment without a drop");
  return o;
}

Oracle a5(const suite::CriterionResult& r, const std::set<std::string>& labels) {
  Oracle o;
  const std::set<std::string> allowed = {"N", "NZN", "NZZ", "ZZN", "ZZZ"};
  for (const auto& l : labels) o.require(allowed.contains(l), "label " + l + " emitted by a PDE run");
  o.require(!labels.empty(), "no PDE labels collected");
  o.require(r.passed, "synthetic trace did not produce an X label");
  return o;
}

Oracle a6(const suite::CriterionResult& r) {
  Oracle o;
  o.require(get(r, "err_101") <= 1e-2, "M=101 drift above 1e-2");
  o.require(get(r, "err_201") <= 4e-3, "M=201 drift above 4e-3");
  o.require(get(r, "err_401") <= 1.5e-3, "M=401 drift above 1.5e-3");
  for (const char* k : {"ratio_201", "ratio_401"}) {
    const double q = get(r, k);
    o.require(q >= 2.0 && q <= 5.0, std::string(k) + " outside [2, 5]");
  }
  return o;
}

Oracle a7(const suite::CriterionResult& r) {
  Oracle o;
  o.require(get(r, "drift") <= get(r, "dx"), "max location drifts more than one cell");
  return o;
}

Oracle a8(const suite::CriterionResult& r) {
  Oracle o;
  for (int k = 1; k <= 5; ++k) o.require(get(r, "ratio_" + std::to_string(k)) < 1.0, "period ratio not below 1");
  o.require(get(r, "counts") == 1, "zero count of eta not constant");
  o.require(get(r, "multiple") == 0, "multiple zero of eta in the final quarter");
  return o;
}

Oracle a9() {
  Oracle o;
  const auto traj = solver::solve_trajectory(app::load_config("moving-heat"));
  double err = 0.0;
  for (const auto& s : traj.snapshots)
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double x = s.nodes()[i], t = s.time();
      err = std::max(err, std::abs(s.values()[i] - (std::exp(x + t) - std::exp(-1.2 * x + 1.44 * t))));
    }
  o.require(err <= 1e-3, "sup error above 1e-3");
  o.require(std::abs(traj.snapshots.back().left() - 0.2 * traj.snapshots.back().time()) < 1e-12,
            "left end not on x = 0.2 t");
  return o;
}

Oracle a10(const suite::CriterionResult& r) {
  Oracle o;
  o.require(get(r, "failed") == 0, "radial runs with failed checks");
  return o;
}

}  // namespace

int main() {
  std::uint64_t seed = suite::SuiteOptions{}.seed;
  if (const char* env = std::getenv("ZERO_LAB_SEED"); env && *env) seed = std::stoull(env);
  suite::SuiteOptions opts;
  opts.seed = seed;
  opts.jobs = std::max(1u, std::thread::hardware_concurrency());
  const auto summary = suite::run_suite(opts);

  std::set<std::string> labels;
  for (const auto& r : summary.results)
    if (r.id != "A5" && r.id != "A9" && r.id != "A10") labels.insert(r.labels.begin(), r.labels.end());

  int failures = 0;
  std::printf("seed %llu\n", static_cast<unsigned long long>(seed));
  for (const auto& r : summary.results) {
    Oracle o;
    if (r.id == "A1") o = a1(r, seed);
    else if (r.id == "A2") o = a2(r);
    else if (r.id == "A3") o = a3(r);
    else if (r.id == "A4") o = a4(r);
    else if (r.id == "A5") o = a5(r, labels);
    else if (r.id == "A6") o = a6(r);
    else if (r.id == "A7") o = a7(r);
    else if (r.id == "A8") o = a8(r);
    else if (r.id == "A9") o = a9();
    else if (r.id == "A10") o = a10(r);
    const bool ok = r.passed && o.ok;
    failures += !ok;
    std::printf("%-4s %s  %s\n", r.id.c_str(), ok ? "PASS" : "FAIL", r.title.c_str());
    if (!r.error.empty()) std::printf("       error: %s\n", r.error.c_str());
    if (!o.note.empty()) std::printf("       oracle: %s\n", o.note.c_str());
    for (const auto& d : r.details) std::printf("       %s\n", d.c_str());
  }
  std::printf("%d/%zu criteria passed\n", int(summary.results.size()) - failures, summary.results.size());
  return failures == 0 ? 0 : 1;
}

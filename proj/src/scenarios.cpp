#include "zerolab/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "zerolab/error.hpp"
#include "zerolab/expr.hpp"
#include "zerolab/io.hpp"

namespace zlab::scenarios {

namespace {

const std::map<std::string, const char*>& table() {
  static const std::map<std::string, const char*> t = {
      {"two-mode-heat", R"js({
        "id": "two-mode-heat",
        "domain": {"left": 0, "right": 1},
        "boundary": {"left": {"type": "dirichlet_zero"}, "right": {"type": "dirichlet_zero"}},
        "initial": "sin(pi*x) + sin(2*pi*x)",
        "time": {"t0": 0, "horizon": 0.06, "dt": 1e-4, "output_every": 1},
        "grid": {"nodes": 801}})js"},
      {"interior-merge", R"js({
        "id": "interior-merge",
        "domain": {"left": 0, "right": 1},
        "boundary": {"left": {"type": "dirichlet_zero"}, "right": {"type": "dirichlet_zero"}},
        "initial": "exp(-pi^2*t)*sin(pi*x) + exp(-9*pi^2*t)*sin(3*pi*x)",
        "time": {"t0": -0.02, "horizon": 0.04, "dt": 1e-4, "output_every": 1},
        "grid": {"nodes": 801}})js"},
      {"robin-basic", R"js({
        "id": "robin-basic",
        "domain": {"left": 0, "right": 1},
        "boundary": {"left": {"type": "robin", "beta": 1}, "right": {"type": "robin", "beta": 1}},
        "initial": "x - 0.05",
        "time": {"t0": 0, "horizon": 0.1, "dt": 1e-4, "output_every": 5},
        "grid": {"nodes": 401}})js"},
      {"neumann-heat", R"js({
        "id": "neumann-heat",
        "domain": {"left": 0, "right": 1},
        "boundary": {"left": {"type": "neumann"}, "right": {"type": "neumann"}},
        "initial": "cos(3*pi*x) + 0.5*cos(pi*x)",
        "time": {"t0": 0, "horizon": 0.2, "dt": 2e-4, "output_every": 2},
        "grid": {"nodes": 401}})js"},
      {"eigen-steady", R"js({
        "id": "eigen-steady",
        "coefficients": {"c": "4*pi^2"},
        "domain": {"left": 0, "right": 1},
        "boundary": {"left": {"type": "dirichlet_zero"}, "right": {"type": "dirichlet_zero"}},
        "initial": "sin(2*pi*x)",
        "time": {"t0": 0, "horizon": 0.1, "dt": 2e-4, "output_every": 2},
        "grid": {"nodes": 401}})js"},
      {"moving-heat", R"js({
        "id": "moving-heat",
        "domain": {"left": "0.2*t", "right": 1},
        "boundary": {"left": {"type": "dirichlet_zero"},
                     "right": {"type": "dirichlet", "value": "exp(1 + t) - exp(-1.2 + 1.44*t)"}},
        "initial": "exp(x + t) - exp(-1.2*x + 1.44*t)",
        "time": {"t0": 0, "horizon": 0.5, "dt": 5e-4, "output_every": 10},
        "grid": {"nodes": 401}})js"},
      {"radial-ball", R"js({
        "id": "radial-ball",
        "coefficients": {"radial": 3},
        "domain": {"left": 0, "right": 1},
        "boundary": {"left": {"type": "neumann"}, "right": {"type": "robin", "beta": 1}},
        "initial": "cos(pi*x) + 0.6*cos(2*pi*x) + 0.2",
        "time": {"t0": 0, "horizon": 0.2, "dt": 2e-4, "output_every": 2},
        "grid": {"nodes": 401}})js"},
      {"stefan-conservation", R"js({
        "id": "stefan-conservation",
        "domain": {"left": -1, "right": 1},
        "boundary": {"left": {"type": "stefan", "mu": 1}, "right": {"type": "stefan", "mu": 1}},
        "initial": "2*(1 - x^2)",
        "time": {"t0": 0, "horizon": 1, "dt": 5e-4, "output_every": 20},
        "grid": {"nodes": 201}})js"},
      {"stefan-bistable", R"js({
        "id": "stefan-bistable",
        "coefficients": {"f": "u*(u - 0.5 - 0.2*sin(2*pi*t))*(1 - u)"},
        "domain": {"left": -1, "right": 1},
        "boundary": {"left": {"type": "stefan", "mu": 1}, "right": {"type": "stefan", "mu": 1}},
        "initial": "0.4*(1 - x^2)*(1 + 0.6*x)",
        "time": {"t0": 0, "horizon": 6, "dt": 2e-3, "output_every": 5, "period": 1},
        "grid": {"nodes": 201}})js"},
      {"periodic-flux", R"js({
        "id": "periodic-flux",
        "coefficients": {"c": -1},
        "domain": {"left": 0, "right": 30},
        "boundary": {"left": {"type": "flux", "g": "u - 0.5 - 0.3*sin(2*pi*t)", "h4": true},
                     "right": {"type": "dirichlet_zero"}},
        "initial": "max(0, 1 - x)^2",
        "time": {"t0": 0, "horizon": 16, "dt": 2e-3, "output_every": 10, "period": 1},
        "grid": {"nodes": 1201},
        "half_line": {"support_tol": 1e-6, "analysis_length": 10}})js"},
  };
  return t;
}

std::mt19937_64 make_rng(std::uint64_t seed, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::string num(double v) { return "(" + io::fmt(v) + ")"; }

int sign_changes(const std::string& source, double t) {
  const Expr e(source);
  int changes = 0;
  double prev = 0.0;
  for (int i = 0; i <= 800; ++i) {
    const double v = e.eval(i / 800.0, t);
    if (v != 0.0 && prev != 0.0 && (v > 0) != (prev > 0)) ++changes;
    if (v != 0.0) prev = v;
  }
  return changes;
}

json side(std::mt19937_64& rng) {
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0: return {{"type", "dirichlet_zero"}};
    case 1: return {{"type", "neumann"}};
    default: return {{"type", "robin"}, {"beta", uniform(rng, 0.0, 2.0)}};
  }
}

}  // namespace

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : table()) names.push_back(k);
  return names;
}

bool is_builtin(const std::string& name) { return table().contains(name); }

json builtin(const std::string& name) {
  const auto it = table().find(name);
  if (it == table().end()) throw ConfigError("unknown builtin scenario '" + name + "'");
  return json::parse(it->second);
}

json random_linear(std::uint64_t seed, int index) {
  auto rng = make_rng(seed, index);
  const double a0 = uniform(rng, 0.9, 1.4), a1 = uniform(rng, -0.4, 0.4);
  const double pa = uniform(rng, 0.0, 2 * std::numbers::pi), wa = uniform(rng, 0.0, 20.0);
  const double b0 = uniform(rng, -1.0, 1.0), b1 = uniform(rng, -1.0, 1.0);
  const double c0 = uniform(rng, -1.0, 1.0), c1 = uniform(rng, -1.0, 1.0);
  const json left = side(rng), right = side(rng);

  // Dirichlet sides get a vanishing envelope so u0 is compatible.
  std::string envelope;
  if (left.at("type") == "dirichlet_zero") envelope += "*x";
  if (right.at("type") == "dirichlet_zero") envelope += "*(1 - x)";

  std::string u0;
  for (int attempt = 0;; ++attempt) {
    const int modes = std::uniform_int_distribution<int>(2, 6)(rng);
    std::string sum = num(uniform(rng, -0.3, 0.3));
    for (int k = 1; k <= modes; ++k) {
      const double amp = std::normal_distribution<double>(0.0, 1.0)(rng) / k;
      const double phase = uniform(rng, 0.0, 2 * std::numbers::pi);
      sum += " + " + num(amp) + "*sin(" + std::to_string(k) + "*pi*x + " + num(phase) + ")";
    }
    u0 = "(" + sum + ")" + envelope;
    const int z = sign_changes(u0, 0.0);
    if (z >= 1 && z <= 6) break;
    if (attempt > 1000) throw ConfigError("random_linear: no admissible initial profile");
  }

  return {
      {"id", "linear-" + std::to_string(index)},
      {"coefficients",
       {{"a", num(a0) + " + " + num(a1) + "*sin(pi*x + " + num(pa) + ")*cos(" + num(wa) + "*t)"},
        {"b", num(b0) + " + " + num(b1) + "*x"},
        {"c", num(c0) + " + " + num(c1) + "*cos(2*pi*x)"},
        {"bounds", {{"a_min", 0.5}, {"a_max", 2.0}, {"b_abs", 2.0}, {"c_abs", 2.0}}}}},
      {"domain", {{"left", 0}, {"right", 1}}},
      {"boundary", {{"left", left}, {"right", right}}},
      {"initial", u0},
      {"time", {{"t0", 0}, {"horizon", 0.2}, {"dt", 2e-4}, {"output_every", 2}}},
      {"grid", {{"nodes", 401}}},
  };
}

json random_radial(std::uint64_t seed, int index) {
  auto rng = make_rng(seed ^ 0x5241444941ull, index);
  const double beta = uniform(rng, 0.0, 2.0);
  const double c = uniform(rng, -2.0, 2.0);
  std::string u0;
  for (int attempt = 0;; ++attempt) {
    std::string sum = num(uniform(rng, -0.5, 0.5));
    for (int k = 1; k <= 4; ++k)
      sum += " + " + num(uniform(rng, -1.0, 1.0)) + "*cos(" + std::to_string(k) + "*pi*x)";
    u0 = sum;
    const int z = sign_changes(u0, 0.0);
    if (z >= 1 && z <= 6) break;
    if (attempt > 1000) throw ConfigError("random_radial: no admissible initial profile");
  }
  return {
      {"id", "radial-" + std::to_string(index)},
      {"coefficients", {{"radial", 3}, {"c", c}}},
      {"domain", {{"left", 0}, {"right", 1}}},
      {"boundary", {{"left", {{"type", "neumann"}}}, {"right", {{"type", "robin"}, {"beta", beta}}}}},
      {"initial", u0},
      {"time", {{"t0", 0}, {"horizon", 0.2}, {"dt", 2e-4}, {"output_every", 2}}},
      {"grid", {{"nodes", 401}}},
  };
}

json robin_touch(std::uint64_t seed, int index) {
  auto rng = make_rng(seed ^ 0x524f42494eull, index);
  const double x1 = uniform(rng, 0.02, 0.08);
  const double a = uniform(rng, 0.8, 1.5), b = uniform(rng, -0.5, 0.5);
  const double bump = uniform(rng, -0.3, 0.3);
  // Even index: sign change near x = 0; odd: its mirror near x = 1.
  const std::string s = index % 2 == 0 ? "x" : "(1 - x)";
  const std::string u0 = "(" + s + " - " + num(x1) + ")*(1 + " + num(bump) + "*cos(pi*x))";
  return {
      {"id", "robin-touch-" + std::to_string(index)},
      {"coefficients", {{"a", a}, {"b", b}}},
      {"domain", {{"left", 0}, {"right", 1}}},
      {"boundary", {{"left", {{"type", "robin"}, {"beta", 1}}}, {"right", {{"type", "robin"}, {"beta", 1}}}}},
      {"initial", u0},
      {"time", {{"t0", 0}, {"horizon", 0.05}, {"dt", 1e-4}, {"output_every", 5}}},
      {"grid", {{"nodes", 401}}},
  };
}

}  // namespace zlab::scenarios

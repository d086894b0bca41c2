#include <doctest.h>

#include <cmath>
#include <numbers>

#include "zerolab/error.hpp"
#include "zerolab/solver.hpp"

using namespace zlab;
using std::numbers::pi;

namespace {

ScenarioConfig heat(int nodes, double dt, double horizon, json left = {{"type", "dirichlet_zero"}},
                    json right = {{"type", "dirichlet_zero"}}, std::string u0 = "sin(pi*x)", double c = 0.0) {
  return build_scenario(json{{"coefficients", {{"c", c}}},
                             {"boundary", {{"left", left}, {"right", right}}},
                             {"initial", u0},
                             {"time", {{"t0", 0}, {"horizon", horizon}, {"dt", dt}, {"output_every", 10}}},
                             {"grid", {{"nodes", nodes}}}});
}

double trapezoid(const Snapshot& s) {
  double q = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i)
    q += 0.5 * (s.values()[i] + s.values()[i - 1]) * (s.nodes()[i] - s.nodes()[i - 1]);
  return q;
}

}  // namespace

TEST_CASE("heat equation decays like its first mode") {
  const auto traj = solver::solve_trajectory(heat(401, 1e-4, 0.1));
  const auto& last = traj.snapshots.back();
  CHECK(last.time() == doctest::Approx(0.1));
  CHECK(last.scale() == doctest::Approx(std::exp(-pi * pi * 0.1)).epsilon(1e-4));
}

TEST_CASE("Crank-Nicolson is second order in space and time") {
  // u_t = u_xx + u with u = exp((1 - pi^2) t) sin(pi x).
  double prev = 0.0;
  for (int m : {41, 81, 161}) {
    const double dx = 1.0 / (m - 1);
    const auto traj = solver::solve_trajectory(heat(m, 0.5 * dx, 0.2, {{"type", "dirichlet_zero"}},
                                                    {{"type", "dirichlet_zero"}}, "sin(pi*x)", 1.0));
    const auto& s = traj.snapshots.back();
    double err = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
      err = std::max(err, std::abs(s.values()[i] - std::exp((1 - pi * pi) * s.time()) * std::sin(pi * s.nodes()[i])));
    if (prev > 0) {
      CAPTURE(m);
      CHECK(prev / err >= 3.0);
      CHECK(prev / err <= 5.0);
    }
    prev = err;
  }
}

TEST_CASE("Neumann heat conserves the trapezoid mass") {
  const auto traj = solver::solve_trajectory(heat(201, 1e-3, 0.2, {{"type", "neumann"}}, {{"type", "neumann"}},
                                                  "cos(3*pi*x) + 0.5*cos(pi*x) + 0.2"));
  const double m0 = trapezoid(traj.snapshots.front());
  for (const auto& s : traj.snapshots) CHECK(trapezoid(s) == doctest::Approx(m0).epsilon(1e-10));
}

TEST_CASE("Robin heat dissipates energy") {
  const auto traj = solver::solve_trajectory(heat(201, 1e-3, 0.2, {{"type", "robin"}, {"beta", 1.0}},
                                                  {{"type", "robin"}, {"beta", 2.0}}, "1 + x"));
  double prev = INFINITY;
  for (const auto& s : traj.snapshots) {
    double e = 0.0;
    for (double v : s.values()) e += v * v;
    CHECK(e <= prev);
    prev = e;
  }
  const auto [l, r] = solver::boundary_residuals(traj.snapshots.back(), BoundaryCondition::robin(Field::constant(1.0)),
                                                 BoundaryCondition::robin(Field::constant(2.0)));
  CHECK(l < 1e-3);
  CHECK(r < 1e-3);
}

TEST_CASE("trace records the boundary value at every step") {
  const auto cfg = heat(101, 1e-3, 0.05, {{"type", "robin"}, {"beta", 1.0}});
  const auto traj = solver::solve_trajectory(cfg);
  CHECK(traj.left.size() == 51u);
  CHECK(traj.snapshots.size() == 6u);
  CHECK(traj.right.value.back() == 0.0);
}

TEST_CASE("tridiagonal solver") {
  const std::vector<double> lo{0, -1, -1}, di{2, 2, 2}, up{-1, -1, 0}, rhs{1, 0, 1};
  const auto x = solver::detail::solve_tridiagonal(lo, di, up, rhs, 0.0);
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(1.0));
  CHECK(x[2] == doctest::Approx(1.0));
  const std::vector<double> bad{0, 0, 0};
  CHECK_THROWS_AS(solver::detail::solve_tridiagonal(lo, bad, up, rhs, 0.0), SolverError);
}

TEST_CASE("moving domain matches an exact solution") {
  // u = exp(x + t) - exp(-1.2 x + 1.44 t) vanishes on x = 0.2 t.
  const auto cfg = build_scenario(json{
      {"domain", {{"left", "0.2*t"}, {"right", 1}}},
      {"boundary", {{"left", {{"type", "dirichlet_zero"}}},
                    {"right", {{"type", "dirichlet"}, {"value", "exp(1 + t) - exp(-1.2 + 1.44*t)"}}}}},
      {"initial", "exp(x) - exp(-1.2*x)"},
      {"time", {{"t0", 0}, {"horizon", 0.3}, {"dt", 1e-3}, {"output_every", 30}}},
      {"grid", {{"nodes", 201}}}});
  const auto& s = solver::solve_trajectory(cfg).snapshots.back();
  CHECK(s.left() == doctest::Approx(0.06));
  for (std::size_t i = 0; i < s.size(); i += 20)
    CHECK(s.values()[i] == doctest::Approx(std::exp(s.nodes()[i] + 0.3) - std::exp(-1.2 * s.nodes()[i] + 0.432))
                               .epsilon(1e-4));
}

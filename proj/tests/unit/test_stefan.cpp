#include <doctest.h>

#include <cmath>

#include "zerolab/stefan.hpp"

using namespace zlab;

namespace {

Snapshot parabola(double g, double h, int m, double t = 0.0) {
  std::vector<double> x(m), u(m);
  for (int i = 0; i < m; ++i) {
    x[i] = g + (h - g) * i / (m - 1);
    u[i] = (x[i] - g) * (h - x[i]);
  }
  return Snapshot(t, x, u);
}

}  // namespace

TEST_CASE("front slopes of a parabola") {
  const auto st = stefan::make_state(parabola(-1.0, 2.0, 31), {});
  CHECK(stefan::boundary_slope(st, 1) == doctest::Approx(3.0));
  CHECK(stefan::boundary_slope(st, 2) == doctest::Approx(-3.0));
  CHECK(st.g == -1.0);
  CHECK(st.h == 2.0);
}

TEST_CASE("conserved quantity of a parabola") {
  // int_0^1 x (1 - x) = 1/6; trapezoid error is -dx^2/12 * [u']_0^1 / 1 = -dx^2/6.
  const stefan::FrontParams p{2.0, 0.5, 1e-6};
  const double dx = 1.0 / 100;
  CHECK(stefan::conserved_quantity(parabola(0.0, 1.0, 101), p) ==
        doctest::Approx(1.0 / 6 - dx * dx / 6 + 1.0 / 0.5 - 0.0 / 2.0).epsilon(1e-12));
}

TEST_CASE("fronts spread and Q is conserved without reaction") {
  const auto cfg = build_scenario(json{{"domain", {{"left", -1}, {"right", 1}}},
                                       {"boundary", {{"left", {{"type", "stefan"}}}, {"right", {{"type", "stefan"}}}}},
                                       {"initial", "2*(1 - x^2)"},
                                       {"time", {{"horizon", 0.5}, {"dt", 5e-4}, {"output_every", 100}}},
                                       {"grid", {{"nodes", 201}}}});
  const auto run = stefan::solve_free_boundary(cfg);
  const double q0 = run.states.front().q;
  for (std::size_t k = 1; k < run.states.size(); ++k) {
    CHECK(run.states[k].g < run.states[k - 1].g);
    CHECK(run.states[k].h > run.states[k - 1].h);
    CHECK(std::abs(run.states[k].q - q0) / q0 < 2e-4);
  }
  const auto traj = run.to_trajectory();
  CHECK(traj.fronts.g.size() == traj.snapshots.size());
}

TEST_CASE("a fast front is refused") {
  const auto st = stefan::make_state(parabola(0.0, 1.0, 101), {});
  CoefficientField f;
  CHECK_THROWS(stefan::step_free_boundary(st, f, 1.0, {}));
}

TEST_CASE("max location of a fixed parabola does not drift") {
  std::vector<Snapshot> ps;
  for (int k = 0; k < 10; ++k) {
    std::vector<double> x(41), u(41);
    for (int i = 0; i < 41; ++i) {
      x[i] = i / 40.0;
      u[i] = std::exp(-k * 0.1) * (1 - (x[i] - 0.4123) * (x[i] - 0.4123));
    }
    ps.emplace_back(k * 0.1, x, u);
  }
  const auto tr = stefan::track_max_location(ps);
  CHECK(tr.drift(0.5) < 1e-12);
  CHECK(tr.mean(0.5) == doctest::Approx(0.4123).epsilon(1e-10));
}

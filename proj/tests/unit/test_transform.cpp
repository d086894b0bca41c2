#include <doctest.h>

#include <cmath>

#include "zerolab/transform.hpp"

using namespace zlab;

TEST_CASE("straightening a left end moving with unit speed") {
  MovingDomain d;
  d.left = Field::expression("t");
  d.right = Field::constant(4.0);
  CoefficientField f;
  const auto p = transform::straighten_domain(f, d, 2.0, 0.0, 1.0);
  // L = 2 at t = 0: a~ = 1/L^2, b~ = xi1' (1 - y) / L.
  CHECK(p.a(0.0, 0.0) == doctest::Approx(0.25));
  CHECK(p.b(0.0, 0.0) == doctest::Approx(0.5));
  CHECK(p.b(1.0, 0.0) == doctest::Approx(0.0));
  CHECK(p.forward(0.5, 0.5) == doctest::Approx(0.5 + 0.5 * 1.5));
  CHECK(p.inverse(p.forward(0.3, 0.4), 0.4) == doctest::Approx(0.3));
}

TEST_CASE("endpoint derivatives of a smooth curve") {
  MovingDomain d;
  d.left = Field::expression("0.1*sin(t)");
  d.right = Field::constant(1.0);
  for (double t : {0.0, 0.3, 1.0})
    CHECK(transform::endpoint_derivative(d.left, d, t, 0.0, 1.0) == doctest::Approx(0.1 * std::cos(t)).epsilon(1e-5));
}

TEST_CASE("undeclared C1 interval is an error") {
  MovingDomain d;
  d.left = Field::expression("0.1*t");
  d.c1_declared = true;
  d.c1_intervals = {{0.0, 0.4}};
  CHECK_THROWS(transform::endpoint_derivative(d.left, d, 0.7, 0.0, 1.0));
}

TEST_CASE("normalizing a constant diffusion is a time rescaling") {
  CoefficientField f;
  f.a = Field::constant(4.0);
  const auto n = transform::normalize_diffusion(f, 0.0, 1.0, 0.0, 1.0);
  // alpha = 1/2, y = x, s = 4 t.
  CHECK(n.map.alpha(0.0) == doctest::Approx(0.5));
  CHECK(n.map.y(0.3, 0.0) == doctest::Approx(0.3));
  CHECK(n.S == doctest::Approx(4.0));
  CHECK(n.problem.a(0.5, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("split point is the largest value near the midpoint") {
  std::vector<double> x, u;
  for (int i = 0; i <= 100; ++i) {
    x.push_back(i * 0.01);
    u.push_back(std::sin(3.14159265358979 * x.back()));
  }
  CHECK(transform::choose_split_point(Snapshot(0.0, x, u)) == 50u);
}

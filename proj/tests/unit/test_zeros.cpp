#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "zerolab/error.hpp"
#include "zerolab/zeros.hpp"

using namespace zlab;
using std::numbers::pi;

namespace {

Snapshot sample(const std::function<double(double)>& f, int m = 401, double t = 0.0) {
  std::vector<double> x(m), u(m);
  for (int i = 0; i < m; ++i) {
    x[i] = double(i) / (m - 1);
    u[i] = f(x[i]);
  }
  return Snapshot(t, x, u);
}

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

ZeroInventory inventory(double t, std::vector<double> xs) {
  ZeroInventory inv;
  inv.t = t;
  inv.spacing = 0.01;
  for (double x : xs) inv.zeros.push_back({x, ZeroKind::Simple, x == 0.0 || x == 1.0, 1.0});
  return inv;
}

}  // namespace

TEST_CASE("closed-interval count includes vanishing endpoints") {
  const auto inv = count_zeros(sample([](double x) { return std::sin(3 * pi * x); }), 1e-8, 1e-4);
  REQUIRE(inv.count() == 4);
  CHECK(inv.zeros.front().at_boundary);
  CHECK(inv.zeros[1].location == doctest::Approx(1.0 / 3).epsilon(1e-6));
  CHECK(inv.zeros[2].kind == ZeroKind::Simple);
  CHECK(inv.zeros.back().at_boundary);
}

TEST_CASE("touching zero is one multiple zero") {
  const auto inv = count_zeros(sample([](double x) { return (x - 0.5) * (x - 0.5) + 0.1 * 0; }), 1e-8, 1e-4);
  REQUIRE(inv.count() == 1);
  CHECK(inv.zeros[0].kind == ZeroKind::Multiple);
  CHECK(inv.zeros[0].location == doctest::Approx(0.5));
  CHECK(inv.has_interior_multiple());
}

TEST_CASE("boundary zero with vanishing slope is multiple") {
  const auto inv = count_zeros(sample([](double x) { return x * x * (1.5 - x); }), 1e-8, 1e-4);
  REQUIRE(inv.count() == 1);
  CHECK(inv.zeros[0].at_boundary);
  CHECK(inv.zeros[0].kind == ZeroKind::Multiple);
  CHECK_FALSE(inv.has_interior_multiple());
}

TEST_CASE("all-zero profile is an error") {
  CHECK_THROWS_AS(count_zeros(sample([](double) { return 0.0; }), 1e-8, 1e-4), ZeroError);
}

TEST_CASE("random quintics agree with a bisection oracle") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = std::uniform_int_distribution<int>(0, 5)(rng);
    std::vector<double> r;
    while (static_cast<int>(r.size()) < n) {
      const double c = 0.03 + 0.94 * unit(rng);
      if (std::all_of(r.begin(), r.end(), [&](double v) { return std::abs(v - c) > 0.03; })) r.push_back(c);
    }
    const double lead = unit(rng) < 0.5 ? -1.0 : 1.0;
    auto p = [&](double x) {
      double v = lead * (1.0 + 0.5 * x * x);
      for (double c : r) v *= (x - c);
      return v;
    };
    // Oracle: bracket sign changes on a fine independent grid, then bisect.
    std::vector<double> roots;
    for (int i = 0; i < 5000; ++i) {
      const double a = i / 5000.0, b = (i + 1) / 5000.0;
      if ((p(a) > 0) != (p(b) > 0)) roots.push_back(bisect(p, a, b));
    }
    const auto inv = count_zeros(sample(p), 1e-8, 1e-4);
    CAPTURE(trial);
    REQUIRE(inv.count() == static_cast<int>(roots.size()));
    for (std::size_t k = 0; k < roots.size(); ++k) {
      CHECK(inv.zeros[k].location == doctest::Approx(roots[k]).epsilon(1e-4));
      CHECK(inv.zeros[k].kind == ZeroKind::Simple);
    }
  }
}

TEST_CASE("tracking: two neighbouring curves vanishing together merge") {
  std::vector<ZeroInventory> inv = {inventory(0.0, {0.2, 0.45, 0.55, 0.8}), inventory(0.1, {0.2, 0.48, 0.52, 0.8}),
                                    inventory(0.2, {0.2, 0.8})};
  const auto zt = trace_zero_curves(inv);
  REQUIRE(zt.drops.size() == 1u);
  CHECK(zt.drops[0].witness == WitnessKind::Merge);
  CHECK(zt.drops[0].z_before == 4);
  CHECK(zt.drops[0].z_after == 2);
  CHECK(zt.counts() == std::vector<int>{4, 4, 2});
}

TEST_CASE("tracking: a curve that reaches the end exits there") {
  std::vector<ZeroInventory> inv = {inventory(0.0, {0.0, 0.5, 0.97}), inventory(0.1, {0.0, 0.5, 0.99}),
                                    inventory(0.2, {0.0, 0.5})};
  const auto zt = trace_zero_curves(inv);
  REQUIRE(zt.drops.size() == 1u);
  CHECK(zt.drops[0].witness == WitnessKind::BoundaryExit);
}

TEST_CASE("tracking: an isolated interior disappearance is a vanish") {
  std::vector<ZeroInventory> inv = {inventory(0.0, {0.3, 0.7}), inventory(0.1, {0.7})};
  const auto zt = trace_zero_curves(inv);
  REQUIRE(zt.drops.size() == 1u);
  CHECK(zt.drops[0].witness == WitnessKind::Vanish);
}

TEST_CASE("moment labels of a trace that leaves zero") {
  std::vector<double> t, w;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(i * 0.01);
    w.push_back(std::max(0.0, t.back() - 0.5));
  }
  const auto m = classify_moments(t, w, {}, 1e-8, 5, 2);
  REQUIRE(m.runs.size() == 1u);
  CHECK(m.runs[0].t_start == 0.0);
  CHECK(m.runs[0].t_end == doctest::Approx(0.5));
  CHECK(m.runs[0].left == Context::Z);
  CHECK(m.runs[0].right == Context::N);
  const auto labels = m.label_set();
  CHECK(labels.contains("ZZN"));
  CHECK(labels.contains("ZZZ"));
  CHECK(labels.contains("N"));
}

TEST_CASE("a sign change between samples is an NZN moment") {
  std::vector<double> t, w;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(i * 0.01);
    w.push_back(t.back() - 0.505);
  }
  const auto m = classify_moments(t, w, {}, 1e-8, 5, 2);
  REQUIRE(m.runs.size() == 1u);
  CHECK(m.runs[0].between);
  CHECK(m.runs[0].t_start == doctest::Approx(0.505));
  CHECK(m.count("NZN") == 1);
  CHECK(m.a_intervals.size() == 1u);
}

TEST_CASE("oscillating flanks give X context") {
  std::vector<double> t, w;
  for (int i = -2000; i <= 2000; ++i) {
    const double s = i * 5e-5;
    t.push_back(s);
    w.push_back(s == 0.0 ? 0.0 : s * s * std::sin(1.0 / s));
  }
  const auto labels = classify_moments(t, w, {}, 1e-8, 5, 2).label_set();
  CHECK(std::any_of(labels.begin(), labels.end(), [](const std::string& l) { return l.find('X') != std::string::npos; }));
}

TEST_CASE("short traces are refused") {
  const std::vector<double> t{0, 1, 2}, w{1, 0, 1};
  CHECK_THROWS_AS(classify_moments(t, w, {}, 1e-8, 5, 2), ZeroError);
}

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "zerolab/error.hpp"
#include "zerolab/expr.hpp"
#include "zerolab/model.hpp"
#include "zerolab/scenarios.hpp"

using namespace zlab;

TEST_CASE("expressions evaluate with the documented precedence") {
  CHECK(Expr("-x^2").eval(3.0, 0.0) == doctest::Approx(-9.0));
  CHECK(Expr("2^3^2").eval(0.0, 0.0) == doctest::Approx(512.0));
  CHECK(Expr("max(0, 1 - x)^2").eval(0.25, 0.0) == doctest::Approx(0.5625));
  CHECK(Expr("u*(1 - u)").eval(0.0, 0.0, 0.25) == doctest::Approx(0.1875));
  CHECK(Expr("sin(pi*x)*exp(-t)").eval(0.5, 1.0) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("malformed expressions raise parse errors") {
  CHECK_THROWS_AS(Expr("sin(x"), ParseError);
  CHECK_THROWS_AS(Expr("x +* 2"), ParseError);
  CHECK_THROWS_AS(Expr("foo(x)"), ParseError);
}

TEST_CASE("every builtin scenario round-trips through JSON") {
  for (const auto& name : scenarios::builtin_names()) {
    CAPTURE(name);
    const auto cfg = build_scenario(scenarios::builtin(name));
    const auto again = build_scenario(to_json(cfg));
    CHECK(again == cfg);
    CHECK(config_hash(again) == config_hash(cfg));
  }
}

TEST_CASE("config hash tracks the content") {
  auto j = scenarios::builtin("robin-basic");
  const auto h1 = config_hash(build_scenario(j));
  j["grid"]["nodes"] = 201;
  CHECK(config_hash(build_scenario(j)) != h1);
}

TEST_CASE("invalid configurations are rejected") {
  auto j = scenarios::builtin("robin-basic");
  SUBCASE("negative diffusion") {
    j["coefficients"]["a"] = "-1 + 0*x";
    CHECK_THROWS_AS(build_scenario(j), ConfigError);
  }
  SUBCASE("negative Robin coefficient") {
    j["boundary"]["left"]["beta"] = -1;
    CHECK_THROWS_AS(build_scenario(j), ConfigError);
  }
  SUBCASE("too few nodes") {
    j["grid"]["nodes"] = 2;
    CHECK_THROWS_AS(build_scenario(j), ConfigError);
  }
  SUBCASE("crossing endpoints") {
    j["domain"]["left"] = "2*t";
    j["time"]["horizon"] = 1.0;
    CHECK_THROWS_AS(build_scenario(j), ConfigError);
  }
  SUBCASE("flux law violating g_u >= 0") {
    j["boundary"]["left"] = {{"type", "flux"}, {"g", "-u"}, {"h4", true}};
    CHECK_THROWS_AS(build_scenario(j), ConfigError);
  }
  SUBCASE("unknown boundary type") {
    j["boundary"]["left"] = {{"type", "periodic"}};
    CHECK_THROWS_AS(build_scenario(j), ParseError);
  }
  SUBCASE("not JSON") { CHECK_THROWS_AS(build_scenario(std::string("{\"id\": ")), ParseError); }
}

TEST_CASE("snapshot derivative estimates are exact for quadratics") {
  std::vector<double> x, u;
  for (int i = 0; i <= 10; ++i) {
    x.push_back(i * 0.1);
    u.push_back(3 * x.back() * x.back() - x.back());
  }
  const Snapshot s(0.0, x, u);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(s.derivative()[i] == doctest::Approx(6 * x[i] - 1).epsilon(1e-12));
  CHECK(s.scale() == doctest::Approx(2.0));
  CHECK(s.derivatives_consistent());
}

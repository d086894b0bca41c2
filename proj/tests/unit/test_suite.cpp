#include <doctest.h>

#include "zerolab/scenarios.hpp"
#include "zerolab/suite.hpp"

using namespace zlab;

TEST_CASE("filters select ids and tags") {
  CHECK(suite::select("stefan") == std::vector<std::string>{"A6", "A7", "A8"});
  CHECK(suite::select("a2,A9") == std::vector<std::string>{"A2", "A9"});
  CHECK(suite::select("").size() == 10u);
  CHECK(suite::select("nothing").empty());
}

TEST_CASE("random scenarios depend only on seed and index") {
  CHECK(scenarios::random_linear(1, 3) == scenarios::random_linear(1, 3));
  CHECK(scenarios::random_linear(1, 3) != scenarios::random_linear(2, 3));
  CHECK(scenarios::random_radial(5, 0) == scenarios::random_radial(5, 0));
  for (int i = 0; i < 20; ++i) CHECK_NOTHROW(build_scenario(scenarios::random_linear(11, i)));
}

TEST_CASE("thread count does not change results") {
  suite::SuiteOptions one{"A2,A3,A9", 3, 1}, many{"A2,A3,A9", 3, 3};
  const auto a = suite::run_suite(one), b = suite::run_suite(many);
  REQUIRE(a.results.size() == 3u);
  REQUIRE(b.results.size() == 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(a.results[k].id == b.results[k].id);
    CHECK(a.results[k].passed == b.results[k].passed);
    CHECK(a.results[k].observed == b.results[k].observed);
    CHECK(a.results[k].details == b.results[k].details);
  }
}

TEST_CASE("unknown criterion") { CHECK_THROWS(suite::run_criterion("A11", 1)); }

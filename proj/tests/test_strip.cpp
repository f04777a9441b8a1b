// Two-dimensional strip action and its slice comparison.

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "hbi/functional.hpp"
#include "hbi/strip.hpp"

using hbi::allen_cahn;
using hbi::StripGrid;
using hbi::strip_action;
using hbi::strip_slice_report;

namespace {
const double kRoot2 = std::sqrt(2.0);
}

TEST_CASE("y-independent strip action is width times the line action",
          "[strip]") {
  auto f = [](double x, double) { return std::tanh(x / kRoot2); };
  const auto g = StripGrid::from_function(-5.0, 5.0, 200, 0.0, 2.0, 8, f);
  const auto line = hbi::make_profile(-5.0, 5.0, 200,
                                      [&](double x) { return f(x, 0.0); });
  const double expected =
      2.0 *
      hbi::action(line, allen_cahn(), hbi::constant_weight(1.0)).total;
  CHECK(strip_action(g, allen_cahn()) ==
        Catch::Approx(expected).margin(1e-12));
}

TEST_CASE("single-row strip reduces to the line action", "[strip]") {
  auto f = [](double x, double) { return std::tanh(x / kRoot2); };
  const auto g = StripGrid::from_function(-6.0, 6.0, 150, 0.0, 0.0, 0, f);
  CHECK(g.width() == 1.0);
  const auto line = hbi::make_profile(-6.0, 6.0, 150,
                                      [&](double x) { return f(x, 0.0); });
  const double expected =
      hbi::action(line, allen_cahn(), hbi::constant_weight(1.0)).total;
  CHECK(strip_action(g, allen_cahn()) ==
        Catch::Approx(expected).margin(1e-13));
}

TEST_CASE("y-independent report has equal slices and no margin", "[strip]") {
  auto f = [](double x, double) { return std::tanh(x / kRoot2); };
  const auto g = StripGrid::from_function(-5.0, 5.0, 120, 0.0, 1.0, 6, f);
  const auto r = strip_slice_report(g, allen_cahn());
  REQUIRE(r.slice_actions.size() == 6);
  for (double s : r.slice_actions)
    CHECK(s == Catch::Approx(r.slice_actions[0]).margin(1e-13));
  CHECK(std::abs(r.margin_vs_mean) < 1e-12);
  CHECK(r.max_abs_gy < 1e-15);
  CHECK_FALSE(r.strict);
  CHECK(r.passed);
}

TEST_CASE("transverse wiggle strictly raises the action over every slice",
          "[strip]") {
  auto f = [](double x, double y) {
    return std::tanh((x + 0.1 * std::sin(2.0 * M_PI * y)) / kRoot2);
  };
  const auto g = StripGrid::from_function(-8.0, 8.0, 400, 0.0, 1.0, 40, f);
  const auto r = strip_slice_report(g, allen_cahn());
  CHECK(r.passed);
  CHECK(r.strict);
  CHECK(r.max_abs_gy > 0.01);
  CHECK(r.width == 1.0);
  CHECK(r.margin_vs_mean > 0.01);
  CHECK(r.margin_vs_mean < 0.2);
  CHECK(r.total > r.width * r.min_slice);
  for (double s : r.slice_actions) CHECK(s >= r.min_slice);
}

TEST_CASE("generic data never beats its own axial part", "[strip]") {
  auto f = [](double x, double y) {
    return 0.1 * std::sin(3.0 * x) * std::cos(2.0 * M_PI * y) + 0.2 * x;
  };
  const auto g = StripGrid::from_function(-2.0, 2.0, 50, 0.0, 1.0, 12, f);
  const auto r = strip_slice_report(g, allen_cahn());
  CHECK(r.margin_vs_mean >= -1e-12);
  CHECK(r.passed);
  CHECK(r.strict);
}

TEST_CASE("steep strip cell is rejected with its location", "[strip]") {
  auto f = [](double x, double) { return 2.0 * x; };
  const auto g = StripGrid::from_function(0.0, 1.0, 4, 0.0, 1.0, 2, f);
  try {
    strip_action(g, allen_cahn());
    FAIL("expected slope_error");
  } catch (const hbi::slope_error& e) {
    CHECK(e.slope > 1.0);
    CHECK(std::string(e.what()).find("gradient") != std::string::npos);
  }
}

TEST_CASE("strip grid validation", "[strip]") {
  StripGrid g;
  g.x = {0.0, 1.0};
  g.y = {0.0};
  g.v = {0.0, 0.0, 0.0};  // wrong size
  CHECK_THROWS_AS(g.validate(), hbi::domain_error);
  g.v = {0.0, 0.0};
  CHECK_NOTHROW(g.validate());
  g.x = {1.0, 0.0};
  CHECK_THROWS_AS(g.validate(), hbi::domain_error);

  CHECK_THROWS_AS(
      StripGrid::from_function(1.0, 0.0, 4, 0.0, 1.0, 2,
                               [](double, double) { return 0.0; }),
      hbi::parameter_error);
  CHECK_THROWS_AS(
      StripGrid::from_function(0.0, 1.0, 4, 1.0, 0.0, 2,
                               [](double, double) { return 0.0; }),
      hbi::parameter_error);
}

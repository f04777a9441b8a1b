// Weight families, their advertised hypotheses, and the domination audit.

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "hbi/weight.hpp"

using hbi::asymptotically_constant;
using hbi::check_domination;
using hbi::constant_weight;
using hbi::custom_weight;
using hbi::monotone_even;
using hbi::periodic_sin;
using hbi::validate_weight;

TEST_CASE("constant weight", "[weight]") {
  const auto a = constant_weight(1.0);
  CHECK(a(0.0) == 1.0);
  CHECK(a(-37.5) == 1.0);
  CHECK(a.bounded_positive);
  CHECK(a.lower == 1.0);
  CHECK(a.upper == 1.0);
  CHECK(a.is_constant);
  CHECK(a.symmetric);
  CHECK(a.nondecreasing_from_origin);
  CHECK(a.eventually_positive);
  CHECK(validate_weight(a).empty());
  CHECK_THROWS_AS(constant_weight(0.0), hbi::parameter_error);
  CHECK_THROWS_AS(constant_weight(-2.0), hbi::parameter_error);
}

TEST_CASE("periodic weight", "[weight]") {
  const auto a = periodic_sin(2.0, 1.0, 5.0);
  CHECK(a.lower == 1.0);
  CHECK(a.upper == 3.0);
  CHECK(a.period == 5.0);
  CHECK(a(0.0) == Catch::Approx(2.0).epsilon(1e-15));
  CHECK(a(1.25) == Catch::Approx(3.0).epsilon(1e-12));
  CHECK_FALSE(a.is_constant);
  CHECK_FALSE(a.nondecreasing_from_origin);
  for (int i = -50; i <= 50; ++i) {
    const double t = i / 3.0;
    CHECK(a(t + 5.0) == Catch::Approx(a(t)).margin(1e-12));
    CHECK(a(t) >= 1.0 - 1e-12);
    CHECK(a(t) <= 3.0 + 1e-12);
  }
  CHECK(validate_weight(a).empty());
  CHECK_THROWS_AS(periodic_sin(1.0, 1.0, 5.0), hbi::parameter_error);
  CHECK_THROWS_AS(periodic_sin(1.0, 2.0, 5.0), hbi::parameter_error);
  CHECK_THROWS_AS(periodic_sin(2.0, -0.5, 5.0), hbi::parameter_error);
  CHECK_THROWS_AS(periodic_sin(2.0, 1.0, 0.0), hbi::parameter_error);
}

TEST_CASE("asymptotically constant weight", "[weight]") {
  const auto a = asymptotically_constant(2.0, 1.0);
  CHECK(a(0.0) == Catch::Approx(1.0).epsilon(1e-15));
  CHECK(a(40.0) == Catch::Approx(2.0).epsilon(1e-12));
  CHECK(a(-40.0) == a(40.0));
  CHECK(a.bounded_positive);
  CHECK(a.lower == 1.0);
  CHECK(a.upper == 2.0);
  CHECK(a.nondecreasing_from_origin);
  CHECK(a.symmetric);
  REQUIRE(a.dominating != nullptr);
  CHECK((*a.dominating)(123.0) == 2.0);
  CHECK(validate_weight(a).empty());
  CHECK_THROWS_AS(asymptotically_constant(1.0, 1.0), hbi::parameter_error);
  CHECK_THROWS_AS(asymptotically_constant(0.0, -1.0), hbi::parameter_error);
}

TEST_CASE("monotone even weight", "[weight]") {
  const auto a = monotone_even(1.0);
  CHECK(a(0.0) == 0.0);
  CHECK(a(3.0) == 9.0);
  CHECK(a(-3.0) == 9.0);
  CHECK_FALSE(a.bounded_positive);  // vanishes at the origin, unbounded above
  CHECK(a.locally_bounded);
  CHECK(a.nondecreasing_from_origin);
  CHECK(a.symmetric);
  CHECK(a.eventually_positive);
  CHECK(a.positivity_threshold == 0.0);
  CHECK(validate_weight(a).empty());

  const auto capped = monotone_even(1.0, 25.0);
  CHECK(capped(4.0) == 16.0);
  CHECK(capped(5.0) == 25.0);
  CHECK(capped(10.0) == 25.0);
  CHECK(capped.nondecreasing_from_origin);
  CHECK(validate_weight(capped).empty());
  CHECK_THROWS_AS(monotone_even(0.0), hbi::parameter_error);
  CHECK_THROWS_AS(monotone_even(1.0, -1.0), hbi::parameter_error);
}

TEST_CASE("domination audit", "[weight]") {
  // A weight dominates itself with zero gap.
  const auto c = constant_weight(2.0);
  const auto self = check_domination(c, c, 1e-12, 40.0);
  CHECK(self.passed());
  CHECK(self.max_tail_gap == 0.0);

  // 2 - exp(-|t|) under the constant 2: dominated, gap collapses in the tail.
  const auto a = asymptotically_constant(2.0, 1.0);
  const auto ok = check_domination(a, c, 1e-8, 80.0);
  CHECK(ok.passed());
  CHECK(ok.max_tail_gap <= std::exp(-40.0) * 1.0000001);

  // Same pair but with a tight horizon: the tail gap is still e^{-5}.
  const auto tight = check_domination(a, c, 1e-8, 10.0);
  CHECK(tight.dominated);
  CHECK_FALSE(tight.tail_within);
  CHECK_FALSE(tight.passed());

  // Dominating weight smaller than the dominated one: flagged with samples.
  const auto bad = check_domination(c, constant_weight(1.0), 1e-8, 10.0);
  CHECK_FALSE(bad.dominated);
  CHECK(bad.max_violation == Catch::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(bad.violations.empty());
  CHECK_THROWS_AS(check_domination(c, c, 1e-8, 0.0), hbi::parameter_error);
  CHECK_THROWS_AS(check_domination(c, c, -1.0, 10.0), hbi::parameter_error);
}

TEST_CASE("expression weight with a negative band", "[weight]") {
  const auto a = custom_weight("t^2 - 1", 1.0);
  CHECK(a(0.0) == -1.0);
  CHECK(a(2.0) == 3.0);
  CHECK(a.symmetric);
  CHECK(a.nondecreasing_from_origin);
  CHECK(a.eventually_positive);
  CHECK(a.positivity_threshold == 1.0);
  CHECK(validate_weight(a).empty());
  // Claiming positivity past 0 is false and must be rejected.
  CHECK_THROWS_AS(custom_weight("t^2 - 1", 0.0), hbi::parameter_error);
}

TEST_CASE("expression weight capped parabola", "[weight]") {
  const auto a = custom_weight("min(t^2, 25)", 0.0);
  CHECK(a(10.0) == 25.0);
  CHECK(a(2.0) == 4.0);
  CHECK(a.symmetric);
  CHECK(a.nondecreasing_from_origin);
  CHECK(validate_weight(a).empty());
}

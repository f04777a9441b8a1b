#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "hbi/io.hpp"
#include "hbi/potential.hpp"
#include "hbi/profile.hpp"
#include "hbi/solver.hpp"
#include "hbi/weight.hpp"

namespace {

hbi::Profile awkward_profile() {
  // Values with no short decimal representation, to exercise the full
  // 17-digit round trip.
  hbi::Profile p;
  std::mt19937 rng(90210);
  std::uniform_real_distribution<double> du(-1.0, 1.0);
  double t = -std::sqrt(2.0);
  for (int i = 0; i < 200; ++i) {
    p.t.push_back(t);
    p.u.push_back(std::tanh(du(rng) + t / 3.0));
    t += 1.0 / 3.0 + 1e-3 * du(rng);
  }
  return p;
}

}  // namespace

TEST_CASE("csv round trip is bit exact", "[io]") {
  const hbi::Profile p = awkward_profile();

  std::stringstream ss;
  hbi::write_profile_csv(ss, p);
  const hbi::Profile q = hbi::read_profile_csv(ss);
  REQUIRE(q.nodes() == p.nodes());
  for (std::size_t i = 0; i < p.nodes(); ++i) {
    REQUIRE(q.t[i] == p.t[i]);
    REQUIRE(q.u[i] == p.u[i]);
  }

  SECTION("file variant") {
    const std::string path = "io_roundtrip_test.csv";
    hbi::write_profile_csv(path, p);
    const hbi::Profile r = hbi::read_profile_csv(path);
    for (std::size_t i = 0; i < p.nodes(); ++i) {
      REQUIRE(r.t[i] == p.t[i]);
      REQUIRE(r.u[i] == p.u[i]);
    }
    std::remove(path.c_str());
  }
}

TEST_CASE("csv reader tolerates CRLF and blank lines", "[io]") {
  std::stringstream ss("t,u\r\n\r\n0,0.5\r\n1,0.75\r\n");
  const hbi::Profile p = hbi::read_profile_csv(ss);
  REQUIRE(p.nodes() == 2);
  CHECK(p.t[0] == 0.0);
  CHECK(p.u[1] == 0.75);
}

TEST_CASE("csv reader rejects malformed input", "[io]") {
  {
    std::stringstream ss("x,y\n0,0\n1,1\n");
    CHECK_THROWS_AS(hbi::read_profile_csv(ss), hbi::io_error);
  }
  {
    std::stringstream ss("t,u\n0;0\n");
    CHECK_THROWS_AS(hbi::read_profile_csv(ss), hbi::io_error);
  }
  {
    std::stringstream ss("t,u\n0,0,9\n");
    CHECK_THROWS_AS(hbi::read_profile_csv(ss), hbi::io_error);
  }
  {
    std::stringstream ss("");
    CHECK_THROWS_AS(hbi::read_profile_csv(ss), hbi::io_error);
  }
  {
    // Nodes must increase; the profile validator owns that contract.
    std::stringstream ss("t,u\n1,0\n0,1\n");
    CHECK_THROWS_AS(hbi::read_profile_csv(ss), hbi::domain_error);
  }
  CHECK_THROWS_AS(hbi::read_profile_csv("definitely/not/a/file.csv"),
                  hbi::io_error);
}

TEST_CASE("json profile round trip is bit exact", "[io]") {
  const hbi::Profile p = awkward_profile();
  const hbi::Profile q = hbi::profile_from_json(hbi::to_json(p));
  for (std::size_t i = 0; i < p.nodes(); ++i) {
    REQUIRE(q.t[i] == p.t[i]);
    REQUIRE(q.u[i] == p.u[i]);
  }

  SECTION("file variant, via text") {
    const std::string path = "io_roundtrip_test.json";
    hbi::write_profile_json(path, p);
    const hbi::Profile r = hbi::read_profile_json(path);
    for (std::size_t i = 0; i < p.nodes(); ++i) {
      REQUIRE(r.t[i] == p.t[i]);
      REQUIRE(r.u[i] == p.u[i]);
    }
    std::remove(path.c_str());
  }

  SECTION("missing keys are an io error") {
    CHECK_THROWS_AS(hbi::profile_from_json(nlohmann::json{{"t", {0.0, 1.0}}}),
                    hbi::io_error);
  }
}

TEST_CASE("result records serialize with stable keys", "[io]") {
  const auto W = hbi::tanh_well();
  const auto a = hbi::constant_weight(1.0);
  const hbi::Profile p = hbi::heteroclinic_by_quadrature(W, 1e-3, 1e-2);

  const auto jb = hbi::to_json(hbi::action(p, W, a));
  CHECK(jb.contains("kinetic"));
  CHECK(jb.contains("potential"));
  CHECK(jb.contains("total"));
  CHECK(jb["total"].get<double>() ==
        jb["kinetic"].get<double>() + jb["potential"].get<double>());

  const auto rep = hbi::verify_minimizer(p, W, a);
  const auto jr = hbi::to_json(rep);
  CHECK(jr["passed"].get<bool>() == rep.passed());
  REQUIRE(jr["checks"].size() == rep.checks.size());
  CHECK(jr["checks"][0]["name"].get<std::string>() == rep.checks[0].name);

  hbi::SolverDiagnostics d;
  d.iterations = 7;
  d.projected_gradient = 1e-10;
  const auto jd = hbi::to_json(d);
  CHECK(jd["iterations"].get<std::size_t>() == 7);
  CHECK(jd["projected_gradient"].get<double>() == 1e-10);
}

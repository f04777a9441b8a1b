#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hbi/io.hpp"
#include "hbi/profile.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() /
          ("hbi_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  fs::path file(const std::string& name, const std::string& text) const {
    const fs::path p = dir / name;
    std::ofstream os(p);
    os << text;
    return p;
  }
  fs::path config(const std::string& name, const json& j) const {
    return file(name, j.dump(2));
  }
};

int run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd =
      env + (env.empty() ? "" : " ") + HBI_CLI_PATH + " " + args + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

json read_json(const fs::path& p) {
  std::ifstream is(p);
  REQUIRE(is.good());
  json j;
  is >> j;
  return j;
}

std::string read_bytes(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli solve writes a verified profile and report", "[cli]") {
  Scratch s;
  const fs::path cfg = s.config("solve.json", {{"command", "solve"},
                                               {"potential", "tanh_well"},
                                               {"weight", 1.0},
                                               {"n_cells", 1000}});
  const fs::path out = s.dir / "solve_out";
  REQUIRE(run_cli("--config " + cfg.string() + " --out " + out.string()) == 0);

  const hbi::Profile p = hbi::read_profile_csv((out / "profile.csv").string());
  CHECK(p.nodes() == 1001);
  CHECK(p.u.front() == -0.999);
  CHECK(p.u.back() == 0.999);

  const json report = read_json(out / "report.json");
  CHECK(report["command"] == "solve");
  CHECK(report["verification"]["passed"].get<bool>());
  CHECK(report["breakdown"]["total"].get<double>() > 0.5);
  CHECK(report["outputs"]["profile"] == "profile.csv");

  SECTION("json format variant") {
    const fs::path out2 = s.dir / "solve_json";
    REQUIRE(run_cli("--config " + cfg.string() + " --out " + out2.string() +
                    " --format json --seed 77") == 0);
    const hbi::Profile q =
        hbi::read_profile_json((out2 / "profile.json").string());
    CHECK(q.nodes() == 1001);
  }
}

TEST_CASE("cli solve-odd writes the half profile and its reflection",
          "[cli]") {
  Scratch s;
  const fs::path cfg = s.config("odd.json", {{"command", "solve-odd"},
                                             {"potential", "tanh_well"},
                                             {"weight", 1.0},
                                             {"n_cells", 500},
                                             {"verify", false}});
  const fs::path out = s.dir / "odd_out";
  REQUIRE(run_cli("--config " + cfg.string() + " --out " + out.string()) == 0);
  const hbi::Profile half =
      hbi::read_profile_csv((out / "profile.csv").string());
  const hbi::Profile refl =
      hbi::read_profile_csv((out / "reflected.csv").string());
  CHECK(half.t.front() == 0.0);
  CHECK(half.u.front() == 0.0);
  CHECK(refl.nodes() == 2 * half.nodes() - 1);
  CHECK(refl.u.front() == -half.u.back());
}

TEST_CASE("cli quadrature emits a low-residual connection", "[cli]") {
  Scratch s;
  const fs::path cfg = s.config("quad.json", {{"command", "quadrature"},
                                              {"potential", "allen_cahn"},
                                              {"step", 1e-3}});
  const fs::path out = s.dir / "quad_out";
  REQUIRE(run_cli("--config " + cfg.string() + " --out " + out.string()) == 0);
  const json report = read_json(out / "report.json");
  CHECK(report["conservation_max"].get<double>() <= 1e-5);

  SECTION("verify command accepts the emitted profile") {
    const fs::path vcfg =
        s.config("verify.json",
                 {{"command", "verify"},
                  {"profile", (out / "profile.csv").string()},
                  {"potential", "allen_cahn"},
                  {"weight", 1.0}});
    const fs::path vout = s.dir / "verify_out";
    REQUIRE(run_cli("--config " + vcfg.string() + " --out " +
                    vout.string()) == 0);
    CHECK(read_json(vout / "report.json")["verification"]["passed"]
              .get<bool>());
  }
}

TEST_CASE("cli verify rejects a non-critical profile", "[cli]") {
  Scratch s;
  hbi::Profile ramp = hbi::make_profile(-5.0, 5.0, 100,
                                        [](double t) { return t / 5.0; });
  const fs::path csv = s.dir / "ramp.csv";
  hbi::write_profile_csv(csv.string(), ramp);
  const fs::path cfg = s.config("verify.json", {{"command", "verify"},
                                                {"profile", csv.string()},
                                                {"potential", "tanh_well"},
                                                {"weight", 1.0}});
  const fs::path out = s.dir / "verify_out";
  CHECK(run_cli("--config " + cfg.string() + " --out " + out.string()) == 2);
  CHECK_FALSE(
      read_json(out / "report.json")["verification"]["passed"].get<bool>());
}

TEST_CASE("cli reports non-convergence with exit code 3", "[cli]") {
  Scratch s;
  const fs::path cfg = s.config("stall.json", {{"command", "solve"},
                                               {"potential", "tanh_well"},
                                               {"weight", 1.0},
                                               {"n_cells", 200},
                                               {"max_iter", 1},
                                               {"tol", 1e-14}});
  CHECK(run_cli("--config " + cfg.string() + " --out " +
                (s.dir / "x").string()) == 3);
}

TEST_CASE("cli maps bad configs to exit code 4", "[cli]") {
  Scratch s;
  const fs::path out = s.dir / "out";

  CHECK(run_cli("--config " + (s.dir / "missing.json").string() + " --out " +
                out.string()) == 4);

  const fs::path garbage = s.file("garbage.json", "{ not json");
  CHECK(run_cli("--config " + garbage.string() + " --out " + out.string()) ==
        4);

  const fs::path unknown =
      s.config("unknown.json", {{"command", "transmogrify"}});
  CHECK(run_cli("--config " + unknown.string() + " --out " + out.string()) ==
        4);

  const fs::path badsolver = s.config("badsolver.json",
                                      {{"command", "solve"},
                                       {"potential", "tanh_well"},
                                       {"n_cells", 4}});
  CHECK(run_cli("--config " + badsolver.string() + " --out " + out.string()) ==
        4);

  const fs::path badpot = s.config("badpot.json", {{"command", "solve"},
                                                   {"potential", "mystery"}});
  CHECK(run_cli("--config " + badpot.string() + " --out " + out.string()) ==
        4);

  const fs::path nopot = s.config("nopot.json", {{"command", "quadrature"}});
  CHECK(run_cli("--config " + nopot.string() + " --out " + out.string()) == 4);

  // Degenerate potential: the time map diverges, the input is rejected.
  const fs::path degen =
      s.config("degen.json",
               {{"command", "quadrature"},
                {"potential", json{{"expression", "((s^2-1)^2)/4 * s^2"}}},
                {"step", 1e-2}});
  CHECK(run_cli("--config " + degen.string() + " --out " + out.string()) == 4);
}

TEST_CASE("cli rearrange sorts a feasible profile", "[cli]") {
  Scratch s;
  hbi::Profile p;
  // Uniform grid, values shuffled; gaps fit the cell width after sorting.
  p.t = {0.0, 2.0, 4.0, 6.0, 8.0, 10.0};
  p.u = {0.3, -0.1, 0.5, 0.1, -0.3, 0.7};
  const fs::path csv = s.dir / "wiggle.csv";
  hbi::write_profile_csv(csv.string(), p);
  const fs::path cfg = s.config("rearrange.json",
                                {{"command", "rearrange"},
                                 {"profile", csv.string()},
                                 {"potential", "allen_cahn"},
                                 {"weight", 1.0}});
  const fs::path out = s.dir / "rearrange_out";
  REQUIRE(run_cli("--config " + cfg.string() + " --out " + out.string()) == 0);

  const hbi::Profile sorted =
      hbi::read_profile_csv((out / "rearranged.csv").string());
  for (std::size_t i = 0; i + 1 < sorted.nodes(); ++i)
    CHECK(sorted.u[i] <= sorted.u[i + 1]);
  const json report = read_json(out / "report.json");
  REQUIRE(report["feasible_before"].get<bool>());
  CHECK(report["action_after"]["total"].get<double>() <=
        report["action_before"]["total"].get<double>() + 1e-12);

  SECTION("an input too steep for the kernel is reported, not rejected") {
    hbi::Profile steep = p;
    for (std::size_t i = 0; i < steep.t.size(); ++i) steep.t[i] /= 4.0;
    const fs::path csv2 = s.dir / "steep.csv";
    hbi::write_profile_csv(csv2.string(), steep);
    const fs::path cfg2 = s.config("rearrange2.json",
                                   {{"command", "rearrange"},
                                    {"profile", csv2.string()},
                                    {"potential", "allen_cahn"},
                                    {"weight", 1.0}});
    const fs::path out2 = s.dir / "rearrange_out2";
    REQUIRE(run_cli("--config " + cfg2.string() + " --out " +
                    out2.string()) == 0);
    const json rep2 = read_json(out2 / "report.json");
    CHECK_FALSE(rep2["feasible_before"].get<bool>());
    CHECK(rep2["action_before"].is_null());
    CHECK(rep2["action_after"]["total"].get<double>() > 0.0);
    CHECK(rep2["max_abs_slope_before"].get<double>() > 1.0);
    CHECK(rep2["max_abs_slope_after"].get<double>() < 1.0);
  }
}

TEST_CASE("cli strip reports the slice comparison", "[cli]") {
  Scratch s;
  const fs::path cfg = s.config("strip.json", {{"command", "strip"},
                                               {"nx_cells", 100},
                                               {"ny_cells", 10}});
  const fs::path out = s.dir / "strip_out";
  REQUIRE(run_cli("--config " + cfg.string() + " --out " + out.string()) == 0);
  const json rep = read_json(out / "report.json")["slice_report"];
  CHECK(rep["passed"].get<bool>());
  CHECK(rep["strict"].get<bool>());
  CHECK(rep["total"].get<double>() >=
        rep["width"].get<double>() * rep["min_slice"].get<double>() - 1e-12);
}

TEST_CASE("cli sweep runs rows deterministically across thread counts",
          "[cli][sweep]") {
  Scratch s;
  json runs = json::array();
  for (const double L : {8.0, 10.0, 12.0, 14.0}) {
    runs.push_back({{"command", "solve"},
                    {"potential", "tanh_well"},
                    {"weight", 1.0},
                    {"half_length", L},
                    {"n_cells", std::size_t(100 * L)},
                    {"verify", false}});
  }
  const fs::path cfg = s.config("sweep.json",
                                {{"command", "sweep"}, {"runs", runs}});

  const fs::path out1 = s.dir / "sweep1";
  const fs::path out2 = s.dir / "sweep2";
  REQUIRE(run_cli("--config " + cfg.string() + " --out " + out1.string() +
                  " --jobs 1") == 0);
  REQUIRE(run_cli("--config " + cfg.string() + " --out " + out2.string() +
                  " --jobs 3") == 0);

  CHECK(read_bytes(out1 / "sweep.json") == read_bytes(out2 / "sweep.json"));
  CHECK(read_bytes(out1 / "run_0002" / "profile.csv") ==
        read_bytes(out2 / "run_0002" / "profile.csv"));

  // The pinned action converges as the interval grows: the two largest
  // intervals already agree to a few parts in a million.
  const json agg = read_json(out1 / "sweep.json");
  REQUIRE(agg["runs"].size() == 4);
  const double a2 = agg["runs"][2]["breakdown"]["total"].get<double>();
  const double a3 = agg["runs"][3]["breakdown"]["total"].get<double>();
  CHECK(std::abs(a2 - a3) <= 1e-5);
  CHECK(agg["passed"].get<bool>());

  SECTION("empty sweep succeeds") {
    const fs::path empty = s.config("empty.json",
                                    {{"command", "sweep"},
                                     {"runs", json::array()}});
    CHECK(run_cli("--config " + empty.string() + " --out " +
                  (s.dir / "e").string()) == 0);
  }

  SECTION("heterogeneous sweeps are rejected") {
    json mixed = json::array();
    mixed.push_back(runs[0]);
    mixed.push_back({{"command", "quadrature"}, {"potential", "tanh_well"}});
    const fs::path bad = s.config("mixed.json",
                                  {{"command", "sweep"}, {"runs", mixed}});
    CHECK(run_cli("--config " + bad.string() + " --out " +
                  (s.dir / "m").string()) == 4);
  }

  SECTION("nested sweeps are rejected") {
    json nested = json::array();
    nested.push_back({{"command", "sweep"}, {"runs", json::array()}});
    const fs::path bad = s.config("nested.json",
                                  {{"command", "sweep"}, {"runs", nested}});
    CHECK(run_cli("--config " + bad.string() + " --out " +
                  (s.dir / "n").string()) == 4);
  }

  SECTION("a failing row surfaces in the exit code") {
    json rows = json::array();
    rows.push_back({{"command", "solve"},
                    {"potential", "tanh_well"},
                    {"n_cells", 4}});
    const fs::path bad = s.config("badrow.json",
                                  {{"command", "sweep"}, {"runs", rows}});
    CHECK(run_cli("--config " + bad.string() + " --out " +
                  (s.dir / "b").string()) == 4);
  }
}

TEST_CASE("cli honours the log environment variable", "[cli]") {
  Scratch s;
  const fs::path cfg = s.config("q.json", {{"command", "quadrature"},
                                           {"potential", "tanh_well"},
                                           {"step", 1e-2}});
  CHECK(run_cli("--config " + cfg.string() + " --out " +
                (s.dir / "log_out").string(),
                "HETEROBI_LOG=debug") == 0);
}

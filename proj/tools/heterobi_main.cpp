// heterobi: command-line front end for the heteroclinic transition library.
//
// A single JSON config file selects the command (solve, solve-odd,
// quadrature, verify, rearrange, strip, sweep) and its parameters; results
// land in --out as CSV/JSON profiles plus a report.json. Exit codes:
//   0  success
//   2  a verification check failed
//   3  the minimizer did not converge
//   4  configuration or input error
//   1  unexpected internal error

#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hbi/errors.hpp"
#include "hbi/functional.hpp"
#include "hbi/io.hpp"
#include "hbi/potential.hpp"
#include "hbi/profile.hpp"
#include "hbi/solver.hpp"
#include "hbi/strip.hpp"
#include "hbi/transforms.hpp"
#include "hbi/weight.hpp"

namespace {

using nlohmann::json;

enum ExitCode {
  kOk = 0,
  kInternal = 1,
  kVerificationFailed = 2,
  kNoConvergence = 3,
  kBadConfig = 4,
};

int g_log_level = 0;  // 0 error, 1 info, 2 debug
std::mutex g_log_mutex;

void log_at(int level, const std::string& msg) {
  if (g_log_level < level) return;
  std::lock_guard<std::mutex> lock(g_log_mutex);
  const char* tag = level >= 2 ? "debug" : level == 1 ? "info" : "error";
  std::cerr << "heterobi [" << tag << "] " << msg << "\n";
}
void log_error(const std::string& msg) { log_at(0, msg); }
void log_info(const std::string& msg) { log_at(1, msg); }
void log_debug(const std::string& msg) { log_at(2, msg); }

// ---------------------------------------------------------------------------
// Config -> library objects
// ---------------------------------------------------------------------------

hbi::Potential potential_from(const json& cfg) {
  if (!cfg.contains("potential"))
    throw hbi::config_error("config: missing 'potential'");
  const json& j = cfg.at("potential");
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "tanh_well") return hbi::tanh_well();
    if (name == "allen_cahn") return hbi::allen_cahn();
    if (name == "compact_allen_cahn")
      return hbi::compact_truncate(hbi::allen_cahn());
    throw hbi::config_error("config: unknown potential '" + name + "'");
  }
  if (j.is_object() && j.contains("expression")) {
    hbi::Potential p =
        hbi::custom_potential(j.at("expression").get<std::string>());
    if (j.value("compact", false)) p = hbi::compact_truncate(p);
    return p;
  }
  throw hbi::config_error(
      "config: 'potential' must be a name or {\"expression\": ...}");
}

hbi::Weight weight_from(const json& cfg) {
  if (!cfg.contains("weight")) return hbi::constant_weight(1.0);
  const json& j = cfg.at("weight");
  if (j.is_number()) return hbi::constant_weight(j.get<double>());
  if (!j.is_object() || !j.contains("kind"))
    throw hbi::config_error(
        "config: 'weight' must be a number or {\"kind\": ...}");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant")
    return hbi::constant_weight(j.at("value").get<double>());
  if (kind == "periodic")
    return hbi::periodic_sin(j.at("mean").get<double>(),
                             j.at("amplitude").get<double>(),
                             j.at("period").get<double>());
  if (kind == "expression") {
    std::optional<double> t_pos;
    if (j.contains("positivity_threshold"))
      t_pos = j.at("positivity_threshold").get<double>();
    return hbi::custom_weight(j.at("text").get<std::string>(), t_pos);
  }
  throw hbi::config_error("config: unknown weight kind '" + kind + "'");
}

hbi::VerifyOptions verify_options_from(const json& cfg) {
  hbi::VerifyOptions vo;
  if (!cfg.contains("verify_options")) return vo;
  const json& j = cfg.at("verify_options");
  vo.slope_tol = j.value("slope_tol", vo.slope_tol);
  vo.conservation_tol = j.value("conservation_tol", vo.conservation_tol);
  vo.el_tol = j.value("el_tol", vo.el_tol);
  vo.stretch_floor = j.value("stretch_floor", vo.stretch_floor);
  vo.rearrange_tol = j.value("rearrange_tol", vo.rearrange_tol);
  vo.crossing_eps = j.value("crossing_eps", vo.crossing_eps);
  vo.stretch_bands = j.value("stretch_bands", vo.stretch_bands);
  vo.seed = j.value("seed", vo.seed);
  return vo;
}

hbi::SolverConfig solver_config_from(const json& cfg,
                                     std::optional<unsigned> seed_override) {
  hbi::SolverConfig sc;
  sc.half_length = cfg.value("half_length", sc.half_length);
  sc.n_cells = cfg.value("n_cells", sc.n_cells);
  sc.delta_slope = cfg.value("delta_slope", sc.delta_slope);
  sc.delta_bc = cfg.value("delta_bc", sc.delta_bc);
  sc.tol = cfg.value("tol", sc.tol);
  sc.max_iter = cfg.value("max_iter", sc.max_iter);
  sc.regularization = cfg.value("regularization", sc.regularization);
  sc.seed = cfg.value("seed", sc.seed);
  sc.starts = cfg.value("starts", sc.starts);
  if (seed_override) sc.seed = *seed_override;
  sc.validate();
  return sc;
}

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

std::string write_profile(const std::filesystem::path& dir,
                          const std::string& base, const std::string& format,
                          const hbi::Profile& p) {
  const std::filesystem::path path = dir / (base + "." + format);
  if (format == "json")
    hbi::write_profile_json(path.string(), p);
  else
    hbi::write_profile_csv(path.string(), p);
  return path.filename().string();
}

void write_report(const std::filesystem::path& dir, const json& report) {
  std::ofstream os(dir / "report.json");
  if (!os) throw hbi::io_error("cannot open report.json for writing");
  os << report.dump(2) << "\n";
}

hbi::Profile load_profile(const std::string& path) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return hbi::read_profile_json(path);
  return hbi::read_profile_csv(path);
}

struct RunOutput {
  int code = kOk;
  json summary;
};

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

RunOutput run_solve(const json& cfg, const std::filesystem::path& out,
                    const std::string& format,
                    std::optional<unsigned> seed_override, bool odd) {
  const hbi::Potential W = potential_from(cfg);
  const hbi::Weight a = weight_from(cfg);
  const hbi::SolverConfig sc = solver_config_from(cfg, seed_override);

  const hbi::MinimizeResult res = odd ? hbi::minimize_odd(sc, W, a)
                                      : hbi::direct_minimize(sc, W, a);
  log_debug("solve: converged in " +
            std::to_string(res.diagnostics.iterations) + " iterations");

  json report;
  report["command"] = odd ? "solve-odd" : "solve";
  report["breakdown"] = hbi::to_json(res.breakdown);
  report["diagnostics"] = hbi::to_json(res.diagnostics);
  json files;
  files["profile"] = write_profile(out, "profile", format, res.profile);
  if (odd) {
    const hbi::Profile reflected = hbi::odd_reflect(res.profile);
    files["reflected"] = write_profile(out, "reflected", format, reflected);
  }

  int code = kOk;
  if (cfg.value("verify", true)) {
    const hbi::VerificationReport rep =
        hbi::verify_minimizer(res.profile, W, a, verify_options_from(cfg));
    report["verification"] = hbi::to_json(rep);
    if (!rep.passed()) {
      code = kVerificationFailed;
      log_error("verification failed");
    }
  }
  report["outputs"] = std::move(files);
  write_report(out, report);
  return {code, std::move(report)};
}

RunOutput run_quadrature(const json& cfg, const std::filesystem::path& out,
                         const std::string& format) {
  const hbi::Potential W = potential_from(cfg);
  const double delta_bc = cfg.value("delta_bc", 1e-3);
  const double step = cfg.value("step", 1e-4);
  const hbi::Profile p = hbi::heteroclinic_by_quadrature(W, delta_bc, step);
  const hbi::Weight unit = hbi::constant_weight(1.0);

  json report;
  report["command"] = "quadrature";
  report["nodes"] = p.nodes();
  report["breakdown"] = hbi::to_json(hbi::action(p, W, unit));
  report["conservation_max"] = hbi::conservation_residual(p, W).max_abs;
  json files;
  files["profile"] = write_profile(out, "profile", format, p);
  report["outputs"] = std::move(files);
  write_report(out, report);
  return {kOk, std::move(report)};
}

RunOutput run_verify(const json& cfg, const std::filesystem::path& out) {
  if (!cfg.contains("profile"))
    throw hbi::config_error("config: verify needs a 'profile' path");
  const hbi::Profile p = load_profile(cfg.at("profile").get<std::string>());
  const hbi::Potential W = potential_from(cfg);
  const hbi::Weight a = weight_from(cfg);
  const hbi::VerificationReport rep =
      hbi::verify_minimizer(p, W, a, verify_options_from(cfg));

  json report;
  report["command"] = "verify";
  report["verification"] = hbi::to_json(rep);
  write_report(out, report);
  const int code = rep.passed() ? kOk : kVerificationFailed;
  if (code != kOk) log_error("verification failed");
  return {code, std::move(report)};
}

RunOutput run_rearrange(const json& cfg, const std::filesystem::path& out,
                        const std::string& format) {
  if (!cfg.contains("profile"))
    throw hbi::config_error("config: rearrange needs a 'profile' path");
  const hbi::Profile p = load_profile(cfg.at("profile").get<std::string>());
  const hbi::Potential W = potential_from(cfg);
  const hbi::Weight a = weight_from(cfg);
  const hbi::Profile sorted = hbi::monotone_rearrange(p);

  json report;
  report["command"] = "rearrange";
  // The input may be infeasible for the kernel (a cell steeper than light
  // speed) while its sorted rearrangement is fine; report that as a null
  // starting action rather than failing.
  try {
    report["action_before"] = hbi::to_json(hbi::action_nodal(p, W, a));
    report["feasible_before"] = true;
  } catch (const hbi::slope_error&) {
    report["action_before"] = nullptr;
    report["feasible_before"] = false;
  }
  report["action_after"] = hbi::to_json(hbi::action_nodal(sorted, W, a));
  report["max_abs_slope_before"] = p.max_abs_slope();
  report["max_abs_slope_after"] = sorted.max_abs_slope();
  json files;
  files["rearranged"] = write_profile(out, "rearranged", format, sorted);
  report["outputs"] = std::move(files);
  write_report(out, report);
  return {kOk, std::move(report)};
}

RunOutput run_strip(const json& cfg, const std::filesystem::path& out) {
  hbi::Potential W = cfg.contains("potential") ? potential_from(cfg)
                                               : hbi::tanh_well();
  const double x0 = cfg.value("x0", -8.0), x1 = cfg.value("x1", 8.0);
  const double y0 = cfg.value("y0", 0.0), y1 = cfg.value("y1", 1.0);
  const std::size_t nx = cfg.value("nx_cells", std::size_t(400));
  const std::size_t ny = cfg.value("ny_cells", std::size_t(40));
  const double amplitude = cfg.value("amplitude", 0.1);
  const double ky = cfg.value("ky", 1.0);
  const double pi = std::acos(-1.0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  const hbi::StripGrid grid = hbi::StripGrid::from_function(
      x0, x1, nx, y0, y1, ny, [&](double x, double y) {
        return std::tanh((x + amplitude * std::sin(2.0 * pi * ky * y)) *
                         inv_sqrt2);
      });
  const hbi::StripSliceReport rep = hbi::strip_slice_report(grid, W);

  json report;
  report["command"] = "strip";
  report["slice_report"] = hbi::to_json(rep);
  write_report(out, report);
  const int code = rep.passed ? kOk : kVerificationFailed;
  if (code != kOk) log_error("strip slice comparison failed");
  return {code, std::move(report)};
}

RunOutput run_single(const json& cfg, const std::filesystem::path& out,
                     const std::string& format,
                     std::optional<unsigned> seed_override);

RunOutput run_sweep(const json& cfg, const std::filesystem::path& out,
                    const std::string& format,
                    std::optional<unsigned> seed_override, unsigned jobs) {
  if (!cfg.contains("runs") || !cfg.at("runs").is_array())
    throw hbi::config_error("config: sweep needs a 'runs' array");
  const json& runs = cfg.at("runs");
  json aggregate;
  aggregate["command"] = "sweep";
  aggregate["runs"] = json::array();
  if (runs.empty()) {
    aggregate["passed"] = true;
    write_report(out, aggregate);
    return {kOk, std::move(aggregate)};
  }

  // Homogeneous sweeps only: one command across every row.
  std::string row_command;
  for (const json& row : runs) {
    if (!row.is_object() || !row.contains("command"))
      throw hbi::config_error("config: each sweep row needs a 'command'");
    const std::string c = row.at("command").get<std::string>();
    if (c == "sweep")
      throw hbi::config_error("config: sweeps cannot nest");
    if (row_command.empty())
      row_command = c;
    else if (c != row_command)
      throw hbi::config_error(
          "config: sweep rows must share one command, got '" + row_command +
          "' and '" + c + "'");
  }

  std::vector<RunOutput> results(runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= runs.size()) return;
      std::ostringstream name;
      name << "run_" << std::setfill('0') << std::setw(4) << i;
      const std::filesystem::path row_out = out / name.str();
      std::filesystem::create_directories(row_out);
      try {
        results[i] = run_single(runs[i], row_out, format, seed_override);
      } catch (const hbi::non_convergence_error& e) {
        log_error(name.str() + ": " + e.what());
        results[i] = {kNoConvergence, json{{"error", e.what()}}};
      } catch (const std::exception& e) {
        log_error(name.str() + ": " + e.what());
        results[i] = {kBadConfig, json{{"error", e.what()}}};
      }
      log_info(name.str() + " finished");
    }
  };
  const unsigned n_workers =
      std::max(1u, std::min<unsigned>(jobs, runs.size()));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  int code = kOk;
  for (std::size_t i = 0; i < results.size(); ++i) {
    json row = results[i].summary;
    row["exit_code"] = results[i].code;
    row["directory"] = "run_" + ([&] {
                         std::ostringstream s;
                         s << std::setfill('0') << std::setw(4) << i;
                         return s.str();
                       })();
    aggregate["runs"].push_back(std::move(row));
    code = std::max(code, results[i].code);
  }
  aggregate["passed"] = code == kOk;
  write_report(out, aggregate);

  std::ofstream os(out / "sweep.json");
  if (!os) throw hbi::io_error("cannot open sweep.json for writing");
  os << aggregate.dump(2) << "\n";
  return {code, std::move(aggregate)};
}

RunOutput run_single(const json& cfg, const std::filesystem::path& out,
                     const std::string& format,
                     std::optional<unsigned> seed_override) {
  if (!cfg.is_object() || !cfg.contains("command"))
    throw hbi::config_error("config: missing 'command'");
  const std::string command = cfg.at("command").get<std::string>();
  log_info("running '" + command + "' into " + out.string());
  if (command == "solve") return run_solve(cfg, out, format, seed_override, false);
  if (command == "solve-odd") return run_solve(cfg, out, format, seed_override, true);
  if (command == "quadrature") return run_quadrature(cfg, out, format);
  if (command == "verify") return run_verify(cfg, out);
  if (command == "rearrange") return run_rearrange(cfg, out, format);
  if (command == "strip") return run_strip(cfg, out);
  throw hbi::config_error("config: unknown command '" + command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heteroclinic transition minimizer"};
  std::string config_path;
  std::string out_dir = ".";
  std::string format = "csv";
  unsigned jobs = 1;
  std::optional<unsigned> seed_override;
  unsigned seed_value = 0;
  app.add_option("--config", config_path, "JSON config file")->required();
  app.add_option("--out", out_dir, "output directory (created if absent)");
  app.add_option("--format", format, "profile output format")
      ->check(CLI::IsMember({"csv", "json"}));
  auto* seed_opt =
      app.add_option("--seed", seed_value, "override the config seed");
  app.add_option("--jobs", jobs, "worker threads for sweeps")
      ->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  if (*seed_opt) seed_override = seed_value;

  if (const char* lvl = std::getenv("HETEROBI_LOG")) {
    const std::string s = lvl;
    g_log_level = s == "debug" ? 2 : s == "info" ? 1 : 0;
  }

  try {
    std::ifstream is(config_path);
    if (!is) {
      log_error("cannot open config " + config_path);
      return kBadConfig;
    }
    json cfg;
    try {
      is >> cfg;
    } catch (const json::exception& e) {
      log_error(std::string("config parse error: ") + e.what());
      return kBadConfig;
    }

    const std::filesystem::path out(out_dir);
    std::filesystem::create_directories(out);

    if (cfg.is_object() && cfg.contains("command") &&
        cfg.at("command") == "sweep")
      return run_sweep(cfg, out, format, seed_override, jobs).code;
    return run_single(cfg, out, format, seed_override).code;
  } catch (const hbi::non_convergence_error& e) {
    log_error(e.what());
    return kNoConvergence;
  } catch (const hbi::config_error& e) {
    log_error(e.what());
    return kBadConfig;
  } catch (const hbi::io_error& e) {
    log_error(e.what());
    return kBadConfig;
  } catch (const nlohmann::json::exception& e) {
    log_error(std::string("config error: ") + e.what());
    return kBadConfig;
  } catch (const std::logic_error& e) {
    // parameter, domain, grid, and expression rejections from the library
    log_error(e.what());
    return kBadConfig;
  } catch (const hbi::degenerate_well_error& e) {
    log_error(e.what());
    return kBadConfig;
  } catch (const std::exception& e) {
    log_error(std::string("internal error: ") + e.what());
    return kInternal;
  }
}

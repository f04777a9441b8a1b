#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hbi/errors.hpp"
#include "hbi/functional.hpp"
#include "hbi/profile.hpp"
#include "hbi/solver.hpp"
#include "hbi/strip.hpp"

namespace hbi {

// ---------------------------------------------------------------------------
// CSV profile serialization. %.17g guarantees a bit-exact double round trip.
// ---------------------------------------------------------------------------

inline void write_profile_csv(std::ostream& os, const Profile& p) {
  validate_profile(p);
  os << "t,u\n";
  char row[80];
  for (std::size_t i = 0; i < p.nodes(); ++i) {
    std::snprintf(row, sizeof row, "%.17g,%.17g\n", p.t[i], p.u[i]);
    os << row;
  }
  if (!os) throw io_error("write_profile_csv: stream write failed");
}

inline void write_profile_csv(const std::string& path, const Profile& p) {
  std::ofstream os(path);
  if (!os) throw io_error("write_profile_csv: cannot open " + path);
  write_profile_csv(os, p);
}

inline Profile read_profile_csv(std::istream& is) {
  Profile p;
  std::string line;
  std::size_t lineno = 0;
  bool saw_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "t,u")
        throw io_error("read_profile_csv: expected header 't,u', got '" +
                       line + "'");
      saw_header = true;
      continue;
    }
    const char* s = line.c_str();
    char* end = nullptr;
    const double t = std::strtod(s, &end);
    if (end == s || *end != ',') {
      std::ostringstream msg;
      msg << "read_profile_csv: malformed row at line " << lineno;
      throw io_error(msg.str());
    }
    const char* s2 = end + 1;
    const double u = std::strtod(s2, &end);
    if (end == s2 || *end != '\0') {
      std::ostringstream msg;
      msg << "read_profile_csv: malformed row at line " << lineno;
      throw io_error(msg.str());
    }
    p.t.push_back(t);
    p.u.push_back(u);
  }
  if (!saw_header) throw io_error("read_profile_csv: empty input");
  validate_profile(p);
  return p;
}

inline Profile read_profile_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw io_error("read_profile_csv: cannot open " + path);
  return read_profile_csv(is);
}

// ---------------------------------------------------------------------------
// JSON views of the result records.
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const ActionBreakdown& b) {
  return {{"kinetic", b.kinetic}, {"potential", b.potential},
          {"total", b.total}};
}

inline nlohmann::json to_json(const SolverDiagnostics& d) {
  return {{"iterations", d.iterations},
          {"start_index", d.start_index},
          {"starts_converged", d.starts_converged},
          {"projected_gradient", d.projected_gradient},
          {"objective", d.objective},
          {"gradient_fallbacks", d.gradient_fallbacks},
          {"box_contacts", d.box_contacts},
          {"slope_contacts", d.slope_contacts}};
}

inline nlohmann::json to_json(const VerificationCheck& c) {
  return {{"name", c.name},
          {"applicable", c.applicable},
          {"passed", c.passed},
          {"observed", c.observed},
          {"bound", c.bound}};
}

inline nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"passed", r.passed()}, {"checks", std::move(checks)}};
}

inline nlohmann::json to_json(const Profile& p) {
  return {{"t", p.t}, {"u", p.u}};
}

inline Profile profile_from_json(const nlohmann::json& j) {
  Profile p;
  try {
    p.t = j.at("t").get<std::vector<double>>();
    p.u = j.at("u").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw io_error(std::string("profile_from_json: ") + e.what());
  }
  validate_profile(p);
  return p;
}

inline void write_profile_json(const std::string& path, const Profile& p) {
  std::ofstream os(path);
  if (!os) throw io_error("write_profile_json: cannot open " + path);
  os << to_json(p).dump(2) << "\n";
  if (!os) throw io_error("write_profile_json: stream write failed");
}

inline Profile read_profile_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw io_error("read_profile_json: cannot open " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw io_error(std::string("read_profile_json: ") + e.what());
  }
  return profile_from_json(j);
}

inline nlohmann::json to_json(const StripSliceReport& r) {
  return {{"total", r.total},
          {"width", r.width},
          {"slice_actions", r.slice_actions},
          {"mean_slice", r.mean_slice},
          {"min_slice", r.min_slice},
          {"margin_vs_mean", r.margin_vs_mean},
          {"margin_vs_min", r.margin_vs_min},
          {"max_abs_gy", r.max_abs_gy},
          {"strict", r.strict},
          {"passed", r.passed}};
}

}  // namespace hbi

#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "hbi/errors.hpp"

namespace hbi {

// Piecewise-linear transition profile: nodes t[0] < ... < t[N] with values
// u[i]. Cell i spans [t[i], t[i+1]] and carries the constant slope
// (u[i+1] - u[i]) / (t[i+1] - t[i]). Admissible profiles keep |slope| <= 1.
struct Profile {
  std::vector<double> t;
  std::vector<double> u;

  std::size_t nodes() const { return t.size(); }
  std::size_t cells() const { return t.empty() ? 0 : t.size() - 1; }

  double dt(std::size_t i) const { return t[i + 1] - t[i]; }
  double slope(std::size_t i) const { return (u[i + 1] - u[i]) / dt(i); }

  double span() const { return t.back() - t.front(); }

  double max_abs_slope() const {
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
      m = std::max(m, std::abs(slope(i)));
    return m;
  }

  // Uniform within a relative tolerance on the cell width.
  bool uniform(double rel_tol = 1e-9) const {
    if (cells() < 1) return true;
    const double h = span() / cells();
    for (std::size_t i = 0; i < cells(); ++i)
      if (std::abs(dt(i) - h) > rel_tol * h) return false;
    return true;
  }

  // Piecewise-linear interpolation; x must lie inside [t.front(), t.back()].
  double value_at(double x) const {
    if (x < t.front() || x > t.back()) {
      std::ostringstream msg;
      msg << "Profile::value_at: " << x << " outside [" << t.front() << ", "
          << t.back() << "]";
      throw domain_error(msg.str());
    }
    std::size_t lo = 0, hi = t.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (t[mid] <= x ? lo : hi) = mid;
    }
    const double w = (x - t[lo]) / (t[hi] - t[lo]);
    return u[lo] + w * (u[hi] - u[lo]);
  }

  // Location of the first sign change (linear interpolation inside the
  // bracketing cell). Requires one to exist.
  double zero_crossing() const {
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
      if (u[i] == 0.0) return t[i];
      if ((u[i] < 0.0) != (u[i + 1] < 0.0)) {
        return t[i] + dt(i) * (0.0 - u[i]) / (u[i + 1] - u[i]);
      }
    }
    if (u.back() == 0.0) return t.back();
    throw domain_error("Profile::zero_crossing: no sign change");
  }
};

// Structural checks shared by every consumer: matching sizes, at least one
// cell, strictly increasing finite nodes, finite values.
inline void validate_profile(const Profile& p) {
  if (p.t.size() != p.u.size())
    throw domain_error("profile: node/value size mismatch");
  if (p.t.size() < 2) throw domain_error("profile: fewer than two nodes");
  for (std::size_t i = 0; i < p.t.size(); ++i) {
    if (!std::isfinite(p.t[i]) || !std::isfinite(p.u[i]))
      throw domain_error("profile: non-finite entry");
    if (i > 0 && !(p.t[i] > p.t[i - 1])) {
      std::ostringstream msg;
      msg << "profile: nodes not strictly increasing at index " << i;
      throw domain_error(msg.str());
    }
  }
}

// Samples a function onto a uniform grid with n_cells cells.
inline Profile make_profile(double t0, double t1, std::size_t n_cells,
                            const std::function<double(double)>& f) {
  if (!(t1 > t0)) throw parameter_error("make_profile: empty interval");
  if (n_cells < 1) throw parameter_error("make_profile: no cells");
  Profile p;
  p.t.resize(n_cells + 1);
  p.u.resize(n_cells + 1);
  for (std::size_t i = 0; i <= n_cells; ++i) {
    const double x = t0 + (t1 - t0) * double(i) / double(n_cells);
    p.t[i] = x;
    p.u[i] = f(x);
  }
  p.t.back() = t1;
  p.u.back() = f(t1);
  return p;
}

// Same nodes, time axis shifted so the first sign change sits at zero.
inline Profile center_at_zero_crossing(const Profile& p) {
  const double t0 = p.zero_crossing();
  Profile q = p;
  for (double& x : q.t) x -= t0;
  return q;
}

}  // namespace hbi

#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "hbi/errors.hpp"
#include "hbi/profile.hpp"

namespace hbi {

namespace detail {
// Copy of p with a node at x (interpolated value). A node equal to x is
// reused, so node-aligned calls are exact no-ops.
inline Profile insert_node(const Profile& p, double x) {
  if (x < p.t.front() || x > p.t.back())
    throw parameter_error("insert_node: point outside the domain");
  Profile q = p;
  auto it = std::lower_bound(q.t.begin(), q.t.end(), x);
  if (it != q.t.end() && *it == x) return q;
  const std::size_t k = std::size_t(it - q.t.begin());
  q.t.insert(q.t.begin() + k, x);
  q.u.insert(q.u.begin() + k, p.value_at(x));
  return q;
}
}  // namespace detail

// Values projected onto [lo, hi]. The projection is 1-Lipschitz, so slopes
// never grow; with a potential that vanishes on the well boundary and is
// nonnegative outside, the action never grows either.
inline Profile clamp(const Profile& p, double lo = -1.0, double hi = 1.0) {
  validate_profile(p);
  if (!(hi > lo)) throw parameter_error("clamp: empty interval");
  Profile q = p;
  for (double& v : q.u) v = std::min(hi, std::max(lo, v));
  return q;
}

// Monotone rearrangement: the same multiset of values in ascending order on
// the same uniform grid. Sorting cannot widen the largest gap between
// consecutive values, so admissible inputs stay admissible; among all
// arrangements with admissible slopes the sorted one minimizes any convex
// symmetric kinetic sum.
inline Profile monotone_rearrange(const Profile& p) {
  validate_profile(p);
  if (!p.uniform())
    throw unsupported_grid_error("monotone_rearrange: grid must be uniform");
  Profile q = p;
  std::sort(q.u.begin(), q.u.end());
  return q;
}

// Time stretch of the window [t0, t1] by 1/(1-theta): nodes inside the
// window spread out, slopes there shrink by (1-theta), everything to the
// right shifts by (t1-t0) * theta/(1-theta). Values are untouched, so the
// transformed profile is exact, not resampled; window edges become nodes.
inline Profile stretch(const Profile& p, double t0, double t1, double theta) {
  validate_profile(p);
  if (!(theta >= 0.0) || !(theta < 1.0))
    throw parameter_error("stretch: theta outside [0, 1)");
  if (!(t0 < t1)) throw parameter_error("stretch: empty window");
  if (t0 < p.t.front() || t1 > p.t.back())
    throw parameter_error("stretch: window outside the domain");
  Profile q = detail::insert_node(detail::insert_node(p, t0), t1);
  const double scale = 1.0 / (1.0 - theta);
  const double shift = (t1 - t0) * (scale - 1.0);
  for (double& t : q.t) {
    if (t <= t0) continue;
    t = t <= t1 ? t0 + (t - t0) * scale : t + shift;
  }
  return q;
}

// Removes the time window (t1, t2] and shifts the tail left. The profile
// must return to (nearly) the same value across the window; the junction
// keeps the left value, so a mismatch within tol perturbs only the first
// tail cell. With a nonnegative integrand this surgery never raises the
// action.
inline Profile excise(const Profile& p, double t1, double t2,
                      double tol = 1e-9) {
  validate_profile(p);
  if (!(t1 < t2)) throw parameter_error("excise: empty window");
  if (t1 < p.t.front() || t2 > p.t.back())
    throw parameter_error("excise: window outside the domain");
  const double gap = std::abs(p.value_at(t1) - p.value_at(t2));
  if (gap > tol) {
    std::ostringstream msg;
    msg << "excise: junction values differ by " << gap << " > " << tol;
    throw surgery_error(msg.str());
  }
  const Profile q = detail::insert_node(detail::insert_node(p, t1), t2);
  const std::size_t i1 =
      std::size_t(std::lower_bound(q.t.begin(), q.t.end(), t1) - q.t.begin());
  const std::size_t i2 =
      std::size_t(std::lower_bound(q.t.begin(), q.t.end(), t2) - q.t.begin());
  Profile out;
  out.t.assign(q.t.begin(), q.t.begin() + i1 + 1);
  out.u.assign(q.u.begin(), q.u.begin() + i1 + 1);
  for (std::size_t j = i2 + 1; j < q.t.size(); ++j) {
    out.t.push_back(q.t[j] - (t2 - t1));
    out.u.push_back(q.u[j]);
  }
  if (out.t.size() < 2) throw surgery_error("excise: nothing would remain");
  return out;
}

// Odd reflection of a half-line profile through the origin. Requires the
// domain to start at t = 0 and the value there to vanish, both within tol;
// the center node is snapped exactly.
inline Profile odd_reflect(const Profile& p, double tol = 1e-9) {
  validate_profile(p);
  if (std::abs(p.t.front()) > tol)
    throw surgery_error("odd_reflect: domain must start at t = 0");
  if (std::abs(p.u.front()) > tol)
    throw surgery_error("odd_reflect: value at the origin must vanish");
  Profile out;
  const std::size_t n = p.nodes();
  out.t.reserve(2 * n - 1);
  out.u.reserve(2 * n - 1);
  for (std::size_t i = n; i-- > 1;) {
    out.t.push_back(-p.t[i]);
    out.u.push_back(-p.u[i]);
  }
  out.t.push_back(0.0);
  out.u.push_back(0.0);
  for (std::size_t i = 1; i < n; ++i) {
    out.t.push_back(p.t[i]);
    out.u.push_back(p.u[i]);
  }
  return out;
}

// Piecewise-linear resampling onto a uniform grid over the same span. New
// nodes sit on the old graph, so the largest slope never grows.
inline Profile resample_uniform(const Profile& p, std::size_t n_cells) {
  validate_profile(p);
  if (n_cells < 1) throw parameter_error("resample_uniform: no cells");
  Profile out;
  out.t.resize(n_cells + 1);
  out.u.resize(n_cells + 1);
  const double t0 = p.t.front(), t1 = p.t.back();
  // Endpoints are copied, not interpolated: t0 + (t1 - t0) may round past t1.
  for (std::size_t i = 1; i < n_cells; ++i) {
    const double x = t0 + (t1 - t0) * double(i) / double(n_cells);
    out.t[i] = x;
    out.u[i] = p.value_at(x);
  }
  out.t.front() = t0;
  out.u.front() = p.u.front();
  out.t.back() = t1;
  out.u.back() = p.u.back();
  return out;
}

}  // namespace hbi

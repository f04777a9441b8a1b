#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hbi/errors.hpp"
#include "hbi/functional.hpp"
#include "hbi/kernel.hpp"
#include "hbi/numeric.hpp"
#include "hbi/potential.hpp"
#include "hbi/profile.hpp"
#include "hbi/transforms.hpp"
#include "hbi/weight.hpp"

namespace hbi {

// ---------------------------------------------------------------------------
// Quadrature construction of the connection for a constant unit weight.
// ---------------------------------------------------------------------------

// The autonomous conservation law 1 - 1/sqrt(1 - u'^2) + W(u) = 0 inverts to
//   dt/du = q / sqrt(q^2 - 1),   q = 1 + W(u),
// which is integrated on a symmetric u-grid between the pinned values
// -(1 - delta_bc) and 1 - delta_bc, anchored so that u = 0 sits at t = 0.
// The table is then resampled onto a uniform t-grid (cell width <= step)
// with cubic Hermite interpolation, using the analytic slopes
// sqrt(q^2 - 1)/q at the table nodes.
inline Profile heteroclinic_by_quadrature(const Potential& W,
                                          double delta_bc = 1e-3,
                                          double step = 1e-4) {
  if (!(delta_bc > 0.0) || !(delta_bc < 1.0))
    throw parameter_error("heteroclinic_by_quadrature: delta_bc outside (0, 1)");
  if (!(step > 0.0))
    throw parameter_error("heteroclinic_by_quadrature: step must be positive");

  const double umax = 1.0 - delta_bc;
  const std::size_t half = std::size_t(std::ceil(umax / step));
  const std::size_t n = 2 * half;  // coarse segments in u

  auto q_of = [&](double v) { return 1.0 + W.value(v); };
  auto dtdu = [&](double v) {
    const double q = q_of(v);
    const double r = q * q - 1.0;
    if (!(r > 0.0)) {
      std::ostringstream msg;
      msg << "heteroclinic_by_quadrature: potential not positive at u = " << v
          << "; the transition time diverges";
      throw degenerate_well_error(msg.str());
    }
    return q / std::sqrt(r);
  };

  // Near the wells dt/du blows up, so a uniform u-grid would leave table
  // segments spanning a long stretch of t and the Hermite resample below
  // would lose accuracy there. Subdivide each coarse segment until its
  // estimated t-extent stays within a small multiple of the output step.
  const double t_cap = 50.0 * step;
  std::vector<double> u;
  u.reserve(n + 1);
  std::size_t center = 0;
  for (std::size_t j = 0; j <= n; ++j) {
    double v = -umax + 2.0 * umax * double(j) / double(n);
    if (j == half) v = 0.0;
    if (j == 0) v = -umax;
    if (j == n) v = umax;
    if (j > 0) {
      const double prev = u.back();
      const double mid = 0.5 * (prev + v);
      const double est =
          (v - prev) * std::max({dtdu(prev), dtdu(mid), dtdu(v)});
      const std::size_t parts =
          est > t_cap ? std::size_t(std::ceil(est / t_cap)) : 1;
      for (std::size_t k = 1; k < parts; ++k)
        u.push_back(prev + (v - prev) * double(k) / double(parts));
    }
    if (j == half) center = u.size();
    u.push_back(v);
  }

  const std::size_t m = u.size() - 1;  // refined segments
  std::vector<double> t(m + 1), slope(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    const double q = q_of(u[j]);
    if (!(q > 1.0)) {
      std::ostringstream msg;
      msg << "heteroclinic_by_quadrature: potential not positive at u = "
          << u[j] << "; the transition time diverges";
      throw degenerate_well_error(msg.str());
    }
    slope[j] = std::sqrt(q * q - 1.0) / q;
  }

  t[center] = 0.0;
  for (std::size_t j = center; j < m; ++j)
    t[j + 1] = t[j] + adaptive_simpson(dtdu, u[j], u[j + 1], 1e-12);
  for (std::size_t j = center; j-- > 0;)
    t[j] = t[j + 1] - adaptive_simpson(dtdu, u[j], u[j + 1], 1e-12);

  // Uniform output grid with cell width <= step, values from cubic Hermite
  // interpolation of the (t, u, du/dt) table.
  const double span = t.back() - t.front();
  const std::size_t n_out = std::max<std::size_t>(
      2, std::size_t(std::ceil(span / step)));
  Profile out;
  out.t.resize(n_out + 1);
  out.u.resize(n_out + 1);
  std::size_t seg = 0;
  for (std::size_t i = 0; i <= n_out; ++i) {
    const double x = t.front() + span * double(i) / double(n_out);
    out.t[i] = x;
    while (seg + 2 < t.size() && t[seg + 1] < x) ++seg;
    const double h = t[seg + 1] - t[seg];
    const double w = std::min(1.0, std::max(0.0, (x - t[seg]) / h));
    const double w2 = w * w, w3 = w2 * w;
    out.u[i] = (2.0 * w3 - 3.0 * w2 + 1.0) * u[seg] +
               (w3 - 2.0 * w2 + w) * h * slope[seg] +
               (-2.0 * w3 + 3.0 * w2) * u[seg + 1] +
               (w3 - w2) * h * slope[seg + 1];
  }
  out.t.front() = t.front();
  out.u.front() = -umax;
  out.t.back() = t.back();
  out.u.back() = umax;
  return out;
}

// ---------------------------------------------------------------------------
// Phase flow of the dynamics u' = p / sqrt(1 + p^2), p' = a(t) W'(u).
// ---------------------------------------------------------------------------

struct PhasePoint {
  double t = 0;
  double u = 0;
  double p = 0;
};

// One classical fourth-order step.
inline PhasePoint phase_step(const PhasePoint& x, double dt,
                             const Potential& W, const Weight& a) {
  auto fu = [](double p) { return p / std::sqrt(1.0 + p * p); };
  auto fp = [&](double t, double u) { return a(t) * W.deriv(u); };
  const double k1u = fu(x.p), k1p = fp(x.t, x.u);
  const double k2u = fu(x.p + 0.5 * dt * k1p),
               k2p = fp(x.t + 0.5 * dt, x.u + 0.5 * dt * k1u);
  const double k3u = fu(x.p + 0.5 * dt * k2p),
               k3p = fp(x.t + 0.5 * dt, x.u + 0.5 * dt * k2u);
  const double k4u = fu(x.p + dt * k3p), k4p = fp(x.t + dt, x.u + dt * k3u);
  PhasePoint y;
  y.t = x.t + dt;
  y.u = x.u + dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
  y.p = x.p + dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
  return y;
}

struct ShootResult {
  Profile profile;
  std::vector<double> momentum;  // p at each node
};

// Integrates the flow from (u0, p0) at t0 to t1 on a uniform grid.
inline ShootResult shoot(const Potential& W, const Weight& a, double u0,
                         double p0, double t0, double t1,
                         std::size_t n_steps) {
  if (!(t1 > t0)) throw parameter_error("shoot: empty time interval");
  if (n_steps < 1) throw parameter_error("shoot: no steps");
  ShootResult r;
  r.profile.t.resize(n_steps + 1);
  r.profile.u.resize(n_steps + 1);
  r.momentum.resize(n_steps + 1);
  PhasePoint x{t0, u0, p0};
  r.profile.t[0] = t0;
  r.profile.u[0] = u0;
  r.momentum[0] = p0;
  const double dt = (t1 - t0) / double(n_steps);
  for (std::size_t i = 1; i <= n_steps; ++i) {
    x = phase_step(x, dt, W, a);
    x.t = t0 + (t1 - t0) * double(i) / double(n_steps);
    r.profile.t[i] = x.t;
    r.profile.u[i] = x.u;
    r.momentum[i] = x.p;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Direct minimization of the discrete action.
// ---------------------------------------------------------------------------

struct SolverConfig {
  double half_length = 10.0;  // domain [-L, L], or [0, L] for the odd solve
  std::size_t n_cells = 2000;
  double delta_slope = 1e-6;  // slope cap 1 - delta_slope
  double delta_bc = 1e-3;     // pinned end values +-(1 - delta_bc)
  // Sup norm of the projected gradient step.  Gradient entries scale with the
  // cell width h, so a fixed absolute tolerance tightens as the grid refines;
  // 1e-8 stays above the line-search rounding floor up to a few thousand
  // cells while still resolving the action to ~1e-12.
  double tol = 1e-8;
  std::size_t max_iter = 500;
  int regularization = 0;  // 0: exact kernel; n >= 2: regularized kernel
  unsigned seed = 12345;
  std::size_t starts = 1;  // multistart count (first start is the ramp)

  void validate() const {
    if (!(half_length > 0.0)) throw config_error("config: half_length <= 0");
    if (n_cells < 16) throw config_error("config: fewer than 16 cells");
    if (!(delta_slope > 0.0) || !(delta_slope < 1.0))
      throw config_error("config: delta_slope outside (0, 1)");
    if (!(delta_bc > 0.0) || !(delta_bc < 1.0))
      throw config_error("config: delta_bc outside (0, 1)");
    if (!(tol > 0.0)) throw config_error("config: tol <= 0");
    if (max_iter < 1) throw config_error("config: max_iter < 1");
    if (starts < 1) throw config_error("config: starts < 1");
    if (regularization != 0 && regularization < 2)
      throw config_error("config: regularization index must be 0 or >= 2");
    // Pinned values must be reachable under the slope cap; the direct and
    // half-line problems impose the same ratio.
    if (1.0 - delta_bc > half_length * (1.0 - delta_slope))
      throw config_error(
          "config: pinned values unreachable under the slope cap");
  }
};

struct SolverDiagnostics {
  std::size_t iterations = 0;          // of the winning start
  std::size_t start_index = 0;         // which start won
  std::size_t starts_converged = 0;
  double projected_gradient = 0;       // at the solution
  double objective = 0;
  std::size_t gradient_fallbacks = 0;
  std::size_t box_contacts = 0;        // nodes on |u| = 1
  std::size_t slope_contacts = 0;      // cells on the slope cap
};

struct MinimizeResult {
  Profile profile;
  ActionBreakdown breakdown;
  SolverDiagnostics diagnostics;
};

// Thrown when no start meets the tolerance; carries the best iterate so the
// caller can inspect how close the run came.
struct non_convergence_error : std::runtime_error {
  Profile best;
  double projected_gradient = 0;
  std::size_t iterations = 0;
  non_convergence_error(const std::string& msg, Profile b, double pg,
                        std::size_t it)
      : std::runtime_error(msg),
        best(std::move(b)),
        projected_gradient(pg),
        iterations(it) {}
};

namespace detail {

struct KernelOps {
  std::function<double(double)> value, deriv, second;
};

inline KernelOps exact_kernel_ops() {
  return {[](double s) { return kinetic_density(s); },
          [](double s) { return kinetic_flux(s); },
          [](double s) { return kinetic_flux_deriv(s); }};
}

inline KernelOps regularized_kernel_ops(const RegularizedKernel& k) {
  return {[k](double s) { return k.density(s); },
          [k](double s) { return k.density_deriv(s); },
          [k](double s) { return k.density_second(s); }};
}

// Pinned discrete problem on a uniform grid: endpoints fixed, the unknowns
// are the interior node values x[0..n-2] (node i = index + 1). The feasible
// set is the box |u| <= 1 intersected with the slope polytope
// |u_{i+1} - u_i| <= cap * h.
struct PinnedProblem {
  double ta = 0, tb = 0, h = 0;
  std::size_t n_cells = 0;
  double u_left = 0, u_right = 0;
  double cap = 0;  // max |slope|
  KernelOps kernel;
  const Potential* W = nullptr;
  const Weight* a = nullptr;
  std::function<double(double)> wderiv;

  void init(double ta_, double tb_, std::size_t n, double ul, double ur,
            double cap_, KernelOps ops, const Potential& W_,
            const Weight& a_) {
    ta = ta_;
    tb = tb_;
    n_cells = n;
    h = (tb - ta) / double(n);
    u_left = ul;
    u_right = ur;
    cap = cap_;
    kernel = std::move(ops);
    W = &W_;
    a = &a_;
    const Potential* wp = W;
    wderiv = [wp](double v) { return wp->deriv(v); };
  }

  std::size_t unknowns() const { return n_cells - 1; }
  double node_time(std::size_t i) const {
    return ta + (tb - ta) * double(i) / double(n_cells);
  }
  double node_value(const std::vector<double>& x, std::size_t i) const {
    if (i == 0) return u_left;
    if (i == n_cells) return u_right;
    return x[i - 1];
  }

  Profile to_profile(const std::vector<double>& x) const {
    Profile p;
    p.t.resize(n_cells + 1);
    p.u.resize(n_cells + 1);
    for (std::size_t i = 0; i <= n_cells; ++i) {
      p.t[i] = node_time(i);
      p.u[i] = node_value(x, i);
    }
    return p;
  }

  double value(const std::vector<double>& x) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < n_cells; ++i) {
      const double v0 = node_value(x, i), v1 = node_value(x, i + 1);
      const double s = (v1 - v0) / h;
      const double tm = 0.5 * (node_time(i) + node_time(i + 1));
      sum += (kernel.value(s) + (*a)(tm)*W->value(0.5 * (v0 + v1))) * h;
    }
    return sum;
  }

  void gradient(const std::vector<double>& x, std::vector<double>& g) const {
    g.assign(unknowns(), 0.0);
    for (std::size_t i = 0; i < n_cells; ++i) {
      const double v0 = node_value(x, i), v1 = node_value(x, i + 1);
      const double s = (v1 - v0) / h;
      const double tm = 0.5 * (node_time(i) + node_time(i + 1));
      const double flux = kernel.deriv(s);
      const double pot = 0.5 * h * (*a)(tm)*W->deriv(0.5 * (v0 + v1));
      if (i >= 1) g[i - 1] += -flux + pot;       // d/d v0
      if (i + 1 <= n_cells - 1) g[i] += flux + pot;  // d/d v1
    }
  }

  // Tridiagonal Hessian: diag[k] couples x[k] with itself, off[k] couples
  // x[k] and x[k+1]. The potential curvature uses a finite difference of
  // the supplied first derivative.
  void hessian(const std::vector<double>& x, std::vector<double>& diag,
               std::vector<double>& off) const {
    diag.assign(unknowns(), 0.0);
    off.assign(unknowns() > 0 ? unknowns() - 1 : 0, 0.0);
    for (std::size_t i = 0; i < n_cells; ++i) {
      const double v0 = node_value(x, i), v1 = node_value(x, i + 1);
      const double s = (v1 - v0) / h;
      const double tm = 0.5 * (node_time(i) + node_time(i + 1));
      const double kin = kernel.second(s) / h;
      const double pot =
          0.25 * h * (*a)(tm)*central_difference(wderiv, 0.5 * (v0 + v1));
      if (i >= 1) diag[i - 1] += kin + pot;
      if (i + 1 <= n_cells - 1) diag[i] += kin + pot;
      if (i >= 1 && i + 1 <= n_cells - 1) off[i - 1] += -kin + pot;
    }
  }

  // Projection onto the feasible set by cyclic clipping: box first, then
  // one midpoint-preserving pass over violated slope pairs (pinned ends
  // push the whole correction onto the free node). Finishes with a
  // forward/backward chain pass, which is guaranteed feasible.
  void project(std::vector<double>& x) const {
    const double cs = cap * h;  // max |du| per cell
    auto box = [&] {
      bool changed = false;
      for (double& v : x) {
        const double c = std::min(1.0, std::max(-1.0, v));
        changed |= c != v;
        v = c;
      }
      return changed;
    };
    for (int sweep = 0; sweep < 50; ++sweep) {
      bool changed = box();
      for (std::size_t i = 0; i < n_cells; ++i) {
        const double v0 = node_value(x, i), v1 = node_value(x, i + 1);
        const double d = v1 - v0;
        if (std::abs(d) <= cs) continue;
        changed = true;
        const double sgn = d > 0 ? 1.0 : -1.0;
        if (i == 0) {
          x[0] = u_left + sgn * cs;
        } else if (i + 1 == n_cells) {
          x[i - 1] = u_right - sgn * cs;
        } else {
          const double m = 0.5 * (v0 + v1);
          x[i - 1] = m - sgn * 0.5 * cs;
          x[i] = m + sgn * 0.5 * cs;
        }
      }
      if (!changed) return;
    }
    // Deterministic cleanup: chain from the left pin, then from the right
    // pin. Feasibility of the pinned pair was checked in the config.
    box();
    double prev = u_left;
    for (std::size_t k = 0; k < x.size(); ++k) {
      x[k] = std::min(prev + cs, std::max(prev - cs, x[k]));
      prev = x[k];
    }
    double next = u_right;
    for (std::size_t k = x.size(); k-- > 0;) {
      x[k] = std::min(next + cs, std::max(next - cs, x[k]));
      next = x[k];
    }
  }

  double projected_gradient_norm(const std::vector<double>& x,
                                 const std::vector<double>& g) const {
    std::vector<double> y(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) y[k] = x[k] - g[k];
    project(y);
    double m = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
      m = std::max(m, std::abs(x[k] - y[k]));
    return m;
  }
};

// LDL^T solve of (T + shift I) d = rhs for a symmetric tridiagonal T.
// Returns false on a non-positive pivot.
inline bool tridiag_solve(const std::vector<double>& diag,
                          const std::vector<double>& off, double shift,
                          const std::vector<double>& rhs,
                          std::vector<double>& sol) {
  const std::size_t n = diag.size();
  if (n == 0) return false;
  double scale = 0.0;
  for (double v : diag) scale = std::max(scale, std::abs(v));
  const double floor = 1e-12 * (1.0 + scale);
  std::vector<double> dh(n), l(n > 0 ? n - 1 : 0), y(n);
  dh[0] = diag[0] + shift;
  if (dh[0] <= floor) return false;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    l[i] = off[i] / dh[i];
    dh[i + 1] = diag[i + 1] + shift - l[i] * off[i];
    if (dh[i + 1] <= floor) return false;
  }
  y[0] = rhs[0];
  for (std::size_t i = 1; i < n; ++i) y[i] = rhs[i] - l[i - 1] * y[i - 1];
  sol.assign(n, 0.0);
  sol[n - 1] = y[n - 1] / dh[n - 1];
  for (std::size_t i = n - 1; i-- > 0;)
    sol[i] = y[i] / dh[i] - l[i] * sol[i + 1];
  return true;
}

struct NewtonOutcome {
  std::vector<double> x;
  double objective = 0;
  double projected_gradient = 0;
  std::size_t iterations = 0;
  std::size_t gradient_fallbacks = 0;
  bool converged = false;
};

// Projected modified Newton: tridiagonal LDL^T with an escalating shift on
// bad pivots, Armijo backtracking along the projected step, and a projected
// gradient fallback when the Newton direction stalls.
inline NewtonOutcome newton_minimize(const PinnedProblem& prob,
                                     std::vector<double> x, double tol,
                                     std::size_t max_iter) {
  NewtonOutcome out;
  prob.project(x);
  double fx = prob.value(x);
  std::vector<double> g, diag, off, dir, xn;
  prob.gradient(x, g);

  auto try_step = [&](const std::vector<double>& d, double alpha0,
                      int halvings, double& fn) -> bool {
    double alpha = alpha0;
    for (int ls = 0; ls <= halvings; ++ls, alpha *= 0.5) {
      xn.resize(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) xn[k] = x[k] + alpha * d[k];
      prob.project(xn);
      double pred = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k)
        pred += g[k] * (xn[k] - x[k]);
      if (!(pred < 0.0)) continue;
      fn = prob.value(xn);
      if (fn <= fx + 1e-4 * pred) return true;
    }
    return false;
  };

  while (out.iterations < max_iter) {
    out.projected_gradient = prob.projected_gradient_norm(x, g);
    if (out.projected_gradient <= tol) {
      out.converged = true;
      break;
    }
    ++out.iterations;

    prob.hessian(x, diag, off);
    double scale = 0.0;
    for (double v : diag) scale = std::max(scale, std::abs(v));
    std::vector<double> rhs(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) rhs[k] = -g[k];
    double shift = 0.0;
    bool factored = false;
    for (int attempt = 0; attempt < 16 && !factored; ++attempt) {
      factored = tridiag_solve(diag, off, shift, rhs, dir);
      if (!factored)
        shift = shift == 0.0 ? 1e-8 * (1.0 + scale) : shift * 10.0;
    }

    double fn = fx;
    bool moved = factored && try_step(dir, 1.0, 40, fn);
    if (!moved) {
      ++out.gradient_fallbacks;
      dir.assign(g.size(), 0.0);
      for (std::size_t k = 0; k < g.size(); ++k) dir[k] = -g[k];
      moved = try_step(dir, 1.0 / (1.0 + scale), 60, fn);
    }
    if (!moved) break;  // stalled; the final check decides

    x.swap(xn);
    fx = fn;
    prob.gradient(x, g);
  }
  out.projected_gradient = prob.projected_gradient_norm(x, g);
  out.converged = out.projected_gradient <= tol;
  out.x = std::move(x);
  out.objective = fx;
  return out;
}

// Start profiles: 0 is the straight ramp; 1 is a delayed ramp when the
// weight turns positive only past a threshold; the rest are seeded low-mode
// perturbations of the ramp.
inline std::vector<double> start_values(const PinnedProblem& prob,
                                        std::size_t index, std::mt19937& rng,
                                        const Weight& a) {
  const std::size_t m = prob.unknowns();
  std::vector<double> x(m);
  const double span = prob.tb - prob.ta;
  for (std::size_t k = 0; k < m; ++k) {
    const double w = double(k + 1) / double(prob.n_cells);
    x[k] = prob.u_left + (prob.u_right - prob.u_left) * w;
  }
  const double tpos = a.positivity_threshold;
  if (index == 1 && !a.is_constant && std::isfinite(tpos) && tpos > prob.ta &&
      tpos < prob.tb) {
    // Hold the left value while the weight is not yet positive.
    for (std::size_t k = 0; k < m; ++k) {
      const double t = prob.node_time(k + 1);
      x[k] = t <= tpos ? prob.u_left
                       : prob.u_left + (prob.u_right - prob.u_left) *
                                           (t - tpos) / (prob.tb - tpos);
    }
  } else if (index >= 1) {
    const double pi = std::acos(-1.0);
    std::uniform_real_distribution<double> amp(-0.15, 0.15);
    for (int mode = 1; mode <= 3; ++mode) {
      const double c = amp(rng) / double(mode);
      for (std::size_t k = 0; k < m; ++k) {
        const double t = prob.node_time(k + 1);
        x[k] += c * std::sin(double(mode) * pi * (t - prob.ta) / span);
      }
    }
  }
  prob.project(x);
  return x;
}

inline MinimizeResult minimize_pinned(const SolverConfig& cfg,
                                      const Potential& W, const Weight& a,
                                      double ta, double tb, double ul,
                                      double ur) {
  PinnedProblem prob;
  KernelOps ops = cfg.regularization >= 2
                      ? regularized_kernel_ops(
                            regularized_kernel(cfg.regularization))
                      : exact_kernel_ops();
  prob.init(ta, tb, cfg.n_cells, ul, ur, 1.0 - cfg.delta_slope,
            std::move(ops), W, a);

  std::mt19937 rng(cfg.seed);
  std::optional<NewtonOutcome> best;
  std::size_t best_start = 0, converged = 0;
  NewtonOutcome closest;  // best failed attempt, for the error payload
  for (std::size_t s = 0; s < cfg.starts; ++s) {
    NewtonOutcome o = newton_minimize(prob, start_values(prob, s, rng, a),
                                      cfg.tol, cfg.max_iter);
    if (o.converged) {
      ++converged;
      if (!best || o.objective < best->objective) {
        best = std::move(o);
        best_start = s;
      }
    } else if (!best && (closest.x.empty() ||
                         o.projected_gradient < closest.projected_gradient)) {
      closest = std::move(o);
    }
  }
  if (!best) {
    std::ostringstream msg;
    msg << "minimize: no start met tol = " << cfg.tol
        << "; best projected gradient " << closest.projected_gradient
        << " after " << closest.iterations << " iterations";
    throw non_convergence_error(msg.str(), prob.to_profile(closest.x),
                                closest.projected_gradient,
                                closest.iterations);
  }

  MinimizeResult res;
  res.profile = prob.to_profile(best->x);
  res.breakdown =
      cfg.regularization >= 2
          ? regularized_action(res.profile, W, a,
                               regularized_kernel(cfg.regularization))
          : action(res.profile, W, a);
  res.diagnostics.iterations = best->iterations;
  res.diagnostics.start_index = best_start;
  res.diagnostics.starts_converged = converged;
  res.diagnostics.projected_gradient = best->projected_gradient;
  res.diagnostics.objective = best->objective;
  res.diagnostics.gradient_fallbacks = best->gradient_fallbacks;
  for (double v : res.profile.u)
    if (std::abs(v) >= 1.0 - 1e-12) ++res.diagnostics.box_contacts;
  const double cs = prob.cap;
  for (std::size_t i = 0; i < res.profile.cells(); ++i)
    if (std::abs(res.profile.slope(i)) >= cs - 1e-12)
      ++res.diagnostics.slope_contacts;
  return res;
}

}  // namespace detail

// Minimizes the discrete action over profiles on [-L, L] pinned at
// -+(1 - delta_bc).
inline MinimizeResult direct_minimize(const SolverConfig& cfg,
                                      const Potential& W, const Weight& a) {
  cfg.validate();
  const double ub = 1.0 - cfg.delta_bc;
  return detail::minimize_pinned(cfg, W, a, -cfg.half_length, cfg.half_length,
                                 -ub, ub);
}

// Half-line variant on [0, L]: the origin is pinned at zero, the right end
// at 1 - delta_bc. odd_reflect of the result is the full-line candidate.
inline MinimizeResult minimize_odd(const SolverConfig& cfg, const Potential& W,
                                   const Weight& a) {
  cfg.validate();
  return detail::minimize_pinned(cfg, W, a, 0.0, cfg.half_length, 0.0,
                                 1.0 - cfg.delta_bc);
}

// ---------------------------------------------------------------------------
// Verification of a claimed minimizer.
// ---------------------------------------------------------------------------

struct VerifyOptions {
  double slope_tol = 1e-3;        // slack over the a priori slope bound
  double conservation_tol = 1e-3;
  double el_tol = 1e-3;
  double stretch_floor = -1e-4;   // minimum allowed action delta
  // Allowed nodal-action drop under sorting. On an interval longer than the
  // natural transition the pinned minimizer overshoots the boundary value
  // and turns back, so its sorted rearrangement (which ignores the pins)
  // genuinely wins a small lobe of kinetic action; with end values pinned
  // 1e-3 inside the wells that lobe is of order 1e-6.
  double rearrange_tol = 1e-5;
  double crossing_eps = 0.2;      // band width for the lower bound
  int stretch_bands = 20;
  unsigned seed = 777;
};

struct VerificationCheck {
  std::string name;
  bool applicable = false;
  bool passed = true;  // vacuously true when not applicable
  double observed = 0;
  double bound = 0;
};

struct VerificationReport {
  std::vector<VerificationCheck> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (c.applicable && !c.passed) return false;
    return true;
  }
  const VerificationCheck& check(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return c;
    throw parameter_error("VerificationReport: unknown check " + name);
  }
};

// Runs the independent necessary conditions a minimizer must satisfy:
// the a priori slope bound, the conservation law, the Euler-Lagrange
// residual, non-negative action deltas under band stretches, no action drop
// under monotone rearrangement, and the band-crossing lower bound. Checks
// whose hypotheses the weight does not meet are reported non-applicable.
inline VerificationReport verify_minimizer(const Profile& p,
                                           const Potential& W, const Weight& a,
                                           const VerifyOptions& opt = {}) {
  validate_profile(p);
  VerificationReport rep;
  const bool autonomous = a.is_constant;
  const double c = autonomous ? a(0.0) : std::numeric_limits<double>::quiet_NaN();

  {
    VerificationCheck ck;
    ck.name = "slope_bound";
    ck.applicable = autonomous;
    if (ck.applicable) {
      ck.bound = minimizer_slope_bound(W, c) + opt.slope_tol;
      ck.observed = p.max_abs_slope();
      ck.passed = ck.observed <= ck.bound;
    }
    rep.checks.push_back(std::move(ck));
  }

  {
    VerificationCheck ck;
    ck.name = "conservation";
    ck.applicable = autonomous;
    if (ck.applicable) {
      ck.bound = opt.conservation_tol;
      ck.observed = conservation_residual(p, W, c).max_abs;
      ck.passed = ck.observed <= ck.bound;
    }
    rep.checks.push_back(std::move(ck));
  }

  {
    VerificationCheck ck;
    ck.name = "euler_lagrange";
    ck.applicable = p.nodes() >= 3;
    if (ck.applicable) {
      ck.bound = opt.el_tol;
      ck.observed = euler_lagrange_residual(p, W, a).max_abs;
      ck.passed = ck.observed <= ck.bound;
    }
    rep.checks.push_back(std::move(ck));
  }

  {
    VerificationCheck ck;
    ck.name = "stretch";
    ck.applicable = true;
    ck.bound = opt.stretch_floor;
    const double base = action(p, W, a).total;
    std::mt19937 rng(opt.seed);
    const double t0 = p.t.front(), span = p.span();
    std::uniform_real_distribution<double> lo(0.05, 0.70);
    std::uniform_real_distribution<double> len(0.05, 0.25);
    double worst = std::numeric_limits<double>::infinity();
    for (int b = 0; b < opt.stretch_bands; ++b) {
      const double b0 = t0 + lo(rng) * span;
      const double b1 = std::min(b0 + len(rng) * span, t0 + 0.97 * span);
      for (double theta : {0.1, 0.01}) {
        const double delta = action(stretch(p, b0, b1, theta), W, a).total - base;
        worst = std::min(worst, delta);
      }
    }
    ck.observed = worst;
    ck.passed = worst >= opt.stretch_floor;
    rep.checks.push_back(std::move(ck));
  }

  {
    VerificationCheck ck;
    ck.name = "rearrange";
    ck.applicable = autonomous && p.uniform();
    if (ck.applicable) {
      ck.bound = opt.rearrange_tol;
      const double before = action_nodal(p, W, a).total;
      const double after = action_nodal(monotone_rearrange(p), W, a).total;
      ck.observed = after - before;  // <= 0 always; near 0 for a minimizer
      ck.passed = ck.observed >= -opt.rearrange_tol;
    }
    rep.checks.push_back(std::move(ck));
  }

  {
    VerificationCheck ck;
    ck.name = "crossing_bound";
    const double eps = opt.crossing_eps;
    const double band_lo = 1.0 - eps, band_hi = 1.0 - 0.5 * eps;
    double umin = p.u.front(), umax = p.u.front();
    for (double v : p.u) {
      umin = std::min(umin, v);
      umax = std::max(umax, v);
    }
    ck.applicable = umin <= band_lo && umax >= band_hi;
    if (ck.applicable) {
      // Infimum of the weight over the nodes where the band is crossed.
      double a1 = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i + 1 < p.nodes(); ++i) {
        const double v0 = p.u[i], v1 = p.u[i + 1];
        if (std::max(v0, v1) < band_lo || std::min(v0, v1) > band_hi)
          continue;
        a1 = std::min(a1, std::min(a(p.t[i]), a(p.t[i + 1])));
      }
      const double beta = band_minimum(W, eps);
      ck.bound = crossing_lower_bound(eps, a1, beta);
      ck.observed = action(p, W, a).total;
      ck.passed = ck.observed >= ck.bound;
    }
    rep.checks.push_back(std::move(ck));
  }

  return rep;
}

}  // namespace hbi

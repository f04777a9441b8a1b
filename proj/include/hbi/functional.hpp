#pragma once

#include <cmath>
#include <sstream>
#include <vector>

#include "hbi/errors.hpp"
#include "hbi/kernel.hpp"
#include "hbi/numeric.hpp"
#include "hbi/potential.hpp"
#include "hbi/profile.hpp"
#include "hbi/weight.hpp"

namespace hbi {

// Action split into its kinetic and potential parts with the per-cell terms
// kept. Totals are pairwise-reduced, so they are bit-reproducible for a
// given cell count regardless of how the terms were produced.
struct ActionBreakdown {
  double kinetic = 0;
  double potential = 0;
  double total = 0;
  std::vector<double> kinetic_cells;
  std::vector<double> potential_cells;
};

// Discrete action: per cell, kinetic density of the slope plus the weighted
// potential at the cell midpoint, both times the cell width. Slopes beyond
// [-1, 1] are rejected with the offending cell named.
inline ActionBreakdown action(const Profile& p, const Potential& W,
                              const Weight& a) {
  validate_profile(p);
  ActionBreakdown out;
  const std::size_t n = p.cells();
  out.kinetic_cells.resize(n);
  out.potential_cells.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double h = p.dt(i);
    const double s = p.slope(i);
    if (std::abs(s) > 1.0) {
      std::ostringstream msg;
      msg << "action: cell " << i << " has slope " << s << " outside [-1, 1]";
      throw slope_error(msg.str(), s, (long)i);
    }
    out.kinetic_cells[i] = kinetic_density(s) * h;
    const double tm = 0.5 * (p.t[i] + p.t[i + 1]);
    const double um = 0.5 * (p.u[i] + p.u[i + 1]);
    out.potential_cells[i] = a(tm) * W.value(um) * h;
  }
  out.kinetic = pairwise_sum(out.kinetic_cells);
  out.potential = pairwise_sum(out.potential_cells);
  out.total = out.kinetic + out.potential;
  return out;
}

// Action with the kinetic density replaced by the regularized kernel. The
// kernel is globally defined, so slopes are not restricted here.
inline ActionBreakdown regularized_action(const Profile& p, const Potential& W,
                                          const Weight& a,
                                          const RegularizedKernel& k) {
  validate_profile(p);
  ActionBreakdown out;
  const std::size_t n = p.cells();
  out.kinetic_cells.resize(n);
  out.potential_cells.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double h = p.dt(i);
    out.kinetic_cells[i] = k.density(p.slope(i)) * h;
    const double tm = 0.5 * (p.t[i] + p.t[i + 1]);
    const double um = 0.5 * (p.u[i] + p.u[i + 1]);
    out.potential_cells[i] = a(tm) * W.value(um) * h;
  }
  out.kinetic = pairwise_sum(out.kinetic_cells);
  out.potential = pairwise_sum(out.potential_cells);
  out.total = out.kinetic + out.potential;
  return out;
}

// Node-quadrature variant on uniform grids: the potential samples the nodes
// with equal weight h instead of the cell midpoints. Under any permutation
// of the values the potential term is exactly invariant (same multiset of
// values, same measure weights), which makes this the right functional for
// rearrangement comparisons.
inline ActionBreakdown action_nodal(const Profile& p, const Potential& W,
                                    const Weight& a) {
  validate_profile(p);
  if (!p.uniform())
    throw unsupported_grid_error("action_nodal: grid must be uniform");
  ActionBreakdown out;
  const std::size_t n = p.cells();
  const double h = p.span() / n;
  out.kinetic_cells.resize(n);
  out.potential_cells.resize(p.nodes());
  for (std::size_t i = 0; i < n; ++i) {
    const double s = p.slope(i);
    if (std::abs(s) > 1.0) {
      std::ostringstream msg;
      msg << "action_nodal: cell " << i << " has slope " << s
          << " outside [-1, 1]";
      throw slope_error(msg.str(), s, (long)i);
    }
    out.kinetic_cells[i] = kinetic_density(s) * h;
  }
  for (std::size_t i = 0; i < p.nodes(); ++i)
    out.potential_cells[i] = a(p.t[i]) * W.value(p.u[i]) * h;
  out.kinetic = pairwise_sum(out.kinetic_cells);
  out.potential = pairwise_sum(out.potential_cells);
  out.total = out.kinetic + out.potential;
  return out;
}

// Per-node residual array with its sup norm.
struct ResidualField {
  std::vector<double> values;
  double max_abs = 0;
};

// Centered slope at a node: mean of the two adjacent cell slopes, one-sided
// at the ends.
inline double centered_slope(const Profile& p, std::size_t i) {
  if (i == 0) return p.slope(0);
  if (i + 1 == p.nodes()) return p.slope(p.cells() - 1);
  return 0.5 * (p.slope(i - 1) + p.slope(i));
}

// Residual of the autonomous conservation law
//   1 - 1/sqrt(1 - u'^2) + c W(u) = 0
// sampled with centered slopes; c is the constant weight in front of the
// potential. Zero along any exact connection.
inline ResidualField conservation_residual(const Profile& p,
                                           const Potential& W,
                                           double weight_scale = 1.0) {
  validate_profile(p);
  ResidualField r;
  r.values.resize(p.nodes());
  for (std::size_t i = 0; i < p.nodes(); ++i) {
    const double s = centered_slope(p, i);
    if (std::abs(s) >= 1.0)
      throw singularity_error(
          "conservation_residual: centered slope reaches |s| = 1");
    const double v =
        1.0 - 1.0 / std::sqrt(1.0 - s * s) + weight_scale * W.value(p.u[i]);
    r.values[i] = v;
    r.max_abs = std::max(r.max_abs, std::abs(v));
  }
  return r;
}

// Conservation residual for the regularized flow: energy(centered slope)
// minus W(u). On the inner kernel branch this is exactly the negative of the
// unregularized residual.
inline ResidualField regularized_energy_residual(const Profile& p,
                                                 const Potential& W,
                                                 const RegularizedKernel& k,
                                                 double weight_scale = 1.0) {
  validate_profile(p);
  ResidualField r;
  r.values.resize(p.nodes());
  for (std::size_t i = 0; i < p.nodes(); ++i) {
    const double s = centered_slope(p, i);
    const double v = k.energy(s) - weight_scale * W.value(p.u[i]);
    r.values[i] = v;
    r.max_abs = std::max(r.max_abs, std::abs(v));
  }
  return r;
}

// Interior-node residual of the Euler-Lagrange equation
//   d/dt [ u' / sqrt(1 - u'^2) ] = a(t) W'(u):
// one flux difference per node over the mean adjacent cell width.
inline ResidualField euler_lagrange_residual(const Profile& p,
                                             const Potential& W,
                                             const Weight& a) {
  validate_profile(p);
  if (p.nodes() < 3)
    throw domain_error("euler_lagrange_residual: need an interior node");
  ResidualField r;
  r.values.resize(p.nodes() - 2);
  for (std::size_t i = 1; i + 1 < p.nodes(); ++i) {
    const double flux_right = kinetic_flux(p.slope(i));
    const double flux_left = kinetic_flux(p.slope(i - 1));
    const double width = 0.5 * (p.dt(i - 1) + p.dt(i));
    const double v =
        (flux_right - flux_left) / width - a(p.t[i]) * W.deriv(p.u[i]);
    r.values[i - 1] = v;
    r.max_abs = std::max(r.max_abs, std::abs(v));
  }
  return r;
}

// A priori sup bound on the slope of any minimizer under a constant weight
// c: sqrt(1 - 1/(1 + c max W)^2). The quartic well at c = 1 gives 0.6.
inline double minimizer_slope_bound(const Potential& W,
                                    double weight_scale = 1.0) {
  const double m = max_value(W);
  const double q = 1.0 + weight_scale * m;
  return std::sqrt(1.0 - 1.0 / (q * q));
}

// Lower bound on the action of any profile that crosses the eps-band next to
// a well: eps * sqrt(a1 * beta) / sqrt(2), where a1 is the weight infimum
// over the crossing window and beta the band minimum of the potential.
inline double crossing_lower_bound(double eps, double a1, double beta) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw parameter_error("crossing_lower_bound: eps outside (0, 1)");
  if (!(a1 > 0.0))
    throw parameter_error("crossing_lower_bound: weight infimum must be positive");
  if (!(beta > 0.0))
    throw parameter_error("crossing_lower_bound: band minimum must be positive");
  return eps * std::sqrt(a1 * beta) / std::sqrt(2.0);
}

}  // namespace hbi

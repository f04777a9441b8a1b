#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "hbi/errors.hpp"
#include "hbi/kernel.hpp"
#include "hbi/numeric.hpp"
#include "hbi/potential.hpp"

namespace hbi {

// Rectangular grid on a strip [x0, x1] x [y0, y1], values stored row-major
// in x (index i * ny + j). A single y-row is read as the 1D functional with
// unit transverse measure.
struct StripGrid {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> v;

  std::size_t nx() const { return x.size(); }
  std::size_t ny() const { return y.size(); }
  double& at(std::size_t i, std::size_t j) { return v[i * ny() + j]; }
  double at(std::size_t i, std::size_t j) const { return v[i * ny() + j]; }

  static StripGrid from_function(
      double x0, double x1, std::size_t nx_cells, double y0, double y1,
      std::size_t ny_cells, const std::function<double(double, double)>& f) {
    if (!(x1 > x0) || nx_cells < 1)
      throw parameter_error("StripGrid: bad x range");
    StripGrid g;
    g.x.resize(nx_cells + 1);
    for (std::size_t i = 0; i <= nx_cells; ++i)
      g.x[i] = x0 + (x1 - x0) * double(i) / double(nx_cells);
    if (ny_cells == 0) {
      g.y.assign(1, y0);
    } else {
      if (!(y1 > y0)) throw parameter_error("StripGrid: bad y range");
      g.y.resize(ny_cells + 1);
      for (std::size_t j = 0; j <= ny_cells; ++j)
        g.y[j] = y0 + (y1 - y0) * double(j) / double(ny_cells);
    }
    g.v.resize(g.nx() * g.ny());
    for (std::size_t i = 0; i < g.nx(); ++i)
      for (std::size_t j = 0; j < g.ny(); ++j)
        g.at(i, j) = f(g.x[i], g.y[j]);
    return g;
  }

  void validate() const {
    if (x.size() < 2) throw domain_error("StripGrid: need two x nodes");
    if (y.empty()) throw domain_error("StripGrid: need a y node");
    if (v.size() != x.size() * y.size())
      throw domain_error("StripGrid: value size mismatch");
    for (std::size_t i = 1; i < x.size(); ++i)
      if (!(x[i] > x[i - 1])) throw domain_error("StripGrid: x not increasing");
    for (std::size_t j = 1; j < y.size(); ++j)
      if (!(y[j] > y[j - 1])) throw domain_error("StripGrid: y not increasing");
  }

  // Transverse measure: the y-extent, or 1 for a single row.
  double width() const { return ny() == 1 ? 1.0 : y.back() - y.front(); }
};

namespace detail {
struct StripCell {
  double gx, gy, mean, ax, ay;  // gradient, corner mean, cell widths
};

inline StripCell strip_cell(const StripGrid& g, std::size_t i, std::size_t j) {
  StripCell c{};
  c.ax = g.x[i + 1] - g.x[i];
  if (g.ny() == 1) {
    c.ay = 1.0;
    c.gx = (g.at(i + 1, 0) - g.at(i, 0)) / c.ax;
    c.gy = 0.0;
    c.mean = 0.5 * (g.at(i, 0) + g.at(i + 1, 0));
    return c;
  }
  c.ay = g.y[j + 1] - g.y[j];
  const double v00 = g.at(i, j), v10 = g.at(i + 1, j);
  const double v01 = g.at(i, j + 1), v11 = g.at(i + 1, j + 1);
  c.gx = 0.5 * ((v10 - v00) + (v11 - v01)) / c.ax;
  c.gy = 0.5 * ((v01 - v00) + (v11 - v10)) / c.ay;
  c.mean = 0.25 * (v00 + v10 + v01 + v11);
  return c;
}
}  // namespace detail

// Cellwise strip action: kinetic density of the centered gradient magnitude
// plus the potential at the corner mean, times the cell area. For data
// constant in y this reduces exactly to width times the 1D action.
inline double strip_action(const StripGrid& g, const Potential& W) {
  g.validate();
  const std::size_t ncx = g.nx() - 1;
  const std::size_t ncy = g.ny() == 1 ? 1 : g.ny() - 1;
  std::vector<double> cells(ncx * ncy);
  for (std::size_t i = 0; i < ncx; ++i) {
    for (std::size_t j = 0; j < ncy; ++j) {
      const auto c = detail::strip_cell(g, i, j);
      const double grad = std::hypot(c.gx, c.gy);
      if (grad > 1.0) {
        std::ostringstream msg;
        msg << "strip_action: cell (" << i << ", " << j
            << ") has gradient magnitude " << grad << " > 1";
        throw slope_error(msg.str(), grad, (long)(i * ncy + j));
      }
      cells[i * ncy + j] = (kinetic_density(grad) + W.value(c.mean)) * c.ax * c.ay;
    }
  }
  return pairwise_sum(cells);
}

// Comparison of the strip action against its own axial part. Each cell row
// is scored with the x-derivative alone; since the kinetic density increases
// with the gradient magnitude, the full action dominates the width-weighted
// mean of the row actions, strictly once any cell carries y-variation.
struct StripSliceReport {
  double total = 0;               // full strip action
  double width = 0;               // transverse measure
  std::vector<double> slice_actions;  // per cell row, x-derivative only
  double mean_slice = 0;          // width-weighted mean of the rows
  double min_slice = 0;
  double margin_vs_mean = 0;      // total - width * mean_slice
  double margin_vs_min = 0;       // total - width * min_slice
  double max_abs_gy = 0;
  bool strict = false;            // some cell has y-variation
  bool passed = false;            // total >= width * mean_slice - 1e-12
};

inline StripSliceReport strip_slice_report(const StripGrid& g,
                                           const Potential& W) {
  g.validate();
  StripSliceReport r;
  r.total = strip_action(g, W);
  r.width = g.width();
  const std::size_t ncx = g.nx() - 1;
  const std::size_t ncy = g.ny() == 1 ? 1 : g.ny() - 1;
  r.slice_actions.resize(ncy);
  double axial = 0;
  r.min_slice = std::numeric_limits<double>::infinity();
  std::vector<double> row(ncx);
  for (std::size_t j = 0; j < ncy; ++j) {
    double dy = g.ny() == 1 ? 1.0 : g.y[j + 1] - g.y[j];
    for (std::size_t i = 0; i < ncx; ++i) {
      const auto c = detail::strip_cell(g, i, j);
      row[i] = (kinetic_density(std::abs(c.gx)) + W.value(c.mean)) * c.ax;
      r.max_abs_gy = std::max(r.max_abs_gy, std::abs(c.gy));
    }
    r.slice_actions[j] = pairwise_sum(row);
    axial += r.slice_actions[j] * dy;
    r.min_slice = std::min(r.min_slice, r.slice_actions[j]);
  }
  r.mean_slice = axial / r.width;
  r.margin_vs_mean = r.total - axial;
  r.margin_vs_min = r.total - r.width * r.min_slice;
  r.strict = r.max_abs_gy > 1e-14;
  r.passed = r.total >= axial - 1e-12;
  return r;
}

}  // namespace hbi

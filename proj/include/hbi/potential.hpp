#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "hbi/errors.hpp"
#include "hbi/expression.hpp"
#include "hbi/numeric.hpp"

namespace hbi {

// Double-well potential on [-1, 1] with wells at +-1. Flags advertise which
// structural hypotheses the instance satisfies; validate_potential checks
// them by sampling.
struct Potential {
  std::function<double(double)> value_fn;
  std::function<double(double)> deriv_fn;
  std::string name;
  bool positive_off_wells = false;  // W > 0 everywhere except the wells
  bool compact_support = false;     // W = 0 outside (-1, 1)
  bool symmetric = false;           // W(-s) = W(s)

  double value(double s) const { return value_fn(s); }
  double deriv(double s) const { return deriv_fn(s); }
};

// Classical quartic double well W(s) = (s^2 - 1)^2 / 4.
inline Potential allen_cahn() {
  Potential p;
  p.value_fn = [](double s) {
    const double q = s * s - 1.0;
    return 0.25 * q * q;
  };
  p.deriv_fn = [](double s) { return s * (s * s - 1.0); };
  p.name = "allen_cahn";
  p.positive_off_wells = true;
  p.symmetric = true;
  return p;
}

// The well whose relativistic connection is exactly tanh(t / sqrt(2)):
// W(u) = sqrt(2 / (2 - (1 - u^2)^2)) - 1. Defined while the radicand is
// positive (|u| < sqrt(1 + sqrt(2))); no extension beyond that is guessed.
inline Potential tanh_well() {
  auto radicand = [](double u) {
    const double v = 1.0 - u * u;
    return 2.0 - v * v;
  };
  Potential p;
  p.value_fn = [radicand](double u) {
    const double r = radicand(u);
    if (r <= 0.0) {
      std::ostringstream msg;
      msg << "tanh_well: value undefined at u = " << u;
      throw domain_error(msg.str());
    }
    return std::sqrt(2.0 / r) - 1.0;
  };
  p.deriv_fn = [radicand](double u) {
    const double r = radicand(u);
    if (r <= 0.0) {
      std::ostringstream msg;
      msg << "tanh_well: derivative undefined at u = " << u;
      throw domain_error(msg.str());
    }
    const double v = 1.0 - u * u;
    return -2.0 * std::sqrt(2.0) * u * v / (r * std::sqrt(r));
  };
  p.name = "tanh_well";
  p.positive_off_wells = true;
  p.symmetric = true;
  return p;
}

// Zeroes a potential outside (-1, 1), giving it compact support. The input
// must already vanish at the wells, so the truncation is continuous.
inline Potential compact_truncate(const Potential& p) {
  Potential q;
  auto value = p.value_fn;
  auto deriv = p.deriv_fn;
  q.value_fn = [value](double s) {
    return std::abs(s) >= 1.0 ? 0.0 : value(s);
  };
  q.deriv_fn = [deriv](double s) {
    return std::abs(s) >= 1.0 ? 0.0 : deriv(s);
  };
  q.name = p.name + "-compact";
  q.positive_off_wells = false;
  q.compact_support = true;
  q.symmetric = p.symmetric;
  return q;
}

// Potential from an expression in the variable s. The derivative is taken by
// central differences. Structural flags are measured by sampling; a well
// value away from zero is rejected outright.
inline Potential custom_potential(const std::string& text) {
  const Expression expr = Expression::parse(text, "s");
  Potential p;
  p.value_fn = [expr](double s) { return expr(s); };
  p.deriv_fn = [expr](double s) {
    std::function<double(double)> f = [&expr](double x) { return expr(x); };
    return central_difference(f, s, 1e-6 * std::max(1.0, std::abs(s)));
  };
  p.name = "expr:" + text;
  if (std::abs(expr(1.0)) > 1e-9 || std::abs(expr(-1.0)) > 1e-9) {
    throw parameter_error("custom_potential: expression must vanish at +-1, "
                          "got W(1) = " + std::to_string(expr(1.0)) +
                          ", W(-1) = " + std::to_string(expr(-1.0)));
  }
  bool positive = true, symmetric = true, compact = true;
  for (int i = 1; i < 2000; ++i) {
    const double s = -1.0 + 2.0 * i / 2000.0;
    const double w = expr(s);
    if (w <= 0.0) positive = false;
    if (std::abs(w - expr(-s)) > 1e-12 * std::max(1.0, std::abs(w)))
      symmetric = false;
  }
  for (int i = 1; i <= 50; ++i) {
    const double s = 1.0 + i / 50.0;
    if (std::abs(expr(s)) > 1e-12 || std::abs(expr(-s)) > 1e-12)
      compact = false;
  }
  p.positive_off_wells = positive;
  p.symmetric = symmetric;
  p.compact_support = compact;
  return p;
}

// Maximum of W over [-1, 1]: scan on a 1e-4 grid, then golden-section
// refinement around the best sample.
inline double max_value(const Potential& p) {
  const int n = 20000;
  double best = -std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i <= n; ++i) {
    const double s = -1.0 + 2.0 * i / n;
    const double w = p.value(s);
    if (w > best) {
      best = w;
      best_i = i;
    }
  }
  const double step = 2.0 / n;
  const double lo = std::max(-1.0, -1.0 + 2.0 * best_i / n - step);
  const double hi = std::min(1.0, -1.0 + 2.0 * best_i / n + step);
  const double arg = golden_section([&](double s) { return p.value(s); }, lo,
                                    hi, [](double x, double y) { return x > y; });
  return std::max(best, p.value(arg));
}

// Minimum of W over the two bands [-1 + eps/2, -1 + eps] and
// [1 - eps, 1 - eps/2] flanking the wells. Positive for a positive-off-wells
// potential; it gates the lower bound on the cost of crossing the bands.
inline double band_minimum(const Potential& p, double eps) {
  if (!(eps > 0.0) || !(eps < 1.0)) {
    std::ostringstream msg;
    msg << "band_minimum: eps = " << eps << " outside (0, 1)";
    throw parameter_error(msg.str());
  }
  auto band_min = [&](double lo, double hi) {
    const int n = 2000;
    double best = std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 0; i <= n; ++i) {
      const double s = lo + (hi - lo) * i / n;
      const double w = p.value(s);
      if (w < best) {
        best = w;
        best_i = i;
      }
    }
    const double step = (hi - lo) / n;
    const double a = std::max(lo, lo + (hi - lo) * best_i / n - step);
    const double b = std::min(hi, lo + (hi - lo) * best_i / n + step);
    const double arg = golden_section([&](double s) { return p.value(s); }, a,
                                      b, [](double x, double y) { return x < y; });
    return std::min(best, p.value(arg));
  };
  return std::min(band_min(-1.0 + 0.5 * eps, -1.0 + eps),
                  band_min(1.0 - eps, 1.0 - 0.5 * eps));
}

// Sampled audit of the advertised flags. Returns human-readable violations;
// empty means every claim held on the sample grid.
inline std::vector<std::string> validate_potential(const Potential& p,
                                                   int samples = 10000) {
  std::vector<std::string> out;
  auto complain = [&out](const std::string& s) {
    if (out.size() < 16) out.push_back(s);
  };
  if (std::abs(p.value(1.0)) > 1e-12) complain("W(1) != 0");
  if (std::abs(p.value(-1.0)) > 1e-12) complain("W(-1) != 0");
  for (int i = 1; i < samples; ++i) {
    const double s = -1.0 + 2.0 * i / samples;
    const double w = p.value(s);
    if (p.positive_off_wells && w <= 0.0) {
      std::ostringstream msg;
      msg << "W(" << s << ") = " << w << " not positive";
      complain(msg.str());
    }
    if (p.symmetric && std::abs(w - p.value(-s)) >
                           1e-12 * std::max(1.0, std::abs(w))) {
      std::ostringstream msg;
      msg << "asymmetric at s = " << s;
      complain(msg.str());
    }
    if (i % 16 == 0) {
      std::function<double(double)> f = [&p](double x) { return p.value(x); };
      const double fd = central_difference(f, s, 1e-6);
      const double an = p.deriv(s);
      if (std::abs(an - fd) > 1e-6 * std::max(1.0, std::abs(an))) {
        std::ostringstream msg;
        msg << "derivative mismatch at s = " << s << ": " << an << " vs "
            << fd;
        complain(msg.str());
      }
    }
  }
  if (p.compact_support) {
    for (int i = 1; i <= 100; ++i) {
      const double s = 1.0 + 2.0 * i / 100.0;
      if (p.value(s) != 0.0 || p.value(-s) != 0.0) {
        std::ostringstream msg;
        msg << "support leaks outside (-1,1) at |s| = " << s;
        complain(msg.str());
      }
    }
  }
  return out;
}

}  // namespace hbi

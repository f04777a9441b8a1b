#pragma once

#include <cmath>
#include <sstream>

#include "hbi/errors.hpp"

namespace hbi {

// Relativistic kinetic density 1 - sqrt(1 - s^2) on |s| <= 1.
// Satisfies s^2/2 <= density <= s^2 pointwise.
inline double kinetic_density(double s) {
  if (std::abs(s) > 1.0) {
    std::ostringstream msg;
    msg << "kinetic_density: slope " << s << " outside [-1, 1]";
    throw slope_error(msg.str(), s);
  }
  // 1 - sqrt(1-s^2) loses digits for small s; the equivalent quotient form
  // s^2 / (1 + sqrt(1-s^2)) is stable everywhere on the domain.
  const double r = std::sqrt(1.0 - s * s);
  return s * s / (1.0 + r);
}

// Flux s / sqrt(1 - s^2), the derivative of the kinetic density.
// Defined for |s| < 1 only; the graph becomes vertical at |s| = 1.
inline double kinetic_flux(double s) {
  if (std::abs(s) > 1.0) {
    std::ostringstream msg;
    msg << "kinetic_flux: slope " << s << " outside [-1, 1]";
    throw slope_error(msg.str(), s);
  }
  if (std::abs(s) == 1.0) {
    throw singularity_error("kinetic_flux: pole at |s| = 1");
  }
  return s / std::sqrt(1.0 - s * s);
}

// Second derivative (1 - s^2)^(-3/2) of the kinetic density, |s| < 1.
inline double kinetic_flux_deriv(double s) {
  if (std::abs(s) >= 1.0) {
    throw singularity_error("kinetic_flux_deriv: pole at |s| = 1");
  }
  const double r = 1.0 - s * s;
  return 1.0 / (r * std::sqrt(r));
}

// C^2 regularization of the kinetic density, indexed by n >= 2. Inside the
// junction s^2 = 1 - 1/n^2 it coincides with the exact density; outside it
// continues as a quadratic in s^2, so the regularized density is finite with
// bounded derivatives for every slope. `energy` is the matching conserved
// quantity of the regularized flow, quadratic on the outer branch as well.
struct RegularizedKernel {
  int index = 0;       // n
  double junction = 0; // 1 - 1/n^2, branch switch point in s^2
  double a = 0, b = 0, c = 0;             // outer density: a + b*q + c*q^2,
                                          // q = s^2 - junction
  double ea = 0, eb = 0, ec = 0;          // outer energy:
                                          // ea + eb*q + ec*(s^4 - junction^2)

  bool inner(double s) const { return s * s <= junction; }

  // Regularized density at slope s. Equals the exact kinetic density on the
  // inner branch and stays below it strictly beyond the junction.
  double density(double s) const {
    const double t2 = s * s;
    if (t2 <= junction) {
      return t2 / (1.0 + std::sqrt(1.0 - t2));
    }
    const double q = t2 - junction;
    return a + q * (b + c * q);
  }

  // First derivative of the regularized density.
  double density_deriv(double s) const {
    const double t2 = s * s;
    if (t2 <= junction) {
      return s / std::sqrt(1.0 - t2);
    }
    const double q = t2 - junction;
    return 2.0 * s * (b + 2.0 * c * q);
  }

  // Second derivative of the regularized density. Positive everywhere, so
  // the regularized density is convex.
  double density_second(double s) const {
    const double t2 = s * s;
    if (t2 <= junction) {
      const double r = 1.0 - t2;
      return 1.0 / (r * std::sqrt(r));
    }
    const double q = t2 - junction;
    return 2.0 * b + 4.0 * c * q + 8.0 * c * t2;
  }

  // Conserved energy of the regularized flow as a function of the slope:
  // 1/sqrt(1-s^2) - 1 inside the junction, the matching quadratic outside.
  // Strictly increasing in |s|, value n-1 at the junction.
  double energy(double s) const {
    const double t2 = s * s;
    if (t2 <= junction) {
      return 1.0 / std::sqrt(1.0 - t2) - 1.0;
    }
    const double q = t2 - junction;
    return ea + eb * q + ec * (t2 * t2 - junction * junction);
  }
};

// Builds the index-n member of the regularized family. The coefficients are
// fixed by C^2 matching of the two branches at the junction.
inline RegularizedKernel regularized_kernel(int n) {
  if (n < 2) {
    std::ostringstream msg;
    msg << "regularized_kernel: index " << n << " < 2";
    throw parameter_error(msg.str());
  }
  RegularizedKernel k;
  const double nd = n;
  k.index = n;
  k.junction = 1.0 - 1.0 / (nd * nd);
  k.a = 1.0 - 1.0 / nd;
  k.b = nd / 2.0;
  k.c = nd * nd * nd / 8.0;
  k.ea = nd - 1.0;
  k.eb = k.b - 2.0 * k.c * k.junction;
  k.ec = 3.0 * k.c;
  return k;
}

}  // namespace hbi

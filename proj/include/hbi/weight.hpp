#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hbi/errors.hpp"
#include "hbi/expression.hpp"

namespace hbi {

// Time-dependent weight a(t) in front of the potential. Flags advertise the
// structural hypotheses an instance satisfies; validate_weight audits them
// on a sample grid. positivity_threshold is the explicit T with a > 0 for
// t > T when eventually_positive is set.
struct Weight {
  std::function<double(double)> fn;
  std::string name;
  bool bounded_positive = false;         // 0 < lower <= a <= upper globally
  bool locally_bounded = true;           // bounded on every compact window
  bool nondecreasing_from_origin = false;  // a(s) <= a(t) for 0 <= s <= t
  bool symmetric = false;                // a(-t) = a(t)
  bool eventually_positive = false;      // a > 0 past positivity_threshold
  bool is_constant = false;
  double lower = std::numeric_limits<double>::quiet_NaN();
  double upper = std::numeric_limits<double>::quiet_NaN();
  double period = 0.0;                   // 0 when not periodic
  double positivity_threshold = std::numeric_limits<double>::quiet_NaN();
  std::shared_ptr<const Weight> dominating;  // optional upper envelope partner

  double operator()(double t) const { return fn(t); }
};

inline Weight constant_weight(double c) {
  if (!(c > 0.0)) {
    std::ostringstream msg;
    msg << "constant_weight: value " << c << " must be positive";
    throw parameter_error(msg.str());
  }
  Weight w;
  w.fn = [c](double) { return c; };
  std::ostringstream nm;
  nm << "constant(" << c << ")";
  w.name = nm.str();
  w.bounded_positive = true;
  w.nondecreasing_from_origin = true;
  w.symmetric = true;
  w.eventually_positive = true;
  w.is_constant = true;
  w.lower = w.upper = c;
  w.positivity_threshold = 0.0;
  return w;
}

// mean + amp * sin(2 pi t / period). Positivity of the lower envelope is
// required, so the amplitude must stay below the mean.
inline Weight periodic_sin(double mean, double amp, double period) {
  if (!(period > 0.0)) throw parameter_error("periodic_sin: period <= 0");
  if (amp < 0.0) throw parameter_error("periodic_sin: negative amplitude");
  if (!(mean - amp > 0.0)) {
    std::ostringstream msg;
    msg << "periodic_sin: mean " << mean << " - amp " << amp
        << " must stay positive";
    throw parameter_error(msg.str());
  }
  Weight w;
  const double omega = 2.0 * 3.14159265358979323846 / period;
  w.fn = [mean, amp, omega](double t) { return mean + amp * std::sin(omega * t); };
  std::ostringstream nm;
  nm << "periodic_sin(" << mean << "," << amp << "," << period << ")";
  w.name = nm.str();
  w.bounded_positive = true;
  w.lower = mean - amp;
  w.upper = mean + amp;
  w.period = period;
  w.nondecreasing_from_origin = (amp == 0.0);
  w.symmetric = (amp == 0.0);
  w.eventually_positive = true;
  w.positivity_threshold = 0.0;
  return w;
}

// limit - bump * exp(-|t|): approaches `limit` at infinity, offset by `bump`
// at the origin. For bump >= 0 the constant limit dominates from above with
// a gap that vanishes at infinity, so that partner is attached.
inline Weight asymptotically_constant(double limit, double bump) {
  if (!(limit > 0.0)) throw parameter_error("asymptotically_constant: limit <= 0");
  if (!(limit - bump > 0.0)) {
    std::ostringstream msg;
    msg << "asymptotically_constant: limit " << limit << " - bump " << bump
        << " must stay positive";
    throw parameter_error(msg.str());
  }
  Weight w;
  w.fn = [limit, bump](double t) { return limit - bump * std::exp(-std::abs(t)); };
  std::ostringstream nm;
  nm << "asymptotically_constant(" << limit << "," << bump << ")";
  w.name = nm.str();
  w.bounded_positive = true;
  w.lower = std::min(limit, limit - bump);
  w.upper = std::max(limit, limit - bump);
  w.nondecreasing_from_origin = (bump >= 0.0);
  w.symmetric = true;
  w.eventually_positive = true;
  w.positivity_threshold = 0.0;
  if (bump >= 0.0)
    w.dominating = std::make_shared<Weight>(constant_weight(limit));
  return w;
}

// min(rate * t^2, cap): even, nondecreasing away from the origin, positive
// for every t != 0, unbounded when uncapped. Not bounded below away from
// zero, so the two-sided positivity hypothesis fails by design.
inline Weight monotone_even(double rate,
                            double cap = std::numeric_limits<double>::infinity()) {
  if (!(rate > 0.0)) throw parameter_error("monotone_even: rate <= 0");
  if (!(cap > 0.0)) throw parameter_error("monotone_even: cap <= 0");
  Weight w;
  w.fn = [rate, cap](double t) { return std::min(rate * t * t, cap); };
  std::ostringstream nm;
  nm << "monotone_even(" << rate;
  if (std::isfinite(cap)) nm << ",cap=" << cap;
  nm << ")";
  w.name = nm.str();
  w.bounded_positive = false;
  w.nondecreasing_from_origin = true;
  w.symmetric = true;
  w.eventually_positive = true;
  w.positivity_threshold = 0.0;
  if (std::isfinite(cap)) w.upper = cap;
  return w;
}

// Weight from an expression in the variable t. Structural flags are measured
// on a sample grid; the positivity threshold is taken from the caller and
// audited rather than derived.
inline Weight custom_weight(const std::string& text,
                            std::optional<double> t_pos = std::nullopt) {
  const Expression expr = Expression::parse(text, "t");
  Weight w;
  w.fn = [expr](double t) { return expr(t); };
  w.name = "expr:" + text;
  bool symmetric = true, nondecreasing = true;
  double prev = expr(0.0);
  for (int i = 0; i <= 4000; ++i) {
    const double t = 100.0 * i / 4000.0;
    const double v = expr(t);
    if (std::abs(v - expr(-t)) > 1e-12 * std::max(1.0, std::abs(v)))
      symmetric = false;
    if (v < prev - 1e-12 * std::max(1.0, std::abs(prev))) nondecreasing = false;
    prev = v;
  }
  w.symmetric = symmetric;
  w.nondecreasing_from_origin = nondecreasing;
  if (t_pos) {
    w.positivity_threshold = *t_pos;
    bool positive = true;
    for (int i = 1; i <= 2000; ++i) {
      const double t = *t_pos + 100.0 * i / 2000.0;
      if (!(expr(t) > 0.0)) positive = false;
    }
    w.eventually_positive = positive;
    if (!positive) {
      std::ostringstream msg;
      msg << "custom_weight: claimed positivity past " << *t_pos
          << " fails on samples";
      throw parameter_error(msg.str());
    }
  }
  return w;
}

// Report of a domination audit between a weight and its upper envelope.
struct DominationReport {
  bool dominated = false;    // a <= b on the sampled window
  bool tail_within = false;  // |b - a| <= tail_tol on the outer half-window
  double max_violation = 0;  // worst a - b excess seen
  double max_tail_gap = 0;   // worst |b - a| on the outer half-window
  std::vector<std::pair<double, double>> violations;  // (t, a - b), first 16

  bool passed() const { return dominated && tail_within; }
};

// Samples a <= b on [-horizon, horizon] and checks the gap b - a collapses
// below tail_tol on |t| >= horizon / 2.
inline DominationReport check_domination(const Weight& a, const Weight& b,
                                         double tail_tol, double horizon) {
  if (!(horizon > 0.0)) throw parameter_error("check_domination: horizon <= 0");
  if (!(tail_tol >= 0.0)) throw parameter_error("check_domination: tail_tol < 0");
  DominationReport r;
  r.dominated = true;
  r.tail_within = true;
  const int n = 10000;
  for (int i = 0; i <= n; ++i) {
    const double t = -horizon + 2.0 * horizon * i / n;
    const double av = a(t), bv = b(t);
    const double excess = av - bv;
    if (excess > 1e-12 * std::max(1.0, std::abs(bv))) {
      r.dominated = false;
      r.max_violation = std::max(r.max_violation, excess);
      if (r.violations.size() < 16) r.violations.emplace_back(t, excess);
    }
    if (std::abs(t) >= 0.5 * horizon) {
      const double gap = std::abs(bv - av);
      r.max_tail_gap = std::max(r.max_tail_gap, gap);
      if (gap > tail_tol) r.tail_within = false;
    }
  }
  return r;
}

// Sampled audit of the advertised flags over [-window, window].
inline std::vector<std::string> validate_weight(const Weight& w,
                                                double window = 100.0,
                                                int samples = 10000) {
  std::vector<std::string> out;
  auto complain = [&out](const std::string& s) {
    if (out.size() < 16) out.push_back(s);
  };
  double prev_fwd = w(0.0);
  for (int i = 0; i <= samples; ++i) {
    const double t = -window + 2.0 * window * i / samples;
    const double v = w(t);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "non-finite value at t = " << t;
      complain(msg.str());
      continue;
    }
    if (w.bounded_positive &&
        (v < w.lower - 1e-12 || v > w.upper + 1e-12 || !(v > 0.0))) {
      std::ostringstream msg;
      msg << "bound violation at t = " << t << ": " << v;
      complain(msg.str());
    }
    if (w.symmetric && std::abs(v - w(-t)) > 1e-12 * std::max(1.0, std::abs(v))) {
      std::ostringstream msg;
      msg << "asymmetric at t = " << t;
      complain(msg.str());
    }
    if (w.is_constant && v != w(0.0)) {
      std::ostringstream msg;
      msg << "non-constant at t = " << t;
      complain(msg.str());
    }
  }
  if (w.nondecreasing_from_origin) {
    for (int i = 0; i <= samples; ++i) {
      const double t = window * i / samples;
      const double v = w(t);
      if (v < prev_fwd - 1e-12 * std::max(1.0, std::abs(prev_fwd))) {
        std::ostringstream msg;
        msg << "decreases at t = " << t;
        complain(msg.str());
      }
      prev_fwd = std::max(prev_fwd, v);
    }
  }
  if (w.eventually_positive) {
    const double T = w.positivity_threshold;
    for (int i = 1; i <= samples / 10; ++i) {
      const double t = T + (window - T) * i / (samples / 10);
      if (t <= T) continue;
      if (!(w(t) > 0.0)) {
        std::ostringstream msg;
        msg << "not positive at t = " << t << " past threshold " << T;
        complain(msg.str());
      }
    }
  }
  if (w.period > 0.0) {
    for (int i = 0; i <= samples / 10; ++i) {
      const double t = -window + 2.0 * window * i / (samples / 10);
      if (std::abs(w(t + w.period) - w(t)) >
          1e-9 * std::max(1.0, std::abs(w(t)))) {
        std::ostringstream msg;
        msg << "period violation at t = " << t;
        complain(msg.str());
      }
    }
  }
  return out;
}

}  // namespace hbi

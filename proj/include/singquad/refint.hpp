// Reference values for the singular integrals, computed by adaptive polar
// quadrature at extended precision.
//
// In polar coordinates the integral of phi(x) * x_i x_j / |x|^(2+alpha)
// splits into an angular factor t(theta) (cos^2, sin^2, or cos*sin) and a
// radial integral of phi(r w) * r^(1-alpha).  The radial factor r^(1-alpha)
// is an algebraic endpoint singularity at r = 0, which tanh-sinh quadrature
// absorbs with double-exponential accuracy; the angular direction is smooth
// inside each octant and is handled by bisection-adaptive Gauss-Legendre
// panels split at the multiples of pi/4 where the radial extent of a square
// support has corners.

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "singquad/gauss_legendre.hpp"
#include "singquad/kernels.hpp"
#include "singquad/types.hpp"
#include "singquad/xreal.hpp"

namespace singquad {

struct ReferenceResult {
  XReal value;            // the integral
  XReal estimated_error;  // accumulated acceptance disagreements (conservative)
  long panels = 0;        // accepted angular Gauss-Legendre panels
  int max_depth = 0;      // deepest refinement level (angular or radial)
};

namespace detail {

struct AdaptiveStats {
  XReal err_accum = XReal(0);
  long panels = 0;
  int max_depth = 0;
  long evals = 0;
};

// --- tanh-sinh node tables -------------------------------------------------
//
// Abscissas x(t) = tanh(y), y = (pi/2) sinh(t), on t = j*h.  Stored per
// refinement level: level L uses step h = 2^-L; the base level holds every
// node, finer levels hold only the odd multiples (the new points).  To avoid
// cancellation near x = -1 we store (1+x)/2 = 1 / (1 + exp(-2y)) directly,
// which maps to the radius as r = R * (1+x)/2 without losing digits.

struct TanhSinhLevel {
  std::vector<XReal> half_shifted;  // (1 + x_j) / 2, cancellation-free
  std::vector<XReal> weight;        // h * (pi/2) cosh(t_j) / cosh(y_j)^2
};

constexpr int kTanhSinhBaseLevel = 2;

// Tail cutoff: the summand decays like exp(-2 |y| (2 - alpha)) toward r = 0
// (integrand growth r^(1-alpha) against the double-exponential weight) and
// like exp(-2 y) toward r = R, so the slower of the two sets the range.
inline XReal tanh_sinh_tmax(const XReal& alpha) {
  XReal need = XReal(working_digits() + 15) * log(XReal(10)) / XReal(2);
  XReal stretch = XReal(1) / (XReal(2) - alpha);
  if (stretch < XReal(1)) stretch = XReal(1);
  return asinh(need * stretch * XReal(2) / XReal::pi());
}

inline const TanhSinhLevel& tanh_sinh_level(int level, long j_max) {
  static std::map<std::tuple<int, long, int>, TanhSinhLevel> cache;
  auto key = std::make_tuple(level, j_max, working_digits());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  TanhSinhLevel tab;
  XReal pi_half = XReal::pi() / XReal(2);
  XReal h = pow(XReal(2), -static_cast<long>(level));
  bool only_odd = level > kTanhSinhBaseLevel;
  for (long j = -j_max; j <= j_max; ++j) {
    if (only_odd && j % 2 == 0) continue;
    XReal t = h * XReal(j);
    XReal y = pi_half * sinh(t);
    XReal half_shifted = XReal(1) / (XReal(1) + exp(XReal(-2) * y));
    XReal cosh_y = cosh(y);
    tab.half_shifted.push_back(half_shifted);
    tab.weight.push_back(h * pi_half * cosh(t) / (cosh_y * cosh_y));
  }
  return cache.emplace(key, std::move(tab)).first->second;
}

// Integrates f over (0, R) by tanh-sinh refinement until two consecutive
// levels agree within tol, charging the final disagreement to the error
// accumulator.  f may be endpoint-singular (integrably) at either end.
inline XReal tanh_sinh_integral(const std::function<XReal(const XReal&)>& f,
                                const XReal& radius, const XReal& t_max,
                                const XReal& tol, int level_cap, AdaptiveStats& stats,
                                long eval_cap) {
  XReal half_r = radius / XReal(2);
  auto level_contribution = [&](int level) -> XReal {
    long j_max = static_cast<long>(ldexp2(t_max, level).to_double());
    const TanhSinhLevel& tab = tanh_sinh_level(level, j_max);
    XAccumulator acc;
    for (std::size_t i = 0; i < tab.half_shifted.size(); ++i) {
      XReal r = radius * tab.half_shifted[i];
      acc.add(tab.weight[i] * f(r));
      ++stats.evals;
    }
    return acc.value() * half_r;
  };

  XReal value = level_contribution(kTanhSinhBaseLevel);
  XReal prev_diff(0);
  XReal err(0);
  int level = kTanhSinhBaseLevel;
  while (level < level_cap) {
    ++level;
    XReal refined = value / XReal(2) + level_contribution(level);
    XReal diff = abs(refined - value);
    value = refined;
    int reached = level - kTanhSinhBaseLevel;
    if (reached > stats.max_depth) stats.max_depth = reached;
    // Error model: halving the step roughly squares the error, so the value
    // just computed is about diff^2 / prev_diff accurate once the refinement
    // is in its convergent regime; until then the plain diff stands.
    err = diff;
    if (prev_diff > diff && diff.sign() > 0) {
      XReal model = diff * diff / prev_diff;
      if (model < err) err = model;
    }
    prev_diff = diff;
    if (err <= tol || stats.evals > eval_cap) break;
  }
  stats.err_accum += err;
  return value;
}

// --- angular direction: bisection-adaptive Gauss-Legendre -------------------

inline XReal gl_panel(const std::function<XReal(const XReal&)>& f, const XReal& a,
                      const XReal& b, const GLRule& rule) {
  XReal mid = (a + b) / XReal(2);
  XReal half = (b - a) / XReal(2);
  XAccumulator acc;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc.add(rule.weights[i] * f(mid + half * rule.nodes[i]));
  }
  return acc.value() * half;
}

// Bisection-adaptive refinement of [a, b] whose one-panel value `whole` is
// already known.  Acceptance compares `whole` against the two half-panels and
// keeps the halved value.  Hitting the depth cap accepts the halved value and
// charges the disagreement to the error estimate, so a pathological corner
// degrades the estimate instead of looping forever.
inline XReal adaptive_gl_rec(const std::function<XReal(const XReal&)>& f, const XReal& a,
                             const XReal& b, const XReal& whole, const XReal& tol,
                             const GLRule& rule, AdaptiveStats& stats, int depth,
                             int depth_cap, long eval_cap) {
  XReal mid = (a + b) / XReal(2);
  XReal left = gl_panel(f, a, mid, rule);
  XReal right = gl_panel(f, mid, b, rule);
  XReal split = left + right;
  XReal disagreement = abs(whole - split);
  if (depth > stats.max_depth) stats.max_depth = depth;
  if (disagreement <= tol || depth >= depth_cap || stats.evals > eval_cap) {
    stats.err_accum += disagreement;
    stats.panels += 2;
    return split;
  }
  XReal half_tol = tol / XReal(2);
  return adaptive_gl_rec(f, a, mid, left, half_tol, rule, stats, depth + 1, depth_cap,
                         eval_cap) +
         adaptive_gl_rec(f, mid, b, right, half_tol, rule, stats, depth + 1, depth_cap,
                         eval_cap);
}

inline XReal adaptive_gl(const std::function<XReal(const XReal&)>& f, const XReal& a,
                         const XReal& b, const XReal& tol, const GLRule& rule,
                         AdaptiveStats& stats, int depth, int depth_cap, long eval_cap) {
  XReal whole = gl_panel(f, a, b, rule);
  return adaptive_gl_rec(f, a, b, whole, tol, rule, stats, depth, depth_cap, eval_cap);
}

}  // namespace detail

/// Integrates phi * kernel over the plane to roughly target_digits
/// significant digits (absolute digits when the value is near zero).
/// Requires the integrand's extended-precision path.
inline ReferenceResult reference_integral(const Integrand& phi, Kernel kernel,
                                          const XReal& alpha, int target_digits) {
  check_alpha(alpha);
  if (!phi.eval_x)
    throw DomainError("reference_integral: integrand lacks an extended-precision path");
  if (target_digits < 4 || target_digits > working_digits() - 8)
    throw DomainError(
        "reference_integral: target digits must lie in [4, working_digits - 8]");

  const GLRule& rule = gauss_legendre_rule(24);
  const XReal one_minus_alpha = XReal(1) - alpha;
  const XReal support(phi.support_radius);
  const XReal pi = XReal::pi();
  const XReal ts_tmax = detail::tanh_sinh_tmax(alpha);

  // angular kernel factor
  auto t_factor = [&](const XReal& c, const XReal& s) -> XReal {
    switch (kernel) {
      case Kernel::on_diag_x1: return c * c;
      case Kernel::on_diag_x2: return s * s;
      default: return c * s;
    }
  };

  // One full sweep at a given absolute tolerance.
  auto sweep = [&](const XReal& tol, detail::AdaptiveStats& stats) -> XReal {
    const long eval_cap = 40L * 1000L * 1000L;
    // each octant gets an equal share; each radial call a further share
    XReal theta_tol = tol / XReal(16);
    XReal radial_tol = tol / XReal(4096);
    XAccumulator total;
    for (int oct = 0; oct < 8; ++oct) {
      XReal th_lo = pi * XReal(oct) / XReal(4);
      XReal th_hi = pi * XReal(oct + 1) / XReal(4);
      auto theta_integrand = [&](const XReal& th) -> XReal {
        XReal c = cos(th), s = sin(th);
        XReal denom = abs(c) > abs(s) ? abs(c) : abs(s);
        XReal rmax = support / denom;
        auto radial_integrand = [&](const XReal& r) -> XReal {
          return phi.eval_x(r * c, r * s) * pow(r, one_minus_alpha);
        };
        XReal radial = detail::tanh_sinh_integral(radial_integrand, rmax, ts_tmax,
                                                  radial_tol, 11, stats, eval_cap);
        return t_factor(c, s) * radial;
      };
      total.add(detail::adaptive_gl(theta_integrand, th_lo, th_hi, theta_tol, rule, stats,
                                    0, 40, eval_cap));
    }
    return total.value();
  };

  // Pass 1: coarse value to set the scale; pass 2: the real tolerance.
  detail::AdaptiveStats coarse_stats;
  XReal coarse = sweep(pow(XReal(10), -8), coarse_stats);
  XReal scale = abs(coarse);
  if (scale < XReal(1)) scale = XReal(1);
  XReal tol = scale * pow(XReal(10), -static_cast<long>(target_digits)) / XReal(4);

  detail::AdaptiveStats stats;
  XReal value = sweep(tol, stats);
  if (stats.evals > 40L * 1000L * 1000L)
    throw NonConvergenceError("reference_integral: evaluation budget exhausted");

  ReferenceResult res;
  res.value = value;
  res.estimated_error = stats.err_accum;
  res.panels = stats.panels;
  res.max_depth = stats.max_depth;
  return res;
}

}  // namespace singquad

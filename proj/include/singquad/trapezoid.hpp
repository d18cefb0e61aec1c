// Punctured trapezoidal sums: h^2 * sum of f(beta h) over integer lattice
// points beta != 0 with |beta h|_inf <= radius.  The origin is skipped, which
// is what makes the sum finite for integrands with a point singularity.
//
// Both precisions share the same deterministic traversal (rows by increasing
// first coordinate, then second), so a double-mode and an extended-mode run
// sum the same terms in the same order.

#pragma once

#include <functional>

#include "singquad/xreal.hpp"

namespace singquad {

inline double punctured_trapezoid(const std::function<double(double, double)>& f,
                                  double h, double radius) {
  if (h <= 0 || radius <= 0) throw DomainError("punctured_trapezoid: h, radius > 0");
  long bmax = static_cast<long>(radius / h);
  DAccumulator acc;
  for (long b1 = -bmax; b1 <= bmax; ++b1) {
    for (long b2 = -bmax; b2 <= bmax; ++b2) {
      if (b1 == 0 && b2 == 0) continue;
      acc.add(f(static_cast<double>(b1) * h, static_cast<double>(b2) * h));
    }
  }
  return acc.value() * h * h;
}

inline XReal punctured_trapezoid(const std::function<XReal(const XReal&, const XReal&)>& f,
                                 const XReal& h, const XReal& radius) {
  if (h.sign() <= 0 || radius.sign() <= 0)
    throw DomainError("punctured_trapezoid: h, radius > 0");
  long bmax = static_cast<long>((radius / h).to_double());
  XAccumulator acc;
  for (long b1 = -bmax; b1 <= bmax; ++b1) {
    XReal x1 = XReal(b1) * h;
    for (long b2 = -bmax; b2 <= bmax; ++b2) {
      if (b1 == 0 && b2 == 0) continue;
      acc.add(f(x1, XReal(b2) * h));
    }
  }
  return acc.value() * h * h;
}

}  // namespace singquad

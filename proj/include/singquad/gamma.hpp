#pragma once

// Gamma function on XReal via Spouge's series.
//
// Spouge's approximation with parameter a:
//
//   Gamma(x) = (x-1+a)^(x-1/2) * exp(-(x-1+a)) * [ sqrt(2*pi)
//              + sum_{k=1}^{a-1} c_k / (x-1+k) ]            for x >= 1/2,
//   c_k = (-1)^(k-1) / (k-1)! * (a-k)^(k-1/2) * exp(a-k),
//
// with relative error below a^(-1/2) * (2*pi)^(-(a+1/2)).  The parameter and
// the coefficient table are derived from the current working precision, so
// accuracy scales with it; x < 1/2 goes through the reflection formula.

#include "singquad/xreal.hpp"

#include <map>
#include <memory>
#include <vector>

namespace singquad {
namespace detail {

struct SpougeTable {
  long a = 0;
  std::vector<XReal> coeff;  // coeff[0] = sqrt(2*pi), coeff[k] = c_k
};

inline const SpougeTable& spouge_table(int digits) {
  static std::map<int, std::unique_ptr<SpougeTable>> cache;
  auto it = cache.find(digits);
  if (it != cache.end()) return *it->second;

  // (2*pi)^(-(a+1/2)) <= 10^-(digits+10)  =>  a >= (digits+10)*ln10/ln(2*pi).
  long a = static_cast<long>((digits + 10) * 2.302585092994046 / 1.8378770664093453) + 2;

  auto table = std::make_unique<SpougeTable>();
  table->a = a;
  {
    // Coefficients carry a few tens of guard digits; they are computed once
    // per precision and reused.
    PrecisionGuard guard(digits + 30);
    table->coeff.reserve(static_cast<size_t>(a));
    table->coeff.push_back(sqrt(XReal::pi() * 2));
    XReal factorial(1);  // (k-1)!
    for (long k = 1; k < a; ++k) {
      if (k > 1) factorial *= XReal(k - 1);
      XReal amk(a - k);
      XReal ck = pow(amk, XReal(k) - XReal(0.5)) * exp(amk) / factorial;
      if (k % 2 == 0) ck = -ck;
      table->coeff.push_back(ck);
    }
  }
  const SpougeTable& ref = *table;
  cache.emplace(digits, std::move(table));
  return ref;
}

inline XReal gamma_spouge_right(const XReal& x, const SpougeTable& t) {
  // Valid for x >= 1/2.
  XReal z = x - 1;
  XReal s = t.coeff[0];
  for (long k = 1; k < t.a; ++k) s += t.coeff[static_cast<size_t>(k)] / (z + XReal(k));
  XReal za = z + XReal(t.a);
  return pow(za, z + XReal(0.5)) * exp(-za) * s;
}

}  // namespace detail

/// Gamma(x) for real x excluding the poles 0, -1, -2, ...
inline XReal gamma(const XReal& x) {
  if (!x.is_finite()) throw DomainError("gamma of non-finite value");
  if (x.sign() <= 0 && floor(x) == x) throw DomainError("gamma pole at non-positive integer");

  int digits = working_digits();
  PrecisionGuard guard(digits + 20);
  const detail::SpougeTable& table = detail::spouge_table(digits);

  XReal y;
  XReal xw = x + XReal(0);  // re-round the input into the guarded precision
  if (xw >= XReal(0.5)) {
    y = detail::gamma_spouge_right(xw, table);
  } else {
    // Reflection: Gamma(x) = pi / (sin(pi x) * Gamma(1 - x)).
    XReal pi = XReal::pi();
    y = pi / (sin(pi * xw) * detail::gamma_spouge_right(XReal(1) - xw, table));
  }
  // Round the result back to the caller's working precision.
  XReal out;
  mpfr_set_prec(out.raw(), detail::digits_to_bits(digits));
  mpfr_set(out.raw(), y.raw(), MPFR_RNDN);
  return out;
}

}  // namespace singquad

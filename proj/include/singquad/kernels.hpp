#pragma once

// Kernel evaluation, the radial regularizer, closed-form regularized moments,
// and the built-in test integrands.
//
// Kernels (0 < alpha < 2):
//   on_diag_x1 : s(x)  = x1^2   / |x|^(2+alpha)
//   on_diag_x2 : s(x)  = x2^2   / |x|^(2+alpha)
//   off_diag   : s(x)  = x1*x2  / |x|^(2+alpha)
//
// Regularizer: g(x) = exp(-|x|^k), radially symmetric and flat to order k-1
// at the origin (even k), so correction-weight systems built on it have error
// expansions starting at h^k.

#include "singquad/gamma.hpp"
#include "singquad/types.hpp"

#include <cmath>
#include <functional>
#include <string>

namespace singquad {

/// s(x) at a nonzero point; throws at the origin where the kernel is singular.
inline double kernel_eval(Kernel kernel, double alpha, double x1, double x2) {
  double r2 = x1 * x1 + x2 * x2;
  if (r2 == 0.0) throw DomainError("kernel_eval: kernel is singular at the origin");
  double num;
  switch (kernel) {
    case Kernel::on_diag_x1: num = x1 * x1; break;
    case Kernel::on_diag_x2: num = x2 * x2; break;
    default: num = x1 * x2; break;
  }
  return num * std::pow(r2, -0.5 * (2.0 + alpha));
}

inline XReal kernel_eval(Kernel kernel, const XReal& alpha, const XReal& x1, const XReal& x2) {
  XReal r2 = x1 * x1 + x2 * x2;
  if (r2.is_zero()) throw DomainError("kernel_eval: kernel is singular at the origin");
  XReal num;
  switch (kernel) {
    case Kernel::on_diag_x1: num = x1 * x1; break;
    case Kernel::on_diag_x2: num = x2 * x2; break;
    default: num = x1 * x2; break;
  }
  return num * pow(r2, (XReal(2) + alpha) / XReal(-2));
}

/// Validates a regularizer exponent: even and at least 2.
inline void check_regularizer_exponent(int k) {
  if (k < 2 || k % 2 != 0)
    throw DomainError("regularizer exponent k must be even and >= 2");
}

/// g(x) = exp(-|x|^k) for even k; |x|^k = (x1^2+x2^2)^(k/2) stays a pure
/// integer power, so no fractional pow is involved.
inline double regularizer_g(int k, double x1, double x2) {
  check_regularizer_exponent(k);
  double r2 = x1 * x1 + x2 * x2;
  double rk = 1.0;
  for (int i = 0; i < k / 2; ++i) rk *= r2;
  return std::exp(-rk);
}

inline XReal regularizer_g(int k, const XReal& x1, const XReal& x2) {
  check_regularizer_exponent(k);
  XReal r2 = x1 * x1 + x2 * x2;
  XReal rk = pow(r2, static_cast<long>(k / 2));
  return exp(-rk);
}

/// Radius beyond which exp(-r^k) drops below 10^-(digits+5): the regularized
/// integrands are treated as compactly supported outside it.
inline XReal truncation_radius(int k, int digits) {
  check_regularizer_exponent(k);
  XReal t = XReal(digits + 5) * log(XReal(10));
  return pow(t, XReal(1) / XReal(k));
}

/// Closed form of the regularized moment integral
///   M(xi) = integral over R^2 of g(x) * s(x) * x^(2*xi) dx
/// obtained in polar coordinates: the angular factor is a beta integral, the
/// radial factor is gamma(m/k)/k after substituting t = r^k.
///
/// on_diag_x1:  2 G(xi1+3/2) G(xi2+1/2) G((2-alpha+2|xi|)/k) / (k G(|xi|+2))
/// on_diag_x2:  same with xi components swapped
/// off_diag  :  2 G(xi1+1/2) G(xi2+1/2) G((2|xi|-alpha)/k) / (k G(|xi|+1)),
///              defined for xi >= (1,1) (the moment carries x^(2xi-(1,1))).
inline XReal moment_integral(Kernel kernel, MultiIndex xi, const XReal& alpha, int k) {
  check_alpha(alpha);
  check_regularizer_exponent(k);
  if (xi.a < 0 || xi.b < 0) throw DomainError("moment_integral: xi must be nonnegative");

  XReal half(0.5);
  XReal kk(k);
  if (is_on_diag(kernel)) {
    int e1 = (kernel == Kernel::on_diag_x1) ? xi.a : xi.b;
    int e2 = (kernel == Kernel::on_diag_x1) ? xi.b : xi.a;
    XReal radial_arg = (XReal(2) - alpha + XReal(2 * (xi.a + xi.b))) / kk;
    return XReal(2) * gamma(XReal(e1) + XReal(1) + half) * gamma(XReal(e2) + half) *
           gamma(radial_arg) / (kk * gamma(XReal(xi.a + xi.b) + XReal(2)));
  }
  if (xi.a < 1 || xi.b < 1)
    throw DomainError("moment_integral: off-diagonal moments need xi >= (1,1)");
  XReal radial_arg = (XReal(2 * (xi.a + xi.b)) - alpha) / kk;
  return XReal(2) * gamma(XReal(xi.a) + half) * gamma(XReal(xi.b) + half) *
         gamma(radial_arg) / (kk * gamma(XReal(xi.a + xi.b) + XReal(1)));
}

/// Normalizing constant of the integral fractional Laplacian,
///   C(d, alpha) = 2^alpha G((alpha+d)/2) / (pi^(d/2) |G(-alpha/2)|).
inline XReal frac_laplacian_constant(int d, const XReal& alpha) {
  check_alpha(alpha);
  if (d < 1) throw DomainError("frac_laplacian_constant: dimension must be >= 1");
  XReal half_alpha = alpha / XReal(2);
  XReal num = pow(XReal(2), alpha) * gamma((alpha + XReal(d)) / XReal(2));
  XReal den = pow(XReal::pi(), XReal(d) / XReal(2)) * abs(gamma(-half_alpha));
  return num / den;
}

/// A 2D integrand with both a double and an extended-precision evaluation
/// path.  eval vanishes (exactly, or below working epsilon for the
/// regularizer family) wherever |x|_inf exceeds support_radius.
struct Integrand {
  std::function<double(double, double)> eval_d;
  std::function<XReal(const XReal&, const XReal&)> eval_x;
  double support_radius = 1.0;
  std::string smoothness;
  std::string name;
};

namespace detail {

// (1 - t)_+^7 building block of the compactly supported test functions.
inline double plus_pow7_d(double t) { return t > 0.0 ? std::pow(t, 7) : 0.0; }
inline XReal plus_pow7_x(const XReal& t) {
  if (!(t > XReal(0))) return XReal(0);
  return pow(t, 7L);
}

}  // namespace detail

/// Built-in integrands addressable by name:
///   builtin:on-test  -- (1+x1+x1^2)(1+x2+x2^2) ((1-x1^2)+ (1-x2^2)+)^7
///   builtin:off-test -- (1+x1)(1+x2) ((1-x1^2)+ (1-x2^2)+)^7
///   builtin:g6       -- exp(-|x|^6)
///   builtin:g8       -- exp(-|x|^8)
///   builtin:zero     -- 0
/// The first two are C^6 with support [-1,1]^2; the regularizers are smooth
/// and practically supported inside the truncation radius at the current
/// working precision.
inline Integrand builtin_integrand(const std::string& name) {
  Integrand f;
  f.name = name;
  if (name == "builtin:on-test") {
    f.support_radius = 1.0;
    f.smoothness = "C6, support [-1,1]^2";
    f.eval_d = [](double x1, double x2) {
      double m = detail::plus_pow7_d(1.0 - x1 * x1) * detail::plus_pow7_d(1.0 - x2 * x2);
      return (1.0 + x1 + x1 * x1) * (1.0 + x2 + x2 * x2) * m;
    };
    f.eval_x = [](const XReal& x1, const XReal& x2) {
      XReal m = detail::plus_pow7_x(XReal(1) - x1 * x1) * detail::plus_pow7_x(XReal(1) - x2 * x2);
      return (XReal(1) + x1 + x1 * x1) * (XReal(1) + x2 + x2 * x2) * m;
    };
    return f;
  }
  if (name == "builtin:off-test") {
    f.support_radius = 1.0;
    f.smoothness = "C6, support [-1,1]^2";
    f.eval_d = [](double x1, double x2) {
      double m = detail::plus_pow7_d(1.0 - x1 * x1) * detail::plus_pow7_d(1.0 - x2 * x2);
      return (1.0 + x1) * (1.0 + x2) * m;
    };
    f.eval_x = [](const XReal& x1, const XReal& x2) {
      XReal m = detail::plus_pow7_x(XReal(1) - x1 * x1) * detail::plus_pow7_x(XReal(1) - x2 * x2);
      return (XReal(1) + x1) * (XReal(1) + x2) * m;
    };
    return f;
  }
  if (name == "builtin:g6" || name == "builtin:g8") {
    int k = (name == "builtin:g6") ? 6 : 8;
    f.support_radius = truncation_radius(k, working_digits()).to_double();
    f.smoothness = "smooth, practically compact";
    f.eval_d = [k](double x1, double x2) { return regularizer_g(k, x1, x2); };
    f.eval_x = [k](const XReal& x1, const XReal& x2) { return regularizer_g(k, x1, x2); };
    return f;
  }
  if (name == "builtin:zero") {
    f.support_radius = 1.0;
    f.smoothness = "identically zero";
    f.eval_d = [](double, double) { return 0.0; };
    f.eval_x = [](const XReal&, const XReal&) { return XReal(0); };
    return f;
  }
  throw DomainError("unknown built-in integrand: '" + name + "'");
}

}  // namespace singquad

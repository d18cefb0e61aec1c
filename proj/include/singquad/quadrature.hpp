// Applying the corrected rule: punctured trapezoidal sum of phi * kernel
// plus the weighted correction on the near-origin stencil,
//     Q_h[phi] = T_h0[phi s] + h^(2-alpha) sum_j w_j sum_{beta in G_j} sgn phi(beta h).
//
// The same assembly serves the limiting weights (from a WeightTable) and the
// finite-spacing weights (weights_at_h); only the numbers differ.  A table
// with no entries degenerates to the bare punctured rule, which is the p = 1
// off-diagonal method (its stencil is empty because the odd-odd moments of
// low degree vanish by parity).

#pragma once

#include <string>
#include <vector>

#include "singquad/kernels.hpp"
#include "singquad/stencil.hpp"
#include "singquad/trapezoid.hpp"
#include "singquad/weightgen.hpp"
#include "singquad/xreal.hpp"

namespace singquad {

enum class PrecisionMode { double_prec, extended };

inline PrecisionMode parse_mode(const std::string& s) {
  if (s == "double") return PrecisionMode::double_prec;
  if (s == "extended") return PrecisionMode::extended;
  throw DomainError("unknown precision mode: " + s + " (want double|extended)");
}

struct QuadratureConfig {
  double h = 1.0 / 32;
  double radius = 0;  // trapezoid truncation; 0 -> the integrand's support radius
  PrecisionMode mode = PrecisionMode::double_prec;
};

namespace detail {

inline double resolve_radius(const Integrand& phi, const QuadratureConfig& cfg) {
  double radius = cfg.radius > 0 ? cfg.radius : phi.support_radius;
  if (!(radius > 0)) throw DomainError("corrected_quadrature: no truncation radius");
  if (!(cfg.h > 0)) throw DomainError("corrected_quadrature: h must be positive");
  return radius;
}

// shared assembly once the weight values are known (paired with the stencil)
inline XReal apply_rule(const Integrand& phi, Kernel kernel, const XReal& alpha,
                        const std::vector<MultiIndex>& gammas,
                        const std::vector<XReal>& weights, const QuadratureConfig& cfg) {
  check_alpha(alpha);
  double radius = resolve_radius(phi, cfg);

  if (cfg.mode == PrecisionMode::double_prec) {
    if (!phi.eval_d)
      throw DomainError("corrected_quadrature: integrand lacks a double path");
    double al = alpha.to_double();
    auto f = [&](double x1, double x2) {
      return phi.eval_d(x1, x2) * kernel_eval(kernel, al, x1, x2);
    };
    double trap = punctured_trapezoid(f, cfg.h, radius);
    DAccumulator corr;
    for (std::size_t j = 0; j < gammas.size(); ++j) {
      double wj = weights[j].to_double();
      for (const SignedPoint& pt : symmetry_group(kernel, gammas[j]))
        corr.add(wj * pt.sign * phi.eval_d(pt.x * cfg.h, pt.y * cfg.h));
    }
    return XReal(trap + std::pow(cfg.h, 2.0 - al) * corr.value());
  }

  if (!phi.eval_x)
    throw DomainError("corrected_quadrature: integrand lacks an extended path");
  XReal h(cfg.h);
  auto f = [&](const XReal& x1, const XReal& x2) {
    return phi.eval_x(x1, x2) * kernel_eval(kernel, alpha, x1, x2);
  };
  XReal trap = punctured_trapezoid(f, h, XReal(radius));
  XAccumulator corr;
  for (std::size_t j = 0; j < gammas.size(); ++j) {
    for (const SignedPoint& pt : symmetry_group(kernel, gammas[j]))
      corr.add(weights[j] * XReal(pt.sign) * phi.eval_x(XReal(pt.x) * h, XReal(pt.y) * h));
  }
  return trap + pow(h, XReal(2) - alpha) * corr.value();
}

}  // namespace detail

/// The corrected rule with precomputed limiting weights.
inline XReal corrected_quadrature(const Integrand& phi, const WeightTable& table,
                                  const QuadratureConfig& cfg = {}) {
  std::vector<MultiIndex> gammas;
  std::vector<XReal> weights;
  gammas.reserve(table.entries.size());
  weights.reserve(table.entries.size());
  for (const WeightEntry& e : table.entries) {
    gammas.push_back(e.gamma);
    weights.push_back(e.value);
  }
  return detail::apply_rule(phi, table.kernel, table.alpha, gammas, weights, cfg);
}

/// The corrected rule with spacing-matched weights omega(h): exact (to
/// round-off) on the span of regularized monomials the moment conditions
/// enforce.  Extended precision only -- the point of this variant is to
/// verify identities beyond double accuracy.
inline XReal corrected_quadrature_hweights(const Integrand& phi, Kernel kernel, int p,
                                           const XReal& alpha, int k,
                                           const QuadratureConfig& cfg = {}) {
  if (cfg.mode != PrecisionMode::extended)
    throw DomainError("corrected_quadrature_hweights: extended mode only");
  std::vector<MultiIndex> gammas = index_set(kernel, p);
  std::vector<XReal> weights = weights_at_h(kernel, p, alpha, k, XReal(cfg.h));
  return detail::apply_rule(phi, kernel, alpha, gammas, weights, cfg);
}

/// All three kernel components at once.
struct IntegralTriple {
  XReal i11, i22, i12;
};

inline IntegralTriple integral_triple(const Integrand& phi, const WeightTable& t11,
                                      const WeightTable& t22, const WeightTable& t12,
                                      const QuadratureConfig& cfg = {}) {
  if (t11.kernel != Kernel::on_diag_x1 || t22.kernel != Kernel::on_diag_x2 ||
      t12.kernel != Kernel::off_diag)
    throw DomainError("integral_triple: tables out of kernel order (x1, x2, off)");
  IntegralTriple t;
  t.i11 = corrected_quadrature(phi, t11, cfg);
  t.i22 = corrected_quadrature(phi, t22, cfg);
  t.i12 = corrected_quadrature(phi, t12, cfg);
  return t;
}

/// An empty weight table: the bare punctured rule, used for the off-diagonal
/// p = 1 method whose correction stencil has no nodes.
inline WeightTable bare_table(Kernel kernel, const XReal& alpha) {
  WeightTable t;
  t.kernel = kernel;
  t.p = 1;
  t.alpha = alpha;
  t.k = default_regularizer_exponent(kernel);
  t.working_precision = working_digits();
  t.digits = t.working_precision - 10;  // no correction terms: arithmetic only
  t.h_base = 0;
  t.levels = 1;
  return t;
}

}  // namespace singquad

// Correction-weight generation.
//
// The corrected rule's weights solve the moment conditions
//     K diag(g(|gamma_j| h)) omega(h) = c(h),
// where K is the exact integer coefficient matrix (coeffmat.hpp) and c(h) is
// the vector of regularized moment deficits
//     c_i(h) = (M_i - T_h0[f_i]) / h^(2|xi_i|+2-alpha)     (on-diagonal)
//     c_i(h) = (M_i - T_h0[f_i]) / h^(2|xi_i|-alpha)       (off-diagonal)
// with M_i the closed-form moment of f_i = g * kernel * monomial and T_h0 the
// punctured trapezoidal sum.  Because g(x) = exp(-|x|^k) is entire for even k
// and decays super-exponentially, the deficit expands in pure powers of h^k:
//     c(h) = c(0) + A_1 h^k + A_2 h^(2k) + ... + (Poisson tail)
// so Richardson extrapolation with orders k, 2k, ... peels off the
// h-dependence; the limit c(0) determines the h-independent weights
// K omega = c(0).  The weights depend only on the kernel, p, and alpha --
// the regularizer g cancels from the limit -- which is what makes a single
// precomputed table reusable for every integrand and spacing.
//
// The Poisson tail is the trapezoidal error of the analytic part of the
// summand, of size exp(-const * (2 pi / h)^(k/(k-1))); it is outside the
// h^(jk) ladder, so it floors the achievable accuracy for a given base
// spacing (for k = 6 it is ~1e-8 at h = 1/8, ~1e-18 at 1/16, ~5e-43 at
// 1/32).  The default ladder starts at 1/32, where the floor sits far below
// the working precision; the reported digit claim is measured, not assumed,
// so a coarser ladder degrades the claim rather than the honesty.

#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "singquad/coeffmat.hpp"
#include "singquad/kernels.hpp"
#include "singquad/linalg.hpp"
#include "singquad/stencil.hpp"
#include "singquad/xreal.hpp"

namespace singquad {

// Moment deficit vector and a bound on its round-off noise.  The noise bound
// tracks the cancellation in (M - T): both operands are O(1) while the
// difference is O(h^power), so the quotient loses exactly the digits the
// divisor is small by.
struct CVector {
  std::vector<XReal> values;
  std::vector<XReal> noise;
};

inline CVector c_vector(Kernel kernel, int p, const XReal& alpha, int k, const XReal& h) {
  check_alpha(alpha);
  check_regularizer_exponent(k);
  if (h.sign() <= 0) throw DomainError("c_vector: h must be positive");

  const std::vector<MultiIndex> indices = index_set(kernel, p);
  const std::size_t n = indices.size();
  const bool on_diag = is_on_diag(kernel);

  // Half-powers of the even monomial x1^(2*ax) x2^(2*bx) attached to each
  // moment row: the kernel contributes x1^2, x2^2, or x1 x2, which folds the
  // summand into a function even in each coordinate separately.
  std::vector<int> ax(n), bx(n);
  int max_a = 0, max_b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    switch (kernel) {
      case Kernel::on_diag_x1:
        ax[i] = indices[i].a + 1;
        bx[i] = indices[i].b;
        break;
      case Kernel::on_diag_x2:
        ax[i] = indices[i].a;
        bx[i] = indices[i].b + 1;
        break;
      case Kernel::off_diag:
        ax[i] = indices[i].a;
        bx[i] = indices[i].b;
        break;
    }
    if (ax[i] > max_a) max_a = ax[i];
    if (bx[i] > max_b) max_b = bx[i];
  }

  const XReal radius = truncation_radius(k, working_digits());
  const long bmax = static_cast<long>((radius / h).to_double());
  const long k_half = k / 2;
  const XReal kernel_exp = -(XReal(2) + alpha) / XReal(2);  // r2^kernel_exp = |x|^-(2+alpha)

  // Evenness in each coordinate reduces the lattice to the open first
  // quadrant (weight 4) plus, for the on-diagonal kernels, the two half-axes
  // (weight 2); the off-diagonal monomials vanish on the axes.
  std::vector<XAccumulator> quad(n), axis(n);
  std::vector<XReal> pow1(static_cast<std::size_t>(max_a) + 1);
  std::vector<XReal> pow2(static_cast<std::size_t>(max_b) + 1);
  pow1[0] = XReal(1);
  pow2[0] = XReal(1);

  for (long b1 = 1; b1 <= bmax; ++b1) {
    XReal x1 = XReal(b1) * h;
    XReal x1sq = x1 * x1;
    for (int a = 1; a <= max_a; ++a) pow1[a] = pow1[a - 1] * x1sq;
    for (long b2 = 1; b2 <= bmax; ++b2) {
      XReal x2 = XReal(b2) * h;
      XReal x2sq = x2 * x2;
      for (int b = 1; b <= max_b; ++b) pow2[b] = pow2[b - 1] * x2sq;
      XReal r2 = x1sq + x2sq;
      XReal w = exp(-pow(r2, k_half)) * pow(r2, kernel_exp);
      for (std::size_t i = 0; i < n; ++i) quad[i].add(w * pow1[ax[i]] * pow2[bx[i]]);
    }
  }
  if (on_diag) {
    // Axis points (+-b, 0) keep only rows whose x2-power vanishes (0^0 = 1)
    // and contribute x1^(2 ax); points (0, +-b) mirror that with the roles
    // swapped.  For a given kernel at most one of the two cases can fire per
    // row, since the kernel's own square makes one exponent always positive.
    const int max_ab = max_a > max_b ? max_a : max_b;
    std::vector<XReal> powx(static_cast<std::size_t>(max_ab) + 1);
    powx[0] = XReal(1);
    for (long b = 1; b <= bmax; ++b) {
      XReal x = XReal(b) * h;
      XReal xsq = x * x;
      for (int j = 1; j <= max_ab; ++j) powx[j] = powx[j - 1] * xsq;
      XReal w = exp(-pow(xsq, k_half)) * pow(xsq, kernel_exp);
      for (std::size_t i = 0; i < n; ++i) {
        if (bx[i] == 0)
          axis[i].add(w * powx[ax[i]]);
        else if (ax[i] == 0)
          axis[i].add(w * powx[bx[i]]);
      }
    }
  }

  CVector out;
  out.values.resize(n);
  out.noise.resize(n);
  const XReal hsq = h * h;
  const XReal eps = pow(XReal(10), -static_cast<long>(working_digits() - 2));
  for (std::size_t i = 0; i < n; ++i) {
    XReal trap = (XReal(4) * quad[i].value() + XReal(2) * axis[i].value()) * hsq;
    XReal moment = moment_integral(kernel, indices[i], alpha, k);
    long two_xi = 2 * (indices[i].a + indices[i].b);
    XReal power = XReal(on_diag ? two_xi + 2 : two_xi) - alpha;
    XReal divisor = pow(h, power);
    out.values[i] = (moment - trap) / divisor;
    out.noise[i] = (abs(moment) + abs(trap)) * eps / divisor;
  }
  return out;
}

// Richardson extrapolation of componentwise level data: levels[r] holds the
// vector measured at h / 2^r, and orders[s] is the h-power eliminated by
// stage s.  Returns the fully extrapolated vector and, per component, the
// difference between the final value and the previous stage's finest entry
// (a conservative error estimate for the extrapolation).
struct RichardsonResult {
  std::vector<XReal> values;
  std::vector<XReal> disagreement;
  int stages = 0;
};

inline RichardsonResult richardson(const std::vector<std::vector<XReal>>& levels,
                                   const std::vector<long>& orders) {
  if (levels.size() < 2) throw DomainError("richardson: need at least two levels");
  const std::size_t n = levels.front().size();
  for (const auto& level : levels)
    if (level.size() != n) throw DomainError("richardson: inconsistent level widths");
  if (orders.size() + 1 < levels.size())
    throw DomainError("richardson: need one order per stage (levels - 1)");

  std::vector<std::vector<XReal>> cur = levels;
  std::vector<XReal> prev_finest = levels.back();
  int stages = 0;
  while (cur.size() > 1) {
    XReal factor = ldexp2(XReal(1), orders[static_cast<std::size_t>(stages)]);
    XReal denom = factor - XReal(1);
    prev_finest = cur.back();
    std::vector<std::vector<XReal>> next(cur.size() - 1, std::vector<XReal>(n));
    for (std::size_t r = 0; r + 1 < cur.size(); ++r)
      for (std::size_t i = 0; i < n; ++i)
        next[r][i] = (factor * cur[r + 1][i] - cur[r][i]) / denom;
    cur = std::move(next);
    ++stages;
  }

  RichardsonResult res;
  res.values = cur.front();
  res.stages = stages;
  res.disagreement.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    res.disagreement[i] = abs(res.values[i] - prev_finest[i]);
  return res;
}

struct WeightEntry {
  MultiIndex gamma;
  XReal value;
};

struct WeightTable {
  Kernel kernel = Kernel::on_diag_x1;
  int p = 0;
  XReal alpha = XReal(0);
  int k = 0;                // regularizer exponent used in generation
  int digits = 0;           // digits of the weights believed correct
  double h_base = 0;        // coarsest lattice spacing of the level ladder
  int levels = 0;           // number of spacings (h, h/2, ...)
  int working_precision = 0;
  std::vector<WeightEntry> entries;  // in index_set order
};

inline int default_regularizer_exponent(Kernel kernel) {
  return is_on_diag(kernel) ? 6 : 8;
}

struct WeightGenOptions {
  double h_base = 1.0 / 32;
  int levels = 3;
  int k = 0;  // 0 -> default_regularizer_exponent(kernel)
};

namespace detail {

inline void check_dyadic(double h_base) {
  if (!(h_base > 0) || h_base > 1)
    throw DomainError("weight generation: h_base must lie in (0, 1]");
  double l = std::log2(1.0 / h_base);
  if (std::abs(l - std::round(l)) > 1e-12)
    throw DomainError("weight generation: h_base must be a power of two");
}

// diag entries g(|gamma_j| h) of the regularizer evaluated on the stencil
inline std::vector<XReal> stencil_g(const std::vector<MultiIndex>& indices, int k,
                                    const XReal& h) {
  std::vector<XReal> g(indices.size());
  for (std::size_t j = 0; j < indices.size(); ++j) {
    long r2 = static_cast<long>(indices[j].a) * indices[j].a +
              static_cast<long>(indices[j].b) * indices[j].b;
    g[j] = exp(-pow(XReal(r2) * h * h, k / 2));
  }
  return g;
}

}  // namespace detail

/// Finite-h weights: solve K diag(g(gamma h)) omega = c(h).
inline std::vector<XReal> weights_at_h(Kernel kernel, int p, const XReal& alpha, int k,
                                       const XReal& h) {
  const std::vector<MultiIndex> indices = index_set(kernel, p);
  CVector cv = c_vector(kernel, p, alpha, k, h);
  XMatrix m = to_xmatrix(build_coeff_matrix(kernel, p));
  std::vector<XReal> g = detail::stencil_g(indices, k, h);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) = m.at(i, j) * g[j];
  return lu_solve(m, cv.values);
}

/// The h-independent limiting weights, by Richardson extrapolation of the
/// moment deficits over a ladder of dyadic spacings.
inline WeightTable solve_weights(Kernel kernel, int p, const XReal& alpha,
                                 const WeightGenOptions& opt = {}) {
  check_alpha(alpha);
  const std::vector<MultiIndex> indices = index_set(kernel, p);
  const int k = opt.k != 0 ? opt.k : default_regularizer_exponent(kernel);
  check_regularizer_exponent(k);
  detail::check_dyadic(opt.h_base);
  if (opt.levels < 2 || opt.levels > 8)
    throw DomainError("weight generation: levels must lie in [2, 8]");

  std::vector<std::vector<XReal>> level_values;
  std::vector<XReal> finest_noise;
  for (int r = 0; r < opt.levels; ++r) {
    XReal h = ldexp2(XReal(opt.h_base), -r);
    CVector cv = c_vector(kernel, p, alpha, k, h);
    level_values.push_back(std::move(cv.values));
    if (r == opt.levels - 1) finest_noise = std::move(cv.noise);
  }
  std::vector<long> orders;
  for (int s = 1; s < opt.levels; ++s) orders.push_back(static_cast<long>(s) * k);
  RichardsonResult rich = richardson(level_values, orders);

  XMatrix m = to_xmatrix(build_coeff_matrix(kernel, p));
  std::vector<XReal> omega = lu_solve(m, rich.values);

  // Honest digit claim: extrapolation disagreement plus round-off noise,
  // relative to the vector scale, derated by the solve's conditioning.
  XReal scale(0);
  for (const XReal& v : rich.values)
    if (abs(v) > scale) scale = abs(v);
  if (scale.is_zero()) scale = XReal(1);
  XReal worst(0);
  for (std::size_t i = 0; i < rich.values.size(); ++i) {
    XReal err = rich.disagreement[i] + XReal(2) * finest_noise[i];
    if (err > worst) worst = err;
  }
  int digits;
  if (worst.is_zero()) {
    digits = working_digits() - 10;
  } else {
    double raw = -(log(worst / scale) / log(XReal(10))).to_double();
    double cond = condition_estimate_inf(to_xmatrix(build_coeff_matrix(kernel, p))).to_double();
    digits = static_cast<int>(raw - std::log10(cond)) - 1;
  }
  if (digits > working_digits() - 10) digits = working_digits() - 10;
  if (digits < 0) digits = 0;

  WeightTable table;
  table.kernel = kernel;
  table.p = p;
  table.alpha = alpha;
  table.k = k;
  table.digits = digits;
  table.h_base = opt.h_base;
  table.levels = opt.levels;
  table.working_precision = working_digits();
  table.entries.resize(indices.size());
  for (std::size_t j = 0; j < indices.size(); ++j)
    table.entries[j] = WeightEntry{indices[j], omega[j]};
  return table;
}

}  // namespace singquad

#pragma once

// Empirical convergence studies: apply a corrected rule across a ladder of
// spacings, measure the error against a high-accuracy reference value, and
// fit the slope of log(error) against log(h).  The fitted slope is the
// headline number; it should land on 2p+4-alpha for the on-diagonal kernels
// and 2p+2-alpha for the off-diagonal one.
//
// Two practical wrinkles the fit has to survive:
//   * round-off floor -- once the error reaches the arithmetic floor it
//     stops shrinking, so rows at or below floor_threshold are excluded;
//   * pre-asymptotic transients -- the coarsest spacing can sit visibly off
//     the asymptotic line, so a single far-outlying coarsest point is
//     dropped when the remaining points agree tightly among themselves.

#include <cmath>
#include <cstddef>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "singquad/quadrature.hpp"
#include "singquad/refint.hpp"

namespace singquad {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;  // ln(error) ~ slope * ln(h) + intercept
  int points_used = 0;
  bool dropped_coarsest = false;
};

namespace detail {

struct LogPoint {
  double lh = 0.0;  // ln h
  double le = 0.0;  // ln error
};

inline SlopeFit least_squares(const std::vector<LogPoint>& pts) {
  double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0;
  for (const auto& p : pts) {
    sx += p.lh;
    sy += p.le;
  }
  double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& p : pts) {
    sxx += (p.lh - mx) * (p.lh - mx);
    sxy += (p.lh - mx) * (p.le - my);
  }
  if (sxx == 0.0) throw DomainError("fit_slope: all spacings coincide");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points_used = static_cast<int>(pts.size());
  return fit;
}

inline double rms_residual(const std::vector<LogPoint>& pts, const SlopeFit& fit) {
  double s = 0;
  for (const auto& p : pts) {
    double r = p.le - (fit.slope * p.lh + fit.intercept);
    s += r * r;
  }
  return std::sqrt(s / static_cast<double>(pts.size()));
}

}  // namespace detail

/// Fits log(error) = slope * log(h) + intercept by least squares over the
/// rows whose error exceeds floor_threshold.  Throws NonConvergenceError if
/// fewer than two rows survive the floor.
inline SlopeFit fit_slope(const std::vector<double>& hs, const std::vector<double>& errors,
                          double floor_threshold = 1e-12) {
  if (hs.size() != errors.size()) throw DomainError("fit_slope: hs/errors length mismatch");
  std::vector<detail::LogPoint> pts;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (!(hs[i] > 0.0)) throw DomainError("fit_slope: spacings must be positive");
    if (!(errors[i] >= 0.0)) throw DomainError("fit_slope: errors must be nonnegative");
    if (errors[i] > floor_threshold) pts.push_back({std::log(hs[i]), std::log(errors[i])});
  }
  if (pts.size() < 2) {
    throw NonConvergenceError("fit_slope: fewer than two error rows above the floor");
  }
  SlopeFit fit = detail::least_squares(pts);
  if (pts.size() >= 4) {
    // Locate the coarsest surviving point and test it against the line the
    // finer points define on their own.
    std::size_t coarse = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (pts[i].lh > pts[coarse].lh) coarse = i;
    }
    std::vector<detail::LogPoint> rest;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i != coarse) rest.push_back(pts[i]);
    }
    SlopeFit inner = detail::least_squares(rest);
    double sigma = detail::rms_residual(rest, inner);
    double resid = std::abs(pts[coarse].le - (inner.slope * pts[coarse].lh + inner.intercept));
    if (resid > 3.0 * sigma && sigma > 0.0) {
      inner.dropped_coarsest = true;
      return inner;
    }
  }
  return fit;
}

struct ConvergenceOptions {
  std::vector<double> hs;  // empty -> 2^-3 ... 2^-9
  PrecisionMode mode = PrecisionMode::double_prec;
  double floor_threshold = 1e-12;
  int reference_digits = 16;
  WeightGenOptions table_options;  // k = 0 -> per-kernel default exponent
  bool use_reference_value = false;  // skip the reference solve and use the
  XReal reference_value = XReal(0);  // value below instead
};

struct ConvergenceSeries {
  int p = 0;
  double nominal_order = 0.0;  // 2p+4-alpha on-diagonal, 2p+2-alpha off
  std::vector<double> hs;
  std::vector<double> errors;
  SlopeFit fit;
};

struct ConvergenceReport {
  std::string kernel;
  std::string alpha;
  std::string integrand;
  std::string mode;
  double floor_threshold = 1e-12;
  std::string reference;  // decimal string of the reference value
  std::vector<ConvergenceSeries> series;
};

inline std::vector<double> default_h_ladder() {
  std::vector<double> hs;
  for (int r = 3; r <= 9; ++r) hs.push_back(std::ldexp(1.0, -r));
  return hs;
}

/// Runs the full study: builds (or for the empty off-diagonal p = 1 stencil,
/// skips building) a weight table per requested p, applies the corrected rule
/// at every spacing, and fits the slope per p.
inline ConvergenceReport run_convergence_study(const Integrand& phi, Kernel kernel,
                                               const XReal& alpha, const std::vector<int>& ps,
                                               const ConvergenceOptions& opts = {}) {
  check_alpha(alpha);
  if (ps.empty()) throw DomainError("run_convergence_study: no stencil orders requested");
  if (!phi.eval_d && opts.mode == PrecisionMode::double_prec) {
    throw DomainError("run_convergence_study: integrand lacks a double-precision path");
  }
  std::vector<double> hs = opts.hs.empty() ? default_h_ladder() : opts.hs;

  XReal ref = opts.use_reference_value
                  ? opts.reference_value
                  : reference_integral(phi, kernel, alpha, opts.reference_digits).value;

  ConvergenceReport rep;
  rep.kernel = kernel_name(kernel);
  rep.alpha = alpha.str(17);
  rep.integrand = phi.name.empty() ? "custom" : phi.name;
  rep.mode = (opts.mode == PrecisionMode::double_prec) ? "double" : "extended";
  rep.floor_threshold = opts.floor_threshold;
  rep.reference = ref.str(25);

  for (int p : ps) {
    WeightTable table = (kernel == Kernel::off_diag && p == 1)
                            ? bare_table(kernel, alpha)
                            : solve_weights(kernel, p, alpha, opts.table_options);
    ConvergenceSeries s;
    s.p = p;
    s.nominal_order = (is_on_diag(kernel) ? 2 * p + 4 : 2 * p + 2) - alpha.to_double();
    for (double h : hs) {
      QuadratureConfig cfg;
      cfg.h = h;
      cfg.mode = opts.mode;
      XReal q = corrected_quadrature(phi, table, cfg);
      s.hs.push_back(h);
      s.errors.push_back(abs(q - ref).to_double());
    }
    s.fit = fit_slope(s.hs, s.errors, opts.floor_threshold);
    rep.series.push_back(std::move(s));
  }
  return rep;
}

namespace detail {

inline std::string csv_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace detail

/// Serializes a report as CSV: `#`-prefixed metadata (including the schema
/// tag), then a `p,h,error,slope_fitted` header, then one row per spacing.
inline void write_convergence_csv(std::ostream& os, const ConvergenceReport& rep) {
  os << "# schema: singquad/convergence-report-v1\n";
  os << "# kernel: " << rep.kernel << "\n";
  os << "# alpha: " << rep.alpha << "\n";
  os << "# integrand: " << rep.integrand << "\n";
  os << "# mode: " << rep.mode << "\n";
  os << "# floor_threshold: " << detail::csv_double(rep.floor_threshold) << "\n";
  os << "# reference: " << rep.reference << "\n";
  os << "p,h,error,slope_fitted\n";
  for (const auto& s : rep.series) {
    for (std::size_t i = 0; i < s.hs.size(); ++i) {
      os << s.p << "," << detail::csv_double(s.hs[i]) << "," << detail::csv_double(s.errors[i])
         << "," << detail::csv_double(s.fit.slope) << "\n";
    }
  }
}

inline std::string convergence_csv(const ConvergenceReport& rep) {
  std::ostringstream os;
  write_convergence_csv(os, rep);
  return os.str();
}

}  // namespace singquad

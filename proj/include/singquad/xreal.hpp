#pragma once

// Extended-precision real scalar backed by MPFR, plus deterministic summation.
//
// All arithmetic happens at a process-global working precision expressed in
// decimal digits (default 50).  Every operation rounds once, to nearest, at
// that precision; results are therefore bit-reproducible across runs for a
// fixed working precision and evaluation order.

#include <mpfr.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace singquad {

/// Raised when an argument lies outside an operation's mathematical domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an iterative or adaptive process fails to reach its target.
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline mpfr_prec_t digits_to_bits(int digits) {
  // log2(10) = 3.3219...; add guard bits so the last decimal digit is honest.
  return static_cast<mpfr_prec_t>(static_cast<double>(digits) * 3.3219280948873623 + 0.5) + 8;
}

inline int& working_digits_ref() {
  static int d = 50;
  return d;
}

}  // namespace detail

/// Current global working precision in decimal digits.
inline int working_digits() { return detail::working_digits_ref(); }

/// Current global working precision in mantissa bits.
inline mpfr_prec_t working_prec_bits() { return detail::digits_to_bits(working_digits()); }

/// Sets the global working precision.  Existing values keep the precision they
/// were created with; new results round to the new precision.
inline void set_working_digits(int digits) {
  if (digits < 15 || digits > 100000)
    throw DomainError("working precision must be between 15 and 100000 digits");
  detail::working_digits_ref() = digits;
}

/// RAII guard restoring the previous working precision on scope exit.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(int digits) : saved_(working_digits()) { set_working_digits(digits); }
  ~PrecisionGuard() { detail::working_digits_ref() = saved_; }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  int saved_;
};

/// Arbitrary-precision real number.  Construction and arithmetic round to the
/// global working precision; copies preserve the source bits exactly.
class XReal {
 public:
  XReal() { mpfr_init2(v_, working_prec_bits()); mpfr_set_zero(v_, 1); }

  XReal(double x) {  // NOLINT: implicit by design, mirrors built-in numerics
    mpfr_init2(v_, working_prec_bits());
    mpfr_set_d(v_, x, MPFR_RNDN);
  }
  XReal(int x) { mpfr_init2(v_, working_prec_bits()); mpfr_set_si(v_, x, MPFR_RNDN); }
  XReal(long x) { mpfr_init2(v_, working_prec_bits()); mpfr_set_si(v_, x, MPFR_RNDN); }
  XReal(unsigned long x) { mpfr_init2(v_, working_prec_bits()); mpfr_set_ui(v_, x, MPFR_RNDN); }

  /// Parses a decimal string (scientific notation accepted).
  explicit XReal(const std::string& s) {
    mpfr_init2(v_, working_prec_bits());
    if (mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0)
      throw DomainError("unparsable decimal literal: '" + s + "'");
  }

  XReal(const XReal& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  XReal(XReal&& o) noexcept { mpfr_init2(v_, 2); mpfr_swap(v_, o.v_); }
  XReal& operator=(const XReal& o) {
    if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    return *this;
  }
  XReal& operator=(XReal&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~XReal() { mpfr_clear(v_); }

  static XReal pi() { XReal r; mpfr_const_pi(r.v_, MPFR_RNDN); return r; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  /// Scientific-notation decimal string with `digits` significant digits.
  std::string str(int digits = 0) const {
    if (digits <= 0) digits = working_digits();
    std::vector<char> buf(static_cast<size_t>(digits) + 32);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits - 1, v_);
    return std::string(buf.data());
  }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  // --- arithmetic -----------------------------------------------------------

  friend XReal operator+(const XReal& a, const XReal& b) {
    XReal r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  friend XReal operator-(const XReal& a, const XReal& b) {
    XReal r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  friend XReal operator*(const XReal& a, const XReal& b) {
    XReal r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  friend XReal operator/(const XReal& a, const XReal& b) {
    XReal r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  XReal operator-() const { XReal r; mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }

  XReal& operator+=(const XReal& b) { mpfr_add(v_, v_, b.v_, MPFR_RNDN); return *this; }
  XReal& operator-=(const XReal& b) { mpfr_sub(v_, v_, b.v_, MPFR_RNDN); return *this; }
  XReal& operator*=(const XReal& b) { mpfr_mul(v_, v_, b.v_, MPFR_RNDN); return *this; }
  XReal& operator/=(const XReal& b) { mpfr_div(v_, v_, b.v_, MPFR_RNDN); return *this; }

  friend bool operator==(const XReal& a, const XReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator!=(const XReal& a, const XReal& b) { return !(a == b); }
  friend bool operator<(const XReal& a, const XReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const XReal& a, const XReal& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>(const XReal& a, const XReal& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const XReal& a, const XReal& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }

  // --- elementary functions -------------------------------------------------

  friend XReal abs(const XReal& a) { XReal r; mpfr_abs(r.v_, a.v_, MPFR_RNDN); return r; }
  friend XReal sqrt(const XReal& a) {
    if (a.sign() < 0) throw DomainError("sqrt of negative value");
    XReal r; mpfr_sqrt(r.v_, a.v_, MPFR_RNDN); return r;
  }
  friend XReal exp(const XReal& a) { XReal r; mpfr_exp(r.v_, a.v_, MPFR_RNDN); return r; }
  friend XReal log(const XReal& a) {
    if (a.sign() <= 0) throw DomainError("log of non-positive value");
    XReal r; mpfr_log(r.v_, a.v_, MPFR_RNDN); return r;
  }
  friend XReal sin(const XReal& a) { XReal r; mpfr_sin(r.v_, a.v_, MPFR_RNDN); return r; }
  friend XReal cos(const XReal& a) { XReal r; mpfr_cos(r.v_, a.v_, MPFR_RNDN); return r; }
  friend XReal sinh(const XReal& a) { XReal r; mpfr_sinh(r.v_, a.v_, MPFR_RNDN); return r; }
  friend XReal cosh(const XReal& a) { XReal r; mpfr_cosh(r.v_, a.v_, MPFR_RNDN); return r; }
  friend XReal asinh(const XReal& a) { XReal r; mpfr_asinh(r.v_, a.v_, MPFR_RNDN); return r; }
  friend XReal pow(const XReal& a, const XReal& b) {
    XReal r; mpfr_pow(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  friend XReal pow(const XReal& a, long n) {
    XReal r; mpfr_pow_si(r.v_, a.v_, n, MPFR_RNDN); return r;
  }
  friend XReal ldexp2(const XReal& a, long e) {  // a * 2^e, exact
    XReal r; mpfr_mul_2si(r.v_, a.v_, e, MPFR_RNDN); return r;
  }
  friend XReal fma(const XReal& a, const XReal& b, const XReal& c) {
    XReal r; mpfr_fma(r.v_, a.v_, b.v_, c.v_, MPFR_RNDN); return r;
  }

  /// Nearest integer below; exact.
  friend XReal floor(const XReal& a) { XReal r; mpfr_floor(r.v_, a.v_); return r; }

 private:
  mpfr_t v_;
};

inline XReal operator+(double a, const XReal& b) { return XReal(a) + b; }
inline XReal operator-(double a, const XReal& b) { return XReal(a) - b; }
inline XReal operator*(double a, const XReal& b) { return XReal(a) * b; }
inline XReal operator/(double a, const XReal& b) { return XReal(a) / b; }

/// Fixed-order summation of extended-precision terms.  Accumulates left to
/// right in a 64-bit-widened accumulator and rounds once at the end, so the
/// result is independent of any internal blocking and reproducible run to run.
inline XReal deterministic_sum(const std::vector<XReal>& terms) {
  mpfr_t acc;
  mpfr_init2(acc, working_prec_bits() + 64);
  mpfr_set_zero(acc, 1);
  for (const XReal& t : terms) mpfr_add(acc, acc, t.raw(), MPFR_RNDN);
  XReal r;
  mpfr_set(r.raw(), acc, MPFR_RNDN);
  mpfr_clear(acc);
  return r;
}

/// Streaming variant of deterministic_sum for callers that cannot materialize
/// the term list.  Accumulation order is the order of add() calls.
class XAccumulator {
 public:
  XAccumulator() { mpfr_init2(acc_, working_prec_bits() + 64); mpfr_set_zero(acc_, 1); }
  ~XAccumulator() { mpfr_clear(acc_); }
  XAccumulator(const XAccumulator&) = delete;
  XAccumulator& operator=(const XAccumulator&) = delete;

  void add(const XReal& t) { mpfr_add(acc_, acc_, t.raw(), MPFR_RNDN); }
  XReal value() const {
    XReal r;
    mpfr_set(r.raw(), acc_, MPFR_RNDN);
    return r;
  }

 private:
  mpfr_t acc_;
};

/// Neumaier-compensated summation for double terms, left to right.
inline double deterministic_sum(const std::vector<double>& terms) {
  double s = 0.0, comp = 0.0;
  for (double t : terms) {
    double u = s + t;
    if (std::abs(s) >= std::abs(t))
      comp += (s - u) + t;
    else
      comp += (t - u) + s;
    s = u;
  }
  return s + comp;
}

/// Streaming Neumaier accumulator for double-precision lattice sums.
class DAccumulator {
 public:
  void add(double t) {
    double u = s_ + t;
    if (std::abs(s_) >= std::abs(t))
      c_ += (s_ - u) + t;
    else
      c_ += (t - u) + s_;
    s_ = u;
  }
  double value() const { return s_ + c_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

}  // namespace singquad

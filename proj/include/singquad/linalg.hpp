#pragma once

// Small dense linear algebra over XReal: LU factorization with partial
// pivoting, linear solves, and determinants.  The systems in this library are
// tiny (dimension <= a few dozen), so clarity wins over blocking tricks.

#include "singquad/xreal.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace singquad {

/// Raised when elimination meets a pivot below the singularity threshold.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense row-major matrix of XReal entries.
class XMatrix {
 public:
  XMatrix() = default;
  XMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, XReal(0)) {}

  static XMatrix identity(std::size_t n) {
    XMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = XReal(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  XReal& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const XReal& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<XReal> a_;
};

inline XReal max_abs(const XMatrix& m) {
  XReal best(0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      XReal v = abs(m.at(i, j));
      if (v > best) best = v;
    }
  return best;
}

namespace detail {

// In-place LU with partial pivoting.  Returns the permutation sign, or 0 if a
// pivot column is identically zero (matrix singular to working precision when
// `threshold` > 0, exactly rank-deficient when `threshold` is zero).
inline int lu_factor(XMatrix& a, std::vector<std::size_t>& perm, const XReal& threshold) {
  const std::size_t n = a.rows();
  perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  int sign = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    XReal best = abs(a.at(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      XReal v = abs(a.at(r, col));
      if (v > best) { best = v; piv = r; }
    }
    if (!(best > threshold)) return 0;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a.at(piv, j), a.at(col, j));
      std::swap(perm[piv], perm[col]);
      sign = -sign;
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      XReal f = a.at(r, col) / a.at(col, col);
      a.at(r, col) = f;
      for (std::size_t j = col + 1; j < n; ++j) a.at(r, j) -= f * a.at(col, j);
    }
  }
  return sign;
}

}  // namespace detail

/// Solves A x = b by LU with partial pivoting.  A pivot smaller than
/// 10^-(d-5) * max|A| (d = working digits) raises SingularMatrixError.
inline std::vector<XReal> lu_solve(const XMatrix& a, const std::vector<XReal>& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n)
    throw DomainError("lu_solve: dimension mismatch");
  XMatrix lu = a;
  XReal threshold = pow(XReal(10), -static_cast<long>(working_digits() - 5)) * max_abs(a);
  std::vector<std::size_t> perm;
  if (detail::lu_factor(lu, perm, threshold) == 0)
    throw SingularMatrixError("lu_solve: pivot below singularity threshold");

  std::vector<XReal> x(n, XReal(0));
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm[i]];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] -= lu.at(i, j) * x[j];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu.at(i, j) * x[j];
    x[i] /= lu.at(i, i);
  }
  return x;
}

/// Determinant by LU.  Zero is a valid result, not an error.
inline XReal determinant(const XMatrix& a) {
  if (a.rows() != a.cols()) throw DomainError("determinant: matrix not square");
  XMatrix lu = a;
  std::vector<std::size_t> perm;
  int sign = detail::lu_factor(lu, perm, XReal(0));
  if (sign == 0) return XReal(0);
  XReal d(sign);
  for (std::size_t i = 0; i < a.rows(); ++i) d *= lu.at(i, i);
  return d;
}

/// Infinity-norm condition estimate ||A||_inf * ||A^-1||_inf via an explicit
/// inverse; fine for the small matrices this library deals in.  Reported for
/// diagnostics only.
inline XReal condition_estimate_inf(const XMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DomainError("condition_estimate_inf: matrix not square");
  XReal norm_a(0), norm_inv(0);
  std::vector<XReal> row_inv(n, XReal(0));
  std::vector<std::vector<XReal>> inv_cols(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<XReal> e(n, XReal(0));
    e[j] = XReal(1);
    inv_cols[j] = lu_solve(a, e);
  }
  for (std::size_t i = 0; i < n; ++i) {
    XReal s(0), si(0);
    for (std::size_t j = 0; j < n; ++j) {
      s += abs(a.at(i, j));
      si += abs(inv_cols[j][i]);
    }
    if (s > norm_a) norm_a = s;
    if (si > norm_inv) norm_inv = si;
  }
  return norm_a * norm_inv;
}

}  // namespace singquad

#pragma once

// Coefficient matrices of the correction-weight systems, in exact integer
// arithmetic, together with certifications of their structure:
//
//  * build_coeff_matrix  -- K_{i,j} = sum over the group of gamma_j of
//                           sign(beta) beta^(2 xi_i [- (1,1) off-diagonal]),
//                           an exact integer matrix (0^0 = 1);
//  * block_structure     -- on-diagonal block triangularity + the doubled
//                           Vandermonde diagonal blocks;
//  * off_diag_factorization -- K = E * H with E integer and H a positive
//                           diagonal rational matrix;
//  * det_factorization_check -- the determinant product formulas for the
//                           symbolic E/T matrices, evaluated at random
//                           integer nodes: det / product must be one fixed
//                           nonzero rational;
//  * certify_nonsingular -- Bareiss determinants of K are nonzero.

#include "singquad/linalg.hpp"
#include "singquad/stencil.hpp"
#include "singquad/types.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace singquad {

using BigInt = mpz_class;
using BigRat = mpq_class;

namespace detail {

/// base^e over the integers with 0^0 = 1.
inline BigInt bigpow(long base, unsigned long e) {
  if (e == 0) return BigInt(1);
  BigInt b(base), r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

/// Fraction-free Bareiss elimination; exact integer determinant.
inline BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m) {
  const std::size_t n = m.size();
  if (n == 0) return BigInt(1);
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return BigInt(0);
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

}  // namespace detail

/// Exact integer coefficient matrix in the contract index order.
struct CoeffMatrix {
  Kernel kernel = Kernel::on_diag_x1;
  int p = 0;
  std::vector<MultiIndex> indices;      // both the row and the column order
  std::size_t n = 0;
  std::vector<BigInt> entries;          // row-major

  const BigInt& at(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
  BigInt& at(std::size_t i, std::size_t j) { return entries[i * n + j]; }

  std::vector<std::vector<BigInt>> rows() const {
    std::vector<std::vector<BigInt>> r(n, std::vector<BigInt>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r[i][j] = at(i, j);
    return r;
  }
};

/// K_{i,j} for the order-p system: moments of the symmetry-group sums.
inline CoeffMatrix build_coeff_matrix(Kernel kernel, int p) {
  CoeffMatrix k;
  k.kernel = kernel;
  k.p = p;
  k.indices = index_set(kernel, p);
  k.n = k.indices.size();
  k.entries.assign(k.n * k.n, BigInt(0));
  const bool off = !is_on_diag(kernel);
  for (std::size_t j = 0; j < k.n; ++j) {
    auto group = symmetry_group(kernel, k.indices[j]);
    for (std::size_t i = 0; i < k.n; ++i) {
      const MultiIndex xi = k.indices[i];
      BigInt sum(0);
      for (const SignedPoint& b : group) {
        unsigned long e1 = static_cast<unsigned long>(off ? 2 * xi.a - 1 : 2 * xi.a);
        unsigned long e2 = static_cast<unsigned long>(off ? 2 * xi.b - 1 : 2 * xi.b);
        BigInt term = detail::bigpow(b.x, e1) * detail::bigpow(b.y, e2);
        if (off && b.sign < 0) term = -term;
        sum += term;
      }
      k.at(i, j) = sum;
    }
  }
  return k;
}

inline BigInt exact_determinant(const CoeffMatrix& k) {
  return detail::bareiss_determinant(k.rows());
}

/// Extended-precision copy (entries are exact integers, representable as long
/// as they fit the working mantissa; the sizes used here always do).
inline XMatrix to_xmatrix(const CoeffMatrix& k) {
  XMatrix m(k.n, k.n);
  for (std::size_t i = 0; i < k.n; ++i)
    for (std::size_t j = 0; j < k.n; ++j) {
      XReal v;
      mpfr_set_z(v.raw(), k.at(i, j).get_mpz_t(), MPFR_RNDN);
      m.at(i, j) = v;
    }
  return m;
}

// ---------------------------------------------------------------------------
// On-diagonal block structure
// ---------------------------------------------------------------------------

/// Certified structural facts about the on-diagonal K, split at 2p+1 rows:
/// with the contract ordering, K = [[A, B], [0, D]], A itself is
/// [[1, 2..2, 2..2], [0, 2V, 0], [0, 0, 2V]] with V the Vandermonde matrix
/// V(r,s) = (s^2)^r, and D equals 4E with E the interior moment matrix
/// evaluated at nodes x_i = i^2.  All checks are exact integer comparisons.
struct BlockStructureReport {
  int p = 0;
  std::size_t n = 0;
  std::size_t split = 0;          // = 2p+1
  bool lower_left_zero = false;   // C block vanishes
  bool corner_unit = false;       // K_{1,1} = 1 and the rest of column 1 is 0
  bool first_row_doubles = false; // row 1 is (1, 2, 2, ..., 2)
  bool vandermonde_blocks = false;// A's diagonal blocks are 2 (s^2)^r, cross blocks 0
  bool d_is_4e = false;           // D = 4 E(x_i = i^2)
  bool det_product = false;       // det K = det A * det D
  bool ok() const {
    return lower_left_zero && corner_unit && first_row_doubles && vandermonde_blocks &&
           d_is_4e && det_product;
  }
};

inline BlockStructureReport block_structure(int p) {
  if (p < 1) throw DomainError("block_structure: requires p >= 1");
  CoeffMatrix k = build_coeff_matrix(Kernel::on_diag_x1, p);
  BlockStructureReport rep;
  rep.p = p;
  rep.n = k.n;
  rep.split = static_cast<std::size_t>(2 * p + 1);
  const std::size_t s = rep.split, n = k.n;

  rep.lower_left_zero = true;
  for (std::size_t i = s; i < n; ++i)
    for (std::size_t j = 0; j < s; ++j)
      if (k.at(i, j) != 0) rep.lower_left_zero = false;

  rep.corner_unit = (k.at(0, 0) == 1);
  for (std::size_t i = 1; i < n; ++i)
    if (k.at(i, 0) != 0) rep.corner_unit = false;

  rep.first_row_doubles = true;
  for (std::size_t j = 1; j < s; ++j)
    if (k.at(0, j) != 2) rep.first_row_doubles = false;

  // A's interior: rows/cols 1..p are the (0,r) x (0,s) block, rows/cols
  // p+1..2p the (r,0) x (s,0) block.
  rep.vandermonde_blocks = true;
  for (int r = 1; r <= p; ++r)
    for (int c = 1; c <= p; ++c) {
      BigInt want = 2 * detail::bigpow(c, static_cast<unsigned long>(2 * r));
      if (k.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) != want)
        rep.vandermonde_blocks = false;
      if (k.at(static_cast<std::size_t>(p + r), static_cast<std::size_t>(p + c)) != want)
        rep.vandermonde_blocks = false;
      if (k.at(static_cast<std::size_t>(r), static_cast<std::size_t>(p + c)) != 0)
        rep.vandermonde_blocks = false;
      if (k.at(static_cast<std::size_t>(p + r), static_cast<std::size_t>(c)) != 0)
        rep.vandermonde_blocks = false;
    }

  // D = 4 E with E_{i,j} = x_{a_j}^{a_i} x_{b_j}^{b_i} at x_m = m^2.
  rep.d_is_4e = true;
  for (std::size_t i = s; i < n; ++i)
    for (std::size_t j = s; j < n; ++j) {
      const MultiIndex xi = k.indices[i], ga = k.indices[j];
      BigInt e = detail::bigpow(ga.a * ga.a, static_cast<unsigned long>(xi.a)) *
                 detail::bigpow(ga.b * ga.b, static_cast<unsigned long>(xi.b));
      if (k.at(i, j) != 4 * e) rep.d_is_4e = false;
    }

  // det K = det A * det D (exact).
  std::vector<std::vector<BigInt>> a(s, std::vector<BigInt>(s)),
      d(n - s, std::vector<BigInt>(n - s));
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) a[i][j] = k.at(i, j);
  for (std::size_t i = s; i < n; ++i)
    for (std::size_t j = s; j < n; ++j) d[i - s][j - s] = k.at(i, j);
  BigInt det_k = detail::bareiss_determinant(k.rows());
  rep.det_product =
      (det_k == detail::bareiss_determinant(a) * detail::bareiss_determinant(d));
  return rep;
}

// ---------------------------------------------------------------------------
// Off-diagonal factorization K = E * H
// ---------------------------------------------------------------------------

/// E_{i,j} = a_j^(2 a_i) b_j^(2 b_i) + b_j^(2 a_i) a_j^(2 b_i)  (integer),
/// H = diag(2/(a_j b_j) for balanced gamma_j, else 4/(a_j b_j))  (rational).
struct OffDiagFactorization {
  int p = 0;
  std::size_t n = 0;
  std::vector<BigInt> e;    // row-major n x n
  std::vector<BigRat> h;    // diagonal
  bool exact_match = false; // K == E * H entrywise over the rationals
};

inline OffDiagFactorization off_diag_factorization(int p) {
  CoeffMatrix k = build_coeff_matrix(Kernel::off_diag, p);
  OffDiagFactorization f;
  f.p = p;
  f.n = k.n;
  f.e.assign(k.n * k.n, BigInt(0));
  f.h.resize(k.n);
  for (std::size_t j = 0; j < k.n; ++j) {
    const MultiIndex g = k.indices[j];
    f.h[j] = BigRat((g.a == g.b) ? 2 : 4, g.a * g.b);
    f.h[j].canonicalize();
  }
  for (std::size_t i = 0; i < k.n; ++i) {
    const MultiIndex xi = k.indices[i];
    for (std::size_t j = 0; j < k.n; ++j) {
      const MultiIndex g = k.indices[j];
      f.e[i * k.n + j] =
          detail::bigpow(g.a, static_cast<unsigned long>(2 * xi.a)) *
              detail::bigpow(g.b, static_cast<unsigned long>(2 * xi.b)) +
          detail::bigpow(g.b, static_cast<unsigned long>(2 * xi.a)) *
              detail::bigpow(g.a, static_cast<unsigned long>(2 * xi.b));
    }
  }
  f.exact_match = true;
  for (std::size_t i = 0; i < k.n; ++i)
    for (std::size_t j = 0; j < k.n; ++j) {
      BigRat want = BigRat(f.e[i * k.n + j]) * f.h[j];
      want.canonicalize();
      if (BigRat(k.at(i, j)) != want) f.exact_match = false;
    }
  return f;
}

// ---------------------------------------------------------------------------
// Determinant product formulas at random integer nodes
// ---------------------------------------------------------------------------

/// Result of evaluating det(E or T) / H(x) at `trials` random node sets:
/// the identity holds iff the ratio is one fixed nonzero rational.
struct DetFactorCheck {
  Kernel kernel = Kernel::on_diag_x1;
  int p = 0;
  int trials = 0;
  bool constant_ratio = false;
  bool nonzero = false;
  std::string ratio;  // the common ratio as "num/den"
};

namespace detail {

// H(x) for the on-diagonal interior matrix: prod x_j^(2(p-j)) *
// prod_{i<j} (x_j - x_i)^(2(p-j)), nodes x_1..x_{p-1}.
inline BigRat on_diag_node_product(int p, const std::vector<long>& x) {
  BigInt h(1);
  for (int j = 1; j <= p - 1; ++j)
    h *= bigpow(x[static_cast<std::size_t>(j - 1)], static_cast<unsigned long>(2 * (p - j)));
  for (int j = 2; j <= p - 1; ++j)
    for (int i = 1; i < j; ++i)
      h *= bigpow(x[static_cast<std::size_t>(j - 1)] - x[static_cast<std::size_t>(i - 1)],
                  static_cast<unsigned long>(2 * (p - j)));
  return BigRat(h);
}

// H(x) for the off-diagonal symbolic matrix (Thm: split exponents at p/2):
// prod_{j <= floor(p/2)} x_j^(p+1-j) * prod_{j > floor(p/2)} x_j^(p-j)
// * prod_{i<j <= floor(p/2)} (x_j-x_i)^(p+1-j)
// * prod_{i<j,  j > floor(p/2)} (x_j-x_i)^(p-j), nodes x_1..x_{p-1}.
inline BigRat off_diag_node_product(int p, const std::vector<long>& x) {
  const int half = p / 2;
  BigInt h(1);
  for (int j = 1; j <= p - 1; ++j) {
    int e = (j <= half) ? (p + 1 - j) : (p - j);
    h *= bigpow(x[static_cast<std::size_t>(j - 1)], static_cast<unsigned long>(e));
  }
  for (int j = 2; j <= p - 1; ++j)
    for (int i = 1; i < j; ++i) {
      int e = (j <= half) ? (p + 1 - j) : (p - j);
      h *= bigpow(x[static_cast<std::size_t>(j - 1)] - x[static_cast<std::size_t>(i - 1)],
                  static_cast<unsigned long>(e));
    }
  return BigRat(h);
}

}  // namespace detail

/// Evaluates the symbolic interior matrix at random strictly increasing
/// positive integer nodes and checks det / H(x) is one nonzero constant.
inline DetFactorCheck det_factorization_check(Kernel kernel, int p, int trials,
                                              std::uint64_t seed) {
  if (p < 2) throw DomainError("det_factorization_check: requires p >= 2");
  if (trials < 1) throw DomainError("det_factorization_check: trials must be >= 1");
  DetFactorCheck out;
  out.kernel = kernel;
  out.p = p;
  out.trials = trials;

  const bool off = !is_on_diag(kernel);
  // indices with both components >= 1; components range in 1..p-1
  std::vector<MultiIndex> xs;
  if (off) {
    xs = index_set(Kernel::off_diag, p);
  } else {
    for (const MultiIndex& m : index_set(Kernel::on_diag_x1, p))
      if (m.a >= 1 && m.b >= 1) xs.push_back(m);
  }
  const std::size_t n = xs.size();

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> pick(1, 50);
  bool first = true;
  BigRat common;
  out.constant_ratio = true;
  out.nonzero = true;
  for (int t = 0; t < trials; ++t) {
    // strictly increasing distinct positive nodes x_1 < ... < x_{p-1}
    std::set<long> node_set;
    while (node_set.size() < static_cast<std::size_t>(p - 1)) node_set.insert(pick(rng));
    std::vector<long> x(node_set.begin(), node_set.end());

    std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        long xa = x[static_cast<std::size_t>(xs[j].a - 1)];
        long xb = x[static_cast<std::size_t>(xs[j].b - 1)];
        if (off) {
          m[i][j] = detail::bigpow(xa, static_cast<unsigned long>(xs[i].a)) *
                        detail::bigpow(xb, static_cast<unsigned long>(xs[i].b)) +
                    detail::bigpow(xb, static_cast<unsigned long>(xs[i].a)) *
                        detail::bigpow(xa, static_cast<unsigned long>(xs[i].b));
        } else {
          m[i][j] = detail::bigpow(xa, static_cast<unsigned long>(xs[i].a)) *
                    detail::bigpow(xb, static_cast<unsigned long>(xs[i].b));
        }
      }
    BigInt det = detail::bareiss_determinant(m);
    BigRat hx = off ? detail::off_diag_node_product(p, x)
                    : detail::on_diag_node_product(p, x);
    if (hx == 0 || det == 0) {
      out.nonzero = false;
      continue;
    }
    BigRat ratio = BigRat(det) / hx;
    ratio.canonicalize();
    if (first) {
      common = ratio;
      out.ratio = ratio.get_str();
      first = false;
    } else if (ratio != common) {
      out.constant_ratio = false;
    }
  }
  if (first) out.nonzero = false;
  return out;
}

// ---------------------------------------------------------------------------
// Nonsingularity certificates and conditioning diagnostics
// ---------------------------------------------------------------------------

struct NonsingularCertificate {
  int p = 0;
  bool nonzero = false;
  std::size_t det_decimal_digits = 0;  // magnitude indicator only
};

/// Exact determinants of K for every admissible order up to p_max.
inline std::vector<NonsingularCertificate> certify_nonsingular(Kernel kernel, int p_max) {
  std::vector<NonsingularCertificate> out;
  int p_min = is_on_diag(kernel) ? 0 : 2;
  for (int p = p_min; p <= p_max; ++p) {
    BigInt det = exact_determinant(build_coeff_matrix(kernel, p));
    NonsingularCertificate c;
    c.p = p;
    c.nonzero = (det != 0);
    c.det_decimal_digits = mpz_sizeinbase(det.get_mpz_t(), 10);
    out.push_back(c);
  }
  return out;
}

/// Infinity-norm condition estimate of K (diagnostic; no pass/fail bar).
inline XReal coeff_condition_estimate(Kernel kernel, int p) {
  return condition_estimate_inf(to_xmatrix(build_coeff_matrix(kernel, p)));
}

}  // namespace singquad

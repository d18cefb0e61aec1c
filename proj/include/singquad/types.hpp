#pragma once

// Shared vocabulary: kernel identities and lattice multi-indices.

#include "singquad/xreal.hpp"

#include <cstdint>
#include <string>
#include <tuple>

namespace singquad {

/// The three singular kernels handled by the corrected rules:
///   on_diag_x1 : x1^2 / |x|^(2+alpha)
///   on_diag_x2 : x2^2 / |x|^(2+alpha)   (coordinate swap of the first)
///   off_diag   : x1*x2 / |x|^(2+alpha)
enum class Kernel { on_diag_x1, on_diag_x2, off_diag };

inline bool is_on_diag(Kernel k) { return k != Kernel::off_diag; }

/// Coordinate axis whose square appears in an on-diagonal kernel (1 or 2).
inline int on_diag_axis(Kernel k) {
  if (k == Kernel::on_diag_x1) return 1;
  if (k == Kernel::on_diag_x2) return 2;
  throw DomainError("on_diag_axis: off-diagonal kernel has no axis");
}

/// Serialized kernel name as used in artifact files.
inline std::string kernel_name(Kernel k) {
  switch (k) {
    case Kernel::on_diag_x1: return "on_diag_x1";
    case Kernel::on_diag_x2: return "on_diag_x2";
    case Kernel::off_diag: return "off_diag";
  }
  throw DomainError("kernel_name: bad enum value");
}

/// Parses both the artifact spelling ("on_diag_x1") and the command-line
/// spelling ("on-diag-x1").
inline Kernel parse_kernel(const std::string& s) {
  if (s == "on_diag_x1" || s == "on-diag-x1") return Kernel::on_diag_x1;
  if (s == "on_diag_x2" || s == "on-diag-x2") return Kernel::on_diag_x2;
  if (s == "off_diag" || s == "off-diag") return Kernel::off_diag;
  throw DomainError("unknown kernel name: '" + s + "'");
}

/// Nonnegative multi-index (or lattice point when used with signs).
struct MultiIndex {
  int a = 0;
  int b = 0;

  int order() const { return a + b; }  // |xi|_1

  friend bool operator==(const MultiIndex& l, const MultiIndex& r) {
    return l.a == r.a && l.b == r.b;
  }
  friend bool operator!=(const MultiIndex& l, const MultiIndex& r) { return !(l == r); }
  friend bool operator<(const MultiIndex& l, const MultiIndex& r) {
    return std::tie(l.a, l.b) < std::tie(r.a, r.b);
  }
};

/// Signed lattice point: a correction node together with its sign factor.
struct SignedPoint {
  int x = 0;
  int y = 0;
  int sign = 1;

  friend bool operator==(const SignedPoint& l, const SignedPoint& r) {
    return l.x == r.x && l.y == r.y && l.sign == r.sign;
  }
  friend bool operator<(const SignedPoint& l, const SignedPoint& r) {
    return std::tie(l.x, l.y) < std::tie(r.x, r.y);
  }
};

/// Validates the singularity strength parameter; the kernels are defined for
/// 0 < alpha < 2 only.
inline void check_alpha(const XReal& alpha) {
  if (!(alpha > XReal(0)) || !(alpha < XReal(2)))
    throw DomainError("alpha must lie in (0, 2)");
}

}  // namespace singquad

#pragma once

// Correction stencils: which moment indices a rule of order parameter p
// enforces, how lattice points group under the kernel's sign symmetries, and
// how many 1-norm layers the correction touches.
//
// The index orderings are fixed contracts: the coefficient-matrix structure
// results (block triangularity, the E*H factorization, the determinant
// product formulas) hold for these specific enumerations.

#include "singquad/types.hpp"

#include <algorithm>
#include <cstdlib>
#include <vector>

namespace singquad {

/// Moment multi-indices enforced by the order-p rule, in contract order.
///
/// On-diagonal (p >= 0), size (p+1)(p+2)/2:
///   first the axis column {(0,0),(0,1),...,(0,p)},
///   then the axis row {(1,0),...,(p,0)},
///   then interior anti-diagonals: for each sum s = 2..p the pairs
///   (s-1,1),(s-2,2),...,(1,s-1).
///
/// Off-diagonal (p >= 2), size p^2/4 for even p and (p^2-1)/4 for odd p:
///   ascending 1-norm s = 2..p, within a layer (s-1,1),(s-2,2),...
///   down to the balanced pair; both components stay >= 1 and a >= b.
inline std::vector<MultiIndex> index_set(Kernel kernel, int p) {
  std::vector<MultiIndex> xs;
  if (is_on_diag(kernel)) {
    if (p < 0) throw DomainError("index_set: p must be >= 0 for on-diagonal kernels");
    for (int q = 0; q <= p; ++q) xs.push_back({0, q});
    for (int q = 1; q <= p; ++q) xs.push_back({q, 0});
    for (int s = 2; s <= p; ++s)
      for (int a = s - 1; a >= 1; --a) xs.push_back({a, s - a});
  } else {
    if (p < 2) throw DomainError("index_set: p must be >= 2 for the off-diagonal kernel");
    for (int s = 2; s <= p; ++s)
      for (int m = 1; 2 * m <= s; ++m) xs.push_back({s - m, m});
  }
  return xs;
}

/// Lattice points sharing the correction weight of stencil index gamma,
/// with their sign factors; sorted lexicographically for reproducibility.
///
/// On-diagonal kernels are even in each coordinate separately, so the orbit
/// of (a,b) is {(+-a, +-b)} with all signs +1.  The off-diagonal kernel is
/// additionally symmetric under coordinate swap and odd under single-axis
/// reflection, so the orbit of (a,b) also contains the swapped points and
/// each point carries sgn(x*y).
inline std::vector<SignedPoint> symmetry_group(Kernel kernel, MultiIndex gamma) {
  std::vector<SignedPoint> pts;
  if (is_on_diag(kernel)) {
    if (gamma.a < 0 || gamma.b < 0)
      throw DomainError("symmetry_group: stencil index components must be >= 0");
    for (int sx : {1, -1})
      for (int sy : {1, -1}) pts.push_back({sx * gamma.a, sy * gamma.b, 1});
  } else {
    if (gamma.a < 1 || gamma.b < 1)
      throw DomainError("symmetry_group: off-diagonal stencil indices need both components >= 1");
    for (int sx : {1, -1})
      for (int sy : {1, -1}) {
        int px = sx * gamma.a, py = sy * gamma.b;
        int sgn = (px * py > 0) ? 1 : -1;
        pts.push_back({px, py, sgn});
        pts.push_back({py, px, sgn});
      }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const SignedPoint& l, const SignedPoint& r) {
                          return l.x == r.x && l.y == r.y;
                        }),
            pts.end());
  return pts;
}

/// Number of 1-norm layers of lattice points the order-p correction touches:
/// layers 0..p for on-diagonal kernels, layers 2..p off-diagonal.
inline int layer_count(Kernel kernel, int p) {
  if (p < 0) throw DomainError("layer_count: p must be >= 0");
  if (is_on_diag(kernel)) return p + 1;
  return std::max(0, p - 1);
}

}  // namespace singquad

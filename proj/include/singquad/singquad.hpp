#pragma once

// Convenience umbrella: the full corrected-trapezoidal-rule toolkit.
//
//   xreal       extended-precision scalars and deterministic accumulation
//   gamma       Gamma function on the extended scalars
//   types       kernels, multi-indices, shared validation
//   stencil     correction-node index sets, orderings, symmetry groups
//   kernels     kernel/regularizer evaluation, closed-form moments, builtins
//   linalg      dense extended-precision solves and condition estimates
//   coeffmat    exact integer coefficient matrices and their certifications
//   trapezoid   punctured trapezoidal sums
//   refint      adaptive reference values for the singular integrals
//   weightgen   correction-weight generation (spacing ladder + extrapolation)
//   quadrature  applying a weight table to an integrand
//   convergence spacing sweeps, error measurement, log-log slope fits
//   table_io    versioned JSON serialization of weight tables
//   gauss_legendre  fixed-order panel rules used by refint

#include "singquad/coeffmat.hpp"
#include "singquad/convergence.hpp"
#include "singquad/gamma.hpp"
#include "singquad/gauss_legendre.hpp"
#include "singquad/kernels.hpp"
#include "singquad/linalg.hpp"
#include "singquad/quadrature.hpp"
#include "singquad/refint.hpp"
#include "singquad/stencil.hpp"
#include "singquad/table_io.hpp"
#include "singquad/trapezoid.hpp"
#include "singquad/types.hpp"
#include "singquad/weightgen.hpp"
#include "singquad/xreal.hpp"

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "symtrace/hyperoctahedral.hpp"
#include "symtrace/norm.hpp"

namespace symtrace {

/// Norming functional x* of a point together with diagnostics. Functionals
/// are coordinate vectors paired with points by the standard dot product.
struct NormingResult {
  Vector functional;
  bool smooth = false;
  double margin = 0.0;           // +inf for everywhere-smooth families
  double pairing = 0.0;          // <x*, x>
  double dual_norm_value = 0.0;  // ||x*||_*
};

/// x* for any x != 0; off the sphere it is (x / ||x||)*. At corners the
/// result carries smooth == false and the tie-broken functional from
/// select_norming_direction.
NormingResult norming_functional(const NormSpec& spec,
                                 std::span<const double> x);

/// Whether ||(Qx)* - Q(x*)||_inf <= tol. Requires a 1-symmetric norm and a
/// smooth x.
bool check_equivariance(const NormSpec& spec, std::span<const double> x,
                        const SignedPermutation& q, double tol = 1e-12);

}  // namespace symtrace

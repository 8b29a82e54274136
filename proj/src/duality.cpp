// SPDX-License-Identifier: Apache-2.0

#include "symtrace/duality.hpp"

#include <algorithm>
#include <cmath>

#include "symtrace/error.hpp"

namespace symtrace {

NormingResult norming_functional(const NormSpec& spec,
                                 std::span<const double> x) {
  NormingResult r;
  r.margin = smoothness_margin(spec, x);
  r.smooth = r.margin > 0.0;
  r.functional = select_norming_direction(spec, x);
  r.pairing = dot(r.functional, x);
  r.dual_norm_value = dual_norm_eval(spec, r.functional);
  return r;
}

bool check_equivariance(const NormSpec& spec, std::span<const double> x,
                        const SignedPermutation& q, double tol) {
  if (!spec.is_one_symmetric()) {
    throw Error(ErrorCode::NotOneSymmetric,
                "equivariance only holds for 1-symmetric norms");
  }
  const NormingResult at_x = norming_functional(spec, x);
  if (!at_x.smooth) {
    throw NonSmoothPointError("equivariance check needs a smooth point",
                              at_x.margin);
  }
  const Vector qx = q.apply(x);
  const Vector lhs = norming_functional(spec, qx).functional;
  const Vector rhs = q.apply(at_x.functional);
  double worst = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
  }
  return worst <= tol;
}

}  // namespace symtrace

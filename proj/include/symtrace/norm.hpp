// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace symtrace {

using Vector = std::vector<double>;

enum class NormFamily { Euclidean, Lp, L1, Linf, TopK, WeightedL2 };

/// Descriptor of a norm on R^N. Every other module derives norm values,
/// gradients and dual norms from this single description.
///
/// Instances are only created through the named constructors, which enforce
/// the parameter ranges, so a NormSpec in hand is always valid.
class NormSpec {
 public:
  static constexpr double kMinP = 1.01;
  static constexpr double kMaxP = 64.0;

  static NormSpec euclidean(std::size_t dim);
  static NormSpec lp(double p, std::size_t dim);
  static NormSpec l1(std::size_t dim);
  static NormSpec linf(std::size_t dim);
  static NormSpec top_k(std::size_t k, std::size_t dim);
  static NormSpec weighted_l2(std::vector<double> b);

  std::size_t dim() const noexcept { return dim_; }
  NormFamily family() const noexcept { return family_; }
  double p() const noexcept { return p_; }
  std::size_t k() const noexcept { return k_; }
  const std::vector<double>& weights() const noexcept { return b_; }

  /// Norms whose value is invariant under every signed permutation of the
  /// coordinates. weighted_l2 qualifies only for constant weights.
  bool is_one_symmetric() const noexcept;

  /// True for families whose gauge is differentiable everywhere except 0.
  bool everywhere_smooth() const noexcept;

  friend bool operator==(const NormSpec&, const NormSpec&) = default;

 private:
  NormSpec(NormFamily family, std::size_t dim) : family_(family), dim_(dim) {}

  NormFamily family_;
  std::size_t dim_;
  double p_ = 2.0;
  std::size_t k_ = 0;
  std::vector<double> b_;
};

/// Parses "euclidean:<N>", "lp:<p>:<N>", "l1:<N>", "linf:<N>",
/// "topk:<k>:<N>" or "wl2:<b1,...,bN>". "lp:1:<N>" is routed to l1.
NormSpec parse_norm_spec(std::string_view text);

/// Canonical text form; parse_norm_spec(format_norm_spec(s)) == s.
std::string format_norm_spec(const NormSpec& spec);

std::string_view family_name(NormFamily family) noexcept;

double norm_eval(const NormSpec& spec, std::span<const double> x);

/// Euclidean gradient of the norm. Throws NonSmoothPointError when
/// smoothness_margin(spec, x) <= tie_tolerance.
Vector norm_gradient(const NormSpec& spec, std::span<const double> x,
                     double tie_tolerance = 0.0);

double dual_norm_eval(const NormSpec& spec, std::span<const double> f);

/// Distance-to-tie diagnostic: 0 exactly when x has several norming
/// functionals, +infinity for everywhere-smooth families.
double smoothness_margin(const NormSpec& spec, std::span<const double> x);

/// A norming direction for every x != 0. Equals the gradient at smooth
/// points; at corners it applies a fixed tie-break (lowest tied index for
/// linf, sign +1 for zero coordinates in l1, first top-k support in index
/// order for top_k).
Vector select_norming_direction(const NormSpec& spec,
                                std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace symtrace

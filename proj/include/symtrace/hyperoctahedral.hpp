// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "symtrace/matrix.hpp"
#include "symtrace/norm.hpp"

namespace symtrace {

/// Element of the hyperoctahedral group BC_N: Q e_i = beta[i] * e_{sigma[i]}.
/// Indices are zero-based.
class SignedPermutation {
 public:
  /// Throws unless sigma is a bijection of {0..N-1} and beta is +-1.
  SignedPermutation(std::vector<std::size_t> sigma, std::vector<int> beta);

  static SignedPermutation identity(std::size_t n);
  static SignedPermutation random(std::size_t n, std::mt19937_64& rng);

  std::size_t dim() const noexcept { return sigma_.size(); }
  const std::vector<std::size_t>& sigma() const noexcept { return sigma_; }
  const std::vector<int>& beta() const noexcept { return beta_; }

  /// (Q x)_{sigma(i)} = beta(i) x_i
  Vector apply(std::span<const double> x) const;
  SignedPermutation inverse() const;

  /// (*this * other) x == this->apply(other.apply(x))
  SignedPermutation compose(const SignedPermutation& other) const;

  /// Dense matrix form; test and debugging use only.
  Matrix to_matrix() const;

  friend bool operator==(const SignedPermutation&,
                         const SignedPermutation&) = default;

 private:
  std::vector<std::size_t> sigma_;
  std::vector<int> beta_;
};

Vector apply(const SignedPermutation& q, std::span<const double> x);

inline constexpr std::size_t kMaxGroupDim = 8;

/// 2^n * n!
std::uint64_t group_order(std::size_t n);

/// Visits all 2^n n! elements in a fixed order: permutations in
/// lexicographic order, and for each, sign patterns by increasing bitmask.
void for_each_group_element(
    std::size_t n, const std::function<void(const SignedPermutation&)>& visit);

std::vector<SignedPermutation> enumerate_group(std::size_t n);

/// Square integer matrix for exact identities.
class ExactMatrix {
 public:
  ExactMatrix() = default;
  explicit ExactMatrix(std::size_t n) : n_(n), data_(n * n, 0) {}
  ExactMatrix(std::size_t n, std::vector<std::int64_t> row_major);

  static ExactMatrix scalar(std::size_t n, std::int64_t c);

  std::size_t dim() const noexcept { return n_; }
  std::int64_t& operator()(std::size_t i, std::size_t j) {
    return data_[i * n_ + j];
  }
  std::int64_t operator()(std::size_t i, std::size_t j) const {
    return data_[i * n_ + j];
  }
  std::int64_t trace() const;

  friend bool operator==(const ExactMatrix&, const ExactMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::int64_t> data_;
};

/// Sum over Q in BC_N of Q^T A Q, exactly. Entry (i, j) of Q^T A Q is
/// beta(i) beta(j) a_{sigma(i), sigma(j)}. Throws Overflow rather than wrap.
ExactMatrix conjugation_sum(const ExactMatrix& a);

/// (N-1)! * 2^N * tr(A), the diagonal value conjugation_sum must produce.
std::int64_t conjugation_constant(const ExactMatrix& a);

/// Average over BC_N of <Q^T A Q x, x*> at a smooth point x on the unit
/// sphere of a 1-symmetric norm. Equals tr(A)/N.
double group_average_numerical_value(const NormSpec& spec, const Matrix& a,
                                     std::span<const double> x);

/// For a norm that is not 1-symmetric, a pair (x, Q) with
/// norm(Qx) != norm(x). Empty for 1-symmetric norms.
struct SymmetryWitness {
  Vector x;
  SignedPermutation q;
};
std::optional<SymmetryWitness> asymmetry_witness(const NormSpec& spec);

}  // namespace symtrace

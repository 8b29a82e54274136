// SPDX-License-Identifier: Apache-2.0

#include "symtrace/hyperoctahedral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "symtrace/duality.hpp"
#include "symtrace/error.hpp"

namespace symtrace {

namespace {

void check_group_dim(std::size_t n) {
  if (n < 1 || n > kMaxGroupDim) {
    throw Error(ErrorCode::OutOfRange,
                "group enumeration needs 1 <= N <= " +
                    std::to_string(kMaxGroupDim) + " (N=" + std::to_string(n) +
                    ")");
  }
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw Error(ErrorCode::Overflow, "integer overflow in exact sum");
  }
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw Error(ErrorCode::Overflow, "integer overflow in exact product");
  }
  return r;
}

}  // namespace

SignedPermutation::SignedPermutation(std::vector<std::size_t> sigma,
                                     std::vector<int> beta)
    : sigma_(std::move(sigma)), beta_(std::move(beta)) {
  if (sigma_.size() != beta_.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "sigma and beta must have the same length");
  }
  std::vector<bool> seen(sigma_.size(), false);
  for (std::size_t s : sigma_) {
    if (s >= sigma_.size() || seen[s]) {
      throw Error(ErrorCode::InvalidArgument, "sigma is not a permutation");
    }
    seen[s] = true;
  }
  for (int b : beta_) {
    if (b != 1 && b != -1) {
      throw Error(ErrorCode::InvalidArgument, "beta entries must be +1 or -1");
    }
  }
}

SignedPermutation SignedPermutation::identity(std::size_t n) {
  std::vector<std::size_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), std::size_t{0});
  return SignedPermutation(std::move(sigma), std::vector<int>(n, 1));
}

SignedPermutation SignedPermutation::random(std::size_t n,
                                            std::mt19937_64& rng) {
  std::vector<std::size_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), std::size_t{0});
  std::shuffle(sigma.begin(), sigma.end(), rng);
  std::vector<int> beta(n);
  std::bernoulli_distribution coin(0.5);
  for (int& b : beta) b = coin(rng) ? -1 : 1;
  return SignedPermutation(std::move(sigma), std::move(beta));
}

Vector SignedPermutation::apply(std::span<const double> x) const {
  if (x.size() != dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "signed permutation applied to vector of wrong length");
  }
  Vector y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[sigma_[i]] = beta_[i] < 0 ? -x[i] : x[i];
  }
  return y;
}

SignedPermutation SignedPermutation::inverse() const {
  std::vector<std::size_t> sigma(dim());
  std::vector<int> beta(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    sigma[sigma_[i]] = i;
    beta[sigma_[i]] = beta_[i];
  }
  return SignedPermutation(std::move(sigma), std::move(beta));
}

SignedPermutation SignedPermutation::compose(
    const SignedPermutation& other) const {
  if (other.dim() != dim()) {
    throw Error(ErrorCode::DimensionMismatch, "composition size mismatch");
  }
  // P Q e_i = beta_Q(i) P e_{sigma_Q(i)} = beta_Q(i) beta_P(sigma_Q(i)) e_..
  std::vector<std::size_t> sigma(dim());
  std::vector<int> beta(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    const std::size_t mid = other.sigma_[i];
    sigma[i] = sigma_[mid];
    beta[i] = other.beta_[i] * beta_[mid];
  }
  return SignedPermutation(std::move(sigma), std::move(beta));
}

Matrix SignedPermutation::to_matrix() const {
  Matrix m(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    m(sigma_[i], i) = static_cast<double>(beta_[i]);
  }
  return m;
}

Vector apply(const SignedPermutation& q, std::span<const double> x) {
  return q.apply(x);
}

std::uint64_t group_order(std::size_t n) {
  check_group_dim(n);
  std::uint64_t order = 1;
  for (std::size_t i = 1; i <= n; ++i) order *= 2 * i;
  return order;
}

void for_each_group_element(
    std::size_t n,
    const std::function<void(const SignedPermutation&)>& visit) {
  check_group_dim(n);
  std::vector<std::size_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), std::size_t{0});
  const std::uint32_t masks = 1u << n;
  do {
    for (std::uint32_t mask = 0; mask < masks; ++mask) {
      std::vector<int> beta(n);
      for (std::size_t i = 0; i < n; ++i) beta[i] = (mask >> i) & 1u ? -1 : 1;
      visit(SignedPermutation(sigma, std::move(beta)));
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
}

std::vector<SignedPermutation> enumerate_group(std::size_t n) {
  std::vector<SignedPermutation> out;
  out.reserve(group_order(n));
  for_each_group_element(n, [&](const SignedPermutation& q) { out.push_back(q); });
  return out;
}

ExactMatrix::ExactMatrix(std::size_t n, std::vector<std::int64_t> row_major)
    : n_(n), data_(std::move(row_major)) {
  if (data_.size() != n * n) {
    throw Error(ErrorCode::DimensionMismatch, "exact matrix is not square");
  }
}

ExactMatrix ExactMatrix::scalar(std::size_t n, std::int64_t c) {
  ExactMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = c;
  return m;
}

std::int64_t ExactMatrix::trace() const {
  std::int64_t t = 0;
  for (std::size_t i = 0; i < n_; ++i) t = checked_add(t, (*this)(i, i));
  return t;
}

ExactMatrix conjugation_sum(const ExactMatrix& a) {
  const std::size_t n = a.dim();
  check_group_dim(n);
  ExactMatrix sum(n);
  for_each_group_element(n, [&](const SignedPermutation& q) {
    const auto& s = q.sigma();
    const auto& b = q.beta();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const std::int64_t term = b[i] * b[j] * a(s[i], s[j]);
        sum(i, j) = checked_add(sum(i, j), term);
      }
    }
  });
  return sum;
}

std::int64_t conjugation_constant(const ExactMatrix& a) {
  const std::size_t n = a.dim();
  check_group_dim(n);
  std::int64_t c = std::int64_t{1} << n;
  for (std::size_t i = 2; i < n; ++i) c = checked_mul(c, static_cast<std::int64_t>(i));
  return checked_mul(c, a.trace());
}

double group_average_numerical_value(const NormSpec& spec, const Matrix& a,
                                     std::span<const double> x) {
  const std::size_t n = spec.dim();
  check_group_dim(n);
  if (!spec.is_one_symmetric()) {
    throw Error(ErrorCode::NotOneSymmetric,
                "group average identity needs a 1-symmetric norm, got " +
                    format_norm_spec(spec));
  }
  if (a.dim() != n || x.size() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix, point and norm dimensions differ");
  }
  const double rho = norm_eval(spec, x);
  if (std::abs(rho - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument,
                "point is not on the unit sphere (norm " + std::to_string(rho) +
                    ")");
  }
  const NormingResult xs = norming_functional(spec, x);
  if (!xs.smooth) {
    throw NonSmoothPointError("group average needs a smooth point", xs.margin);
  }

  // <Q^T A Q x, x*> = <A (Qx), Q x*>
  double total = 0.0;
  Vector aqx(n);
  for_each_group_element(n, [&](const SignedPermutation& q) {
    const Vector qx = q.apply(x);
    const Vector qf = q.apply(xs.functional);
    a.apply(qx, aqx);
    total += dot(aqx, qf);
  });
  return total / static_cast<double>(group_order(n));
}

std::optional<SymmetryWitness> asymmetry_witness(const NormSpec& spec) {
  if (spec.is_one_symmetric()) return std::nullopt;
  // Only weighted_l2 with unequal weights lands here: swapping two
  // coordinates with different weights moves e_i to a point of another norm.
  const auto& b = spec.weights();
  for (std::size_t j = 1; j < b.size(); ++j) {
    if (b[j] != b[0]) {
      Vector x(spec.dim(), 0.0);
      x[0] = 1.0;
      std::vector<std::size_t> sigma(spec.dim());
      std::iota(sigma.begin(), sigma.end(), std::size_t{0});
      std::swap(sigma[0], sigma[j]);
      return SymmetryWitness{std::move(x),
                             SignedPermutation(std::move(sigma),
                                               std::vector<int>(spec.dim(), 1))};
    }
  }
  return std::nullopt;
}

}  // namespace symtrace

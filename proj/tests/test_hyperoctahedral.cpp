// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "symtrace/error.hpp"
#include "symtrace/hyperoctahedral.hpp"

using namespace symtrace;

namespace {

ExactMatrix to_exact(const Matrix& a) {
  ExactMatrix e(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) e(i, j) = static_cast<std::int64_t>(a(i, j));
  return e;
}

Vector on_sphere(const NormSpec& spec, Vector x) {
  const double rho = norm_eval(spec, x);
  for (double& v : x) v /= rho;
  return x;
}

}  // namespace

TEST_CASE("group order and distinct elements") {
  CHECK(enumerate_group(1).size() == 2);
  CHECK(enumerate_group(2).size() == 8);
  const auto g4 = enumerate_group(4);
  CHECK(g4.size() == 384);
  std::set<std::pair<std::vector<std::size_t>, std::vector<int>>> seen;
  for (const auto& q : g4) seen.insert({q.sigma(), q.beta()});
  CHECK(seen.size() == 384);
  CHECK(group_order(5) == 3840);
  CHECK(group_order(8) == 10321920);

  for (const auto& q : enumerate_group(3)) {
    const Matrix m = q.to_matrix();
    for (std::size_t i = 0; i < 3; ++i) {
      int row_nz = 0, col_nz = 0;
      for (std::size_t j = 0; j < 3; ++j) {
        row_nz += m(i, j) != 0.0;
        col_nz += m(j, i) != 0.0;
        CHECK((m(i, j) == 0.0 || std::abs(m(i, j)) == 1.0));
      }
      CHECK(row_nz == 1);
      CHECK(col_nz == 1);
    }
  }
  CHECK_THROWS_AS(enumerate_group(0), Error);
  CHECK_THROWS_AS(enumerate_group(9), Error);
}

TEST_CASE("signed permutation construction is validated") {
  CHECK_THROWS_AS(SignedPermutation({0, 0}, {1, 1}), Error);
  CHECK_THROWS_AS(SignedPermutation({0, 2}, {1, 1}), Error);
  CHECK_THROWS_AS(SignedPermutation({0, 1}, {1, 0}), Error);
  CHECK_THROWS_AS(SignedPermutation({0, 1}, {1}), Error);
}

TEST_CASE("apply follows Q e_i = beta(i) e_sigma(i)") {
  const Vector x{2.5, -7.0};
  CHECK(SignedPermutation::identity(2).apply(x) == x);
  // sigma = (2,1), beta = (1,-1): Q e1 = e2, Q e2 = -e1, so Q(a,b) = (-b, a).
  const SignedPermutation q({1, 0}, {1, -1});
  CHECK(q.apply(x) == Vector{7.0, 2.5});
  CHECK(q.apply(Vector{1, 0}) == Vector{0, 1});
  CHECK(q.apply(Vector{0, 1}) == Vector{-1, 0});
  CHECK(q.apply(Vector{0, 0}) == Vector{0, 0});
  CHECK_THROWS_AS(q.apply(Vector{1, 2, 3}), Error);
}

TEST_CASE("group axioms hold exactly on random elements") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + t % 6;
    const auto p = SignedPermutation::random(n, rng);
    const auto q = SignedPermutation::random(n, rng);
    const auto r = SignedPermutation::random(n, rng);
    CHECK(p.compose(q).compose(r) == p.compose(q.compose(r)));
    CHECK(p.compose(p.inverse()) == SignedPermutation::identity(n));
    CHECK(p.inverse().compose(p) == SignedPermutation::identity(n));
    const Vector x = oracle::random_vector(n, rng);
    CHECK(p.inverse().apply(p.apply(x)) == x);
    CHECK(p.compose(q).apply(x) == p.apply(q.apply(x)));
    Vector mx(n);
    p.to_matrix().apply(x, mx);
    CHECK(mx == p.apply(x));
  }
}

TEST_CASE("conjugation sum: 2x2 literal case against the dense oracle") {
  const Matrix a(2, {1, 2, 3, 4});
  const Matrix dense = oracle::dense_conjugation_sum(a);
  CHECK(dense(0, 0) == 20.0);
  CHECK(dense(1, 1) == 20.0);
  CHECK(dense(0, 1) == 0.0);
  CHECK(dense(1, 0) == 0.0);
  CHECK(conjugation_sum(to_exact(a)) == ExactMatrix::scalar(2, 20));
  CHECK(conjugation_constant(to_exact(a)) == 20);
}

TEST_CASE("conjugation sum of the identity and of traceless matrices") {
  std::int64_t fact = 1;
  for (std::size_t n = 1; n <= 6; ++n) {
    if (n > 1) fact *= static_cast<std::int64_t>(n - 1);
    const std::int64_t c = fact * (std::int64_t{1} << n) * static_cast<std::int64_t>(n);
    CHECK(conjugation_sum(ExactMatrix::scalar(n, 1)) == ExactMatrix::scalar(n, c));
  }
  const ExactMatrix traceless(3, {4, -1, 7, 2, -6, 3, 0, 9, 2});
  CHECK(traceless.trace() == 0);
  CHECK(conjugation_sum(traceless) == ExactMatrix(3));
}

TEST_CASE("conjugation sum matches the closed form for random integer matrices") {
  std::mt19937_64 rng(2024);
  for (std::size_t n = 1; n <= 5; ++n) {
    for (int t = 0; t < 20; ++t) {
      const Matrix a = oracle::random_integer_matrix(n, rng);
      const ExactMatrix exact = to_exact(a);
      const ExactMatrix sum = conjugation_sum(exact);
      CHECK(sum == ExactMatrix::scalar(n, conjugation_constant(exact)));
      if (n <= 3) {
        const Matrix dense = oracle::dense_conjugation_sum(a);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            CHECK(dense(i, j) == static_cast<double>(sum(i, j)));
      }
    }
  }
}

TEST_CASE("sign sums cancel off the diagonal for each fixed permutation") {
  for (std::size_t n = 2; n <= 4; ++n) {
    std::map<std::vector<std::size_t>, std::vector<int>> by_sigma;
    for (const auto& q : enumerate_group(n)) {
      auto& acc = by_sigma[q.sigma()];
      acc.resize(n * n, 0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) acc[i * n + j] += q.beta()[i] * q.beta()[j];
    }
    for (const auto& [sigma, acc] : by_sigma) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          CHECK(acc[i * n + j] == (i == j ? (1 << n) : 0));
    }
  }
}

TEST_CASE("conjugation sum reports overflow instead of wrapping") {
  const std::int64_t big = std::int64_t{1} << 60;
  CHECK_THROWS_AS(conjugation_sum(ExactMatrix(3, {big, big, big, big, big, big, big, big, big})),
                  Error);
  CHECK_THROWS_AS(conjugation_sum(ExactMatrix(9)), Error);
}

TEST_CASE("group average: literal cases") {
  const auto lp3 = NormSpec::lp(3.0, 3);
  CHECK(group_average_numerical_value(lp3, Matrix::identity(3),
                                      on_sphere(lp3, {1, 2, 3})) ==
        doctest::Approx(1.0).epsilon(1e-14));

  // l1, A = [[1,2],[3,4]], x = (0.3, 0.7)/rho. Brute force with the dense
  // conjugation sum and the l1 sign functional (1, 1).
  const auto l1 = NormSpec::l1(2);
  const Matrix a(2, {1, 2, 3, 4});
  const Vector x = on_sphere(l1, {0.3, 0.7});
  const Matrix dense = oracle::dense_conjugation_sum(a);
  Vector sx(2);
  dense.apply(x, sx);
  const double brute = (sx[0] + sx[1]) / 8.0;
  CHECK(brute == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(std::abs(group_average_numerical_value(l1, a, x) - 2.5) <= 1e-10 * 2.5);

  std::mt19937_64 rng(8);
  const Matrix b = oracle::random_integer_matrix(3, rng);
  const double got = group_average_numerical_value(lp3, b, on_sphere(lp3, {1, 2, 3}));
  const double want = b.trace() / 3.0;
  CHECK(std::abs(got - want) <= 1e-10 * std::max(std::abs(want), 1.0));
}

TEST_CASE("group average equals tr A / N for every 1-symmetric family") {
  std::mt19937_64 rng(31);
  for (std::size_t n = 2; n <= 4; ++n) {
    for (const auto& spec : oracle::symmetric_families(n)) {
      for (int t = 0; t < 50; ++t) {
        const Matrix a = oracle::random_matrix(n, rng);
        const Vector x = on_sphere(spec, oracle::random_vector(n, rng));
        const double want = a.trace() / static_cast<double>(n);
        const double got = group_average_numerical_value(spec, a, x);
        CHECK(std::abs(got - want) <= 1e-10 * std::max(std::abs(want), 1.0));
      }
    }
  }
}

TEST_CASE("group average preconditions") {
  const Matrix a = Matrix::identity(2);
  try {
    group_average_numerical_value(NormSpec::weighted_l2({1, 0.5}), a, Vector{1, 0});
    FAIL("expected NotOneSymmetric");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotOneSymmetric);
  }
  CHECK_THROWS_AS(group_average_numerical_value(NormSpec::linf(2), a, Vector{1, 1}),
                  NonSmoothPointError);
  CHECK_THROWS_AS(group_average_numerical_value(NormSpec::l1(2), a, Vector{1, 1}), Error);
  CHECK_THROWS_AS(group_average_numerical_value(NormSpec::l1(3), a, Vector{1, 0, 0}), Error);
}

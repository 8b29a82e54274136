// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace symtrace {

/// Dense square real matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}
  Matrix(std::size_t n, std::vector<double> row_major);

  static Matrix identity(std::size_t n);

  std::size_t dim() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * n_ + j];
  }
  std::span<const double> data() const noexcept { return data_; }

  double trace() const noexcept;

  /// y = A x
  void apply(std::span<const double> x, std::span<double> y) const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator*=(double c);

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

}  // namespace symtrace

// SPDX-License-Identifier: Apache-2.0

#include "symtrace/matrix.hpp"

#include <string>

#include "symtrace/error.hpp"

namespace symtrace {

Matrix::Matrix(std::size_t n, std::vector<double> row_major)
    : n_(n), data_(std::move(row_major)) {
  if (data_.size() != n * n) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix of dimension " + std::to_string(n) + " needs " +
                    std::to_string(n * n) + " entries, got " +
                    std::to_string(data_.size()));
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double Matrix::trace() const noexcept {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

void Matrix::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n_ || y.size() != n_) {
    throw Error(ErrorCode::DimensionMismatch, "matrix-vector size mismatch");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    const double* row = data_.data() + i * n_;
    for (std::size_t j = 0; j < n_; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

Matrix& Matrix::operator+=(const Matrix& other) {
  if (other.n_ != n_) {
    throw Error(ErrorCode::DimensionMismatch, "matrix sum size mismatch");
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double c) {
  for (double& v : data_) v *= c;
  return *this;
}

}  // namespace symtrace

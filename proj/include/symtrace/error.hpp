// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace symtrace {

enum class ErrorCode {
  InvalidArgument = 1,
  DimensionMismatch,
  NonFinite,
  ZeroVector,
  NonSmoothPoint,
  NotOneSymmetric,
  OutOfRange,
  Parse,
  NoConvergence,
  Io,
  Overflow,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when an operation needs a unique norming functional at a point
/// where the norm has a corner (tied moduli or a zero coordinate).
class NonSmoothPointError : public Error {
 public:
  NonSmoothPointError(const std::string& what, double margin)
      : Error(ErrorCode::NonSmoothPoint, what), margin_(margin) {}

  double margin() const noexcept { return margin_; }

 private:
  double margin_;
};

}  // namespace symtrace

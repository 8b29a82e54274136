// SPDX-License-Identifier: Apache-2.0

#include "symtrace/norm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "symtrace/error.hpp"

namespace symtrace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dim(std::size_t dim) {
  if (dim == 0) {
    throw Error(ErrorCode::InvalidArgument, "norm dimension must be >= 1");
  }
}

void check_input(const NormSpec& spec, std::span<const double> x) {
  if (x.size() != spec.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "vector has length " + std::to_string(x.size()) +
                    ", norm has dimension " + std::to_string(spec.dim()));
  }
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::NonFinite, "vector has a non-finite entry");
    }
  }
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

// Max-rescaled p-norm: ||x||_p = m * (sum (|x_i|/m)^p)^(1/p), m = ||x||_inf.
double scaled_pnorm(std::span<const double> x, double p) {
  const double m = max_abs(x);
  if (m == 0.0) return 0.0;
  double s = 0.0;
  if (p == 2.0) {
    for (double v : x) {
      const double t = v / m;
      s += t * t;
    }
    return m * std::sqrt(s);
  }
  for (double v : x) s += std::pow(std::abs(v) / m, p);
  return m * std::pow(s, 1.0 / p);
}

double sum_abs(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

double sign_or_plus(double v) { return v < 0.0 ? -1.0 : 1.0; }

// Indices ordered by decreasing modulus, ties by increasing index.
std::vector<std::size_t> modulus_order(std::span<const double> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(x[a]) > std::abs(x[b]);
  });
  return idx;
}

std::vector<double> sorted_moduli(std::span<const double> x) {
  std::vector<double> m(x.size());
  std::transform(x.begin(), x.end(), m.begin(),
                 [](double v) { return std::abs(v); });
  std::sort(m.begin(), m.end(), std::greater<>());
  return m;
}

double parse_real(std::string_view s, std::string_view what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorCode::Parse,
                "cannot parse " + std::string(what) + " '" + std::string(s) +
                    "'");
  }
  return v;
}

std::size_t parse_count(std::string_view s, std::string_view what) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorCode::Parse,
                "cannot parse " + std::string(what) + " '" + std::string(s) +
                    "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

NormSpec NormSpec::euclidean(std::size_t dim) {
  require_dim(dim);
  return NormSpec(NormFamily::Euclidean, dim);
}

NormSpec NormSpec::lp(double p, std::size_t dim) {
  require_dim(dim);
  if (!std::isfinite(p)) {
    throw Error(ErrorCode::OutOfRange, "lp requires finite p; use linf");
  }
  if (p < kMinP || p > kMaxP) {
    std::ostringstream os;
    os << "lp exponent " << p << " outside [" << kMinP << ", " << kMaxP
       << "]; use l1 or linf for the limits";
    throw Error(ErrorCode::OutOfRange, os.str());
  }
  NormSpec s(NormFamily::Lp, dim);
  s.p_ = p;
  return s;
}

NormSpec NormSpec::l1(std::size_t dim) {
  require_dim(dim);
  return NormSpec(NormFamily::L1, dim);
}

NormSpec NormSpec::linf(std::size_t dim) {
  require_dim(dim);
  return NormSpec(NormFamily::Linf, dim);
}

NormSpec NormSpec::top_k(std::size_t k, std::size_t dim) {
  require_dim(dim);
  if (k < 1 || k > dim) {
    throw Error(ErrorCode::OutOfRange, "top_k requires 1 <= k <= N (k=" +
                                           std::to_string(k) + ", N=" +
                                           std::to_string(dim) + ")");
  }
  NormSpec s(NormFamily::TopK, dim);
  s.k_ = k;
  return s;
}

NormSpec NormSpec::weighted_l2(std::vector<double> b) {
  require_dim(b.size());
  for (double v : b) {
    if (!(std::isfinite(v) && v > 0.0)) {
      throw Error(ErrorCode::OutOfRange,
                  "weighted_l2 weights must be positive and finite");
    }
  }
  NormSpec s(NormFamily::WeightedL2, b.size());
  s.b_ = std::move(b);
  return s;
}

bool NormSpec::is_one_symmetric() const noexcept {
  if (family_ != NormFamily::WeightedL2) return true;
  return std::all_of(b_.begin(), b_.end(),
                     [&](double v) { return v == b_.front(); });
}

bool NormSpec::everywhere_smooth() const noexcept {
  switch (family_) {
    case NormFamily::Euclidean:
    case NormFamily::Lp:
    case NormFamily::WeightedL2:
      return true;
    case NormFamily::TopK:
      // top_k(1) on R^1 is |x|, smooth off the origin.
      return dim_ == 1;
    case NormFamily::L1:
    case NormFamily::Linf:
      return dim_ == 1;
  }
  return false;
}

std::string_view family_name(NormFamily family) noexcept {
  switch (family) {
    case NormFamily::Euclidean: return "euclidean";
    case NormFamily::Lp: return "lp";
    case NormFamily::L1: return "l1";
    case NormFamily::Linf: return "linf";
    case NormFamily::TopK: return "topk";
    case NormFamily::WeightedL2: return "wl2";
  }
  return "unknown";
}

NormSpec parse_norm_spec(std::string_view text) {
  const auto parts = split(text, ':');
  const std::string_view head = parts.front();
  auto expect_parts = [&](std::size_t n) {
    if (parts.size() != n) {
      throw Error(ErrorCode::Parse,
                  "malformed norm spec '" + std::string(text) + "'");
    }
  };
  if (head == "euclidean") {
    expect_parts(2);
    return NormSpec::euclidean(parse_count(parts[1], "dimension"));
  }
  if (head == "l1") {
    expect_parts(2);
    return NormSpec::l1(parse_count(parts[1], "dimension"));
  }
  if (head == "linf") {
    expect_parts(2);
    return NormSpec::linf(parse_count(parts[1], "dimension"));
  }
  if (head == "lp") {
    expect_parts(3);
    const std::size_t dim = parse_count(parts[2], "dimension");
    if (parts[1] == "inf" || parts[1] == "infinity") {
      throw Error(ErrorCode::OutOfRange, "lp:inf is not accepted; use linf");
    }
    const double p = parse_real(parts[1], "exponent");
    if (p == 1.0) return NormSpec::l1(dim);
    if (p < 1.0) {
      throw Error(ErrorCode::OutOfRange,
                  "lp with p < 1 is not a norm (p=" + std::string(parts[1]) +
                      ")");
    }
    return NormSpec::lp(p, dim);
  }
  if (head == "topk") {
    expect_parts(3);
    return NormSpec::top_k(parse_count(parts[1], "k"),
                           parse_count(parts[2], "dimension"));
  }
  if (head == "wl2") {
    expect_parts(2);
    std::vector<double> b;
    for (auto item : split(parts[1], ',')) b.push_back(parse_real(item, "weight"));
    return NormSpec::weighted_l2(std::move(b));
  }
  throw Error(ErrorCode::Parse, "unknown norm family in '" + std::string(text) + "'");
}

std::string format_norm_spec(const NormSpec& spec) {
  const std::string dim = std::to_string(spec.dim());
  switch (spec.family()) {
    case NormFamily::Euclidean: return "euclidean:" + dim;
    case NormFamily::Lp: return "lp:" + shortest(spec.p()) + ":" + dim;
    case NormFamily::L1: return "l1:" + dim;
    case NormFamily::Linf: return "linf:" + dim;
    case NormFamily::TopK: return "topk:" + std::to_string(spec.k()) + ":" + dim;
    case NormFamily::WeightedL2: {
      std::string out = "wl2:";
      for (std::size_t i = 0; i < spec.dim(); ++i) {
        if (i) out += ',';
        out += shortest(spec.weights()[i]);
      }
      return out;
    }
  }
  return {};
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch, "dot product length mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm_eval(const NormSpec& spec, std::span<const double> x) {
  check_input(spec, x);
  switch (spec.family()) {
    case NormFamily::Euclidean: return scaled_pnorm(x, 2.0);
    case NormFamily::Lp: return scaled_pnorm(x, spec.p());
    case NormFamily::L1: return sum_abs(x);
    case NormFamily::Linf: return max_abs(x);
    case NormFamily::TopK: {
      const auto m = sorted_moduli(x);
      double s = 0.0;
      for (std::size_t i = 0; i < spec.k(); ++i) s += m[i];
      return s;
    }
    case NormFamily::WeightedL2: {
      Vector y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] / spec.weights()[i];
      return scaled_pnorm(y, 2.0);
    }
  }
  return 0.0;
}

double dual_norm_eval(const NormSpec& spec, std::span<const double> f) {
  check_input(spec, f);
  switch (spec.family()) {
    case NormFamily::Euclidean: return scaled_pnorm(f, 2.0);
    case NormFamily::Lp: return scaled_pnorm(f, spec.p() / (spec.p() - 1.0));
    case NormFamily::L1: return max_abs(f);
    case NormFamily::Linf: return sum_abs(f);
    case NormFamily::TopK:
      return std::max(max_abs(f), sum_abs(f) / static_cast<double>(spec.k()));
    case NormFamily::WeightedL2: {
      Vector y(f.size());
      for (std::size_t i = 0; i < f.size(); ++i) y[i] = f[i] * spec.weights()[i];
      return scaled_pnorm(y, 2.0);
    }
  }
  return 0.0;
}

double smoothness_margin(const NormSpec& spec, std::span<const double> x) {
  check_input(spec, x);
  if (max_abs(x) == 0.0) {
    throw Error(ErrorCode::ZeroVector, "smoothness margin undefined at 0");
  }
  if (spec.everywhere_smooth()) return kInf;
  switch (spec.family()) {
    case NormFamily::L1: {
      double m = kInf;
      for (double v : x) m = std::min(m, std::abs(v));
      return m;
    }
    case NormFamily::Linf: {
      const auto m = sorted_moduli(x);
      return m[0] - m[1];
    }
    case NormFamily::TopK: {
      const auto m = sorted_moduli(x);
      const std::size_t k = spec.k();
      const double gap = k < m.size() ? m[k - 1] - m[k] : kInf;
      return std::min(gap, m[k - 1]);
    }
    default:
      return kInf;
  }
}

Vector select_norming_direction(const NormSpec& spec,
                                std::span<const double> x) {
  check_input(spec, x);
  const double rho = norm_eval(spec, x);
  if (rho == 0.0) {
    throw Error(ErrorCode::ZeroVector, "no norming direction at 0");
  }
  Vector g(x.size(), 0.0);
  switch (spec.family()) {
    case NormFamily::Euclidean:
      for (std::size_t i = 0; i < x.size(); ++i) g[i] = x[i] / rho;
      break;
    case NormFamily::Lp: {
      const double e = spec.p() - 1.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = std::abs(x[i]) / rho;
        const double mag = t == 0.0 ? 0.0 : std::pow(t, e);
        g[i] = x[i] < 0.0 ? -mag : mag;
      }
      break;
    }
    case NormFamily::L1:
      for (std::size_t i = 0; i < x.size(); ++i) g[i] = sign_or_plus(x[i]);
      break;
    case NormFamily::Linf: {
      const std::size_t j = modulus_order(x).front();
      g[j] = sign_or_plus(x[j]);
      break;
    }
    case NormFamily::TopK: {
      const auto order = modulus_order(x);
      for (std::size_t r = 0; r < spec.k(); ++r) {
        g[order[r]] = sign_or_plus(x[order[r]]);
      }
      break;
    }
    case NormFamily::WeightedL2:
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double b = spec.weights()[i];
        g[i] = (x[i] / b) / b / rho;
      }
      break;
  }
  return g;
}

Vector norm_gradient(const NormSpec& spec, std::span<const double> x,
                     double tie_tolerance) {
  const double margin = smoothness_margin(spec, x);
  if (margin <= tie_tolerance) {
    std::ostringstream os;
    os << "non-smooth point for " << format_norm_spec(spec)
       << " (margin " << margin << ")";
    throw NonSmoothPointError(os.str(), margin);
  }
  return select_norming_direction(spec, x);
}

}  // namespace symtrace

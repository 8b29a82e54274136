// SPDX-License-Identifier: Apache-2.0

#include "symtrace/trace_lab.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"

#include "symtrace/duality.hpp"
#include "symtrace/error.hpp"
#include "symtrace/hyperoctahedral.hpp"

namespace symtrace {

namespace {

void require_matching(const NormSpec& spec, const Matrix& a) {
  if (a.dim() != spec.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix is " + std::to_string(a.dim()) + "x" +
                    std::to_string(a.dim()) + " but norm has dimension " +
                    std::to_string(spec.dim()));
  }
}

std::string fmt_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

void require_finite(const std::vector<double>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::NonFinite, "matrix has a non-finite entry");
    }
  }
}

}  // namespace

std::string_view method_name(TraceMethod method) noexcept {
  switch (method) {
    case TraceMethod::MonteCarlo: return "montecarlo";
    case TraceMethod::Quadrature2d: return "quadrature2d";
    case TraceMethod::GroupAverage: return "groupaverage";
  }
  return "unknown";
}

TraceMethod parse_method(std::string_view text) {
  if (text == "montecarlo") return TraceMethod::MonteCarlo;
  if (text == "quadrature2d") return TraceMethod::Quadrature2d;
  if (text == "groupaverage") return TraceMethod::GroupAverage;
  throw Error(ErrorCode::Parse, "unknown method '" + std::string(text) + "'");
}

double numerical_value(const NormSpec& spec, const Matrix& a,
                       std::span<const double> x) {
  const Vector g = norm_gradient(spec, x);
  Vector ax(x.size());
  a.apply(x, ax);
  return dot(ax, g) / dot(x, g);
}

EstimateReport estimate_trace(const TraceExperimentConfig& config) {
  const NormSpec& spec = config.norm;
  const Matrix& a = config.matrix;
  require_matching(spec, a);
  const double n = static_cast<double>(spec.dim());
  auto integrand = [&](std::span<const double> x) {
    return numerical_value(spec, a, x);
  };

  switch (config.method) {
    case TraceMethod::MonteCarlo: {
      EstimateReport r = estimate_surface_average(
          spec, integrand, config.n_samples, config.seed, config.n_batches,
          "numerical_value", config.threads);
      r.estimate *= n;
      r.stderr_ *= n;
      return r;
    }
    case TraceMethod::Quadrature2d: {
      const double avg = quadrature_average_2d(spec, integrand, config.tol / n);
      return EstimateReport{.estimate = n * avg,
                            .n_samples = 0,
                            .n_batches = 0,
                            .seed = config.seed,
                            .spec = spec,
                            .integrand = "numerical_value",
                            .method = "quadrature2d",
                            .theorem_hypothesis_violated = !spec.is_one_symmetric()};
    }
    case TraceMethod::GroupAverage: {
      if (!spec.is_one_symmetric()) {
        throw Error(ErrorCode::NotOneSymmetric,
                    "groupaverage needs a 1-symmetric norm");
      }
      const SampleBatch point = pushforward_sample(spec, 1, config.seed, 1);
      const double avg = group_average_numerical_value(spec, a, point.points.front());
      return EstimateReport{.estimate = n * avg,
                            .n_samples = 1,
                            .n_batches = 0,
                            .seed = config.seed,
                            .spec = spec,
                            .integrand = "numerical_value",
                            .method = "groupaverage",
                            .resampled = point.resampled};
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown method");
}

EstimateReport estimate_trace_quadratic_form(const Matrix& a, std::size_t n,
                                             std::uint64_t seed,
                                             std::size_t n_batches,
                                             unsigned threads) {
  const NormSpec spec = NormSpec::euclidean(a.dim());
  EstimateReport r = estimate_surface_average(
      spec,
      [&](std::span<const double> x) {
        Vector ax(x.size());
        a.apply(x, ax);
        return dot(ax, x) / dot(x, x);
      },
      n, seed, n_batches, "quadratic_form", threads);
  r.estimate *= static_cast<double>(a.dim());
  r.stderr_ *= static_cast<double>(a.dim());
  return r;
}

double ellipse_average(double b, double tol) {
  if (!(b >= 0.0 && b <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "ellipse parameter b must lie in [0, 1]");
  }
  // Speed of t -> (cos t, b sin t); at b = 0 it is |sin t|, which kinks at
  // multiples of pi, so quarter-period breakpoints cover every case.
  auto speed = [b](double t) {
    const double s = std::sin(t);
    const double c = std::cos(t);
    return std::sqrt(s * s + b * b * c * c);
  };
  std::vector<double> bp(5);
  for (int i = 0; i <= 4; ++i) bp[i] = i * std::numbers::pi / 2.0;
  const double len = integrate_piecewise(speed, bp, tol * 0.1);
  const double num = integrate_piecewise(
      [&](double t) {
        const double c = std::cos(t);
        return c * c * speed(t);
      },
      bp, tol * 0.1 * len);
  return num / len;
}

std::vector<EllipseRow> ellipse_counterexample(std::span<const double> b_values,
                                               double tol) {
  std::vector<EllipseRow> rows;
  rows.reserve(b_values.size());
  for (double b : b_values) rows.push_back({b, ellipse_average(b, tol)});
  return rows;
}

std::vector<EstimateReport> convergence_study(
    const TraceExperimentConfig& config, std::span<const std::size_t> schedule) {
  if (schedule.empty()) {
    throw Error(ErrorCode::InvalidArgument, "empty sample schedule");
  }
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (schedule[i] <= schedule[i - 1]) {
      throw Error(ErrorCode::InvalidArgument, "sample schedule must increase");
    }
  }
  std::vector<EstimateReport> out;
  out.reserve(schedule.size());
  for (std::size_t n : schedule) {
    TraceExperimentConfig c = config;
    c.n_samples = n;
    c.method = TraceMethod::MonteCarlo;
    out.push_back(estimate_trace(c));
  }
  return out;
}

Matrix parse_matrix_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("matrix JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("rows") || !doc["rows"].is_array()) {
    throw Error(ErrorCode::Parse, "matrix JSON needs a \"rows\" array");
  }
  const auto& rows = doc["rows"];
  const std::size_t n = rows.size();
  if (doc.contains("n")) {
    if (!doc["n"].is_number_unsigned() || doc["n"].get<std::size_t>() != n) {
      throw Error(ErrorCode::DimensionMismatch,
                  "matrix JSON \"n\" does not match the number of rows");
    }
  }
  if (n == 0) throw Error(ErrorCode::Parse, "matrix has no rows");
  std::vector<double> data;
  data.reserve(n * n);
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != n) {
      throw Error(ErrorCode::DimensionMismatch, "matrix is not square");
    }
    for (const auto& v : row) {
      if (!v.is_number()) throw Error(ErrorCode::Parse, "matrix entry is not a number");
      data.push_back(v.get<double>());
    }
  }
  require_finite(data);
  return Matrix(n, std::move(data));
}

Matrix parse_matrix_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (true) {
      std::size_t comma = line.find(',', pos);
      const std::string_view cell =
          trim(line.substr(pos, comma == std::string_view::npos ? line.size() - pos
                                                                : comma - pos));
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw Error(ErrorCode::Parse, "bad CSV cell '" + std::string(cell) + "'");
      }
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  const std::size_t n = rows.size();
  if (n == 0) throw Error(ErrorCode::Parse, "matrix CSV is empty");
  std::vector<double> data;
  data.reserve(n * n);
  for (const auto& row : rows) {
    if (row.size() != n) {
      throw Error(ErrorCode::DimensionMismatch,
                  "matrix CSV is ragged or not square");
    }
    data.insert(data.end(), row.begin(), row.end());
  }
  require_finite(data);
  return Matrix(n, std::move(data));
}

MatrixInput load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open matrix file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool is_json = first != std::string::npos && text[first] == '{';
  return {is_json ? parse_matrix_json(text) : parse_matrix_csv(text), path};
}

std::string report_to_json(const EstimateReport& r) {
  nlohmann::ordered_json j;
  j["estimate"] = r.estimate;
  j["stderr"] = r.stderr_;
  j["n_samples"] = r.n_samples;
  j["n_batches"] = r.n_batches;
  j["seed"] = r.seed;
  j["norm"] = format_norm_spec(r.spec);
  j["integrand"] = r.integrand;
  j["method"] = r.method;
  j["resampled"] = r.resampled;
  j["theorem_hypothesis_violated"] = r.theorem_hypothesis_violated;
  return j.dump(2) + "\n";
}

std::string ellipse_to_csv(std::span<const EllipseRow> rows) {
  std::string out = "b,average\n";
  for (const auto& row : rows) {
    out += fmt_real(row.b) + "," + fmt_real(row.average) + "\n";
  }
  return out;
}

std::string convergence_to_csv(std::span<const EstimateReport> reports,
                               double true_trace) {
  std::string out = "n,estimate,stderr,abs_error\n";
  for (const auto& r : reports) {
    out += std::to_string(r.n_samples) + "," + fmt_real(r.estimate) + "," +
           fmt_real(r.stderr_) + "," + fmt_real(std::abs(r.estimate - true_trace)) +
           "\n";
  }
  return out;
}

GroupVerifyResult group_verify(std::size_t dim, std::size_t trials,
                               std::uint64_t seed) {
  GroupVerifyResult result{.trials = trials, .group_order = group_order(dim)};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> entry(-9, 9);
  for (std::size_t t = 0; t < trials; ++t) {
    ExactMatrix a(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) a(i, j) = entry(rng);
    }
    const ExactMatrix expected = ExactMatrix::scalar(dim, conjugation_constant(a));
    if (!(conjugation_sum(a) == expected)) ++result.mismatches;
  }
  return result;
}

}  // namespace symtrace

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symtrace/matrix.hpp"
#include "symtrace/norm.hpp"
#include "symtrace/sphere_measure.hpp"

namespace symtrace {

enum class TraceMethod { MonteCarlo, Quadrature2d, GroupAverage };

std::string_view method_name(TraceMethod method) noexcept;
TraceMethod parse_method(std::string_view text);

struct MatrixInput {
  Matrix matrix;
  std::string source;
};

struct TraceExperimentConfig {
  NormSpec norm;
  Matrix matrix;
  std::size_t n_samples = 1'000'000;
  std::uint64_t seed = 0;
  std::size_t n_batches = kDefaultBatches;
  TraceMethod method = TraceMethod::MonteCarlo;
  double tol = 1e-10;  // quadrature2d only
  unsigned threads = 0;
};

/// <A x, x*> / <x, x*>. On the unit sphere the denominator is 1, so this is
/// the numerical value <A x, x*>; dividing keeps A = I exactly 1.
double numerical_value(const NormSpec& spec, const Matrix& a,
                       std::span<const double> x);

/// Estimates tr A = N * integral over S_X of <A x, x*> d mu.
/// montecarlo: self-normalised pushforward sampling with batch-means error.
/// quadrature2d: adaptive quadrature over the planar sphere, stderr 0.
/// groupaverage: exact BC_N average at one sampled smooth point, stderr 0.
/// Norms that are not 1-symmetric are accepted for montecarlo and
/// quadrature2d and flagged in the report.
EstimateReport estimate_trace(const TraceExperimentConfig& config);

/// Euclidean special case tr A = N * integral of <A x, x> over S^{N-1}.
EstimateReport estimate_trace_quadratic_form(const Matrix& a, std::size_t n,
                                             std::uint64_t seed,
                                             std::size_t n_batches = kDefaultBatches,
                                             unsigned threads = 0);

/// Arc-length average of x^2 over the ellipse (cos t, b sin t), b in [0, 1].
/// b = 0 integrates the degenerate limit curve directly.
double ellipse_average(double b, double tol);

struct EllipseRow {
  double b;
  double average;
};
std::vector<EllipseRow> ellipse_counterexample(std::span<const double> b_values,
                                               double tol);

/// One report per schedule entry, all with config.seed, so smaller runs use
/// a prefix of the larger runs' sample streams.
std::vector<EstimateReport> convergence_study(
    const TraceExperimentConfig& config, std::span<const std::size_t> schedule);

MatrixInput load_matrix(const std::string& path);
Matrix parse_matrix_json(std::string_view text);
Matrix parse_matrix_csv(std::string_view text);

std::string report_to_json(const EstimateReport& report);
std::string ellipse_to_csv(std::span<const EllipseRow> rows);
std::string convergence_to_csv(std::span<const EstimateReport> reports,
                               double true_trace);

/// Checks conjugation_sum against (N-1)! 2^N tr(A) I on `trials` random
/// integer matrices with entries in [-9, 9]. Returns the mismatch count.
struct GroupVerifyResult {
  std::size_t trials = 0;
  std::size_t mismatches = 0;
  std::uint64_t group_order = 0;
};
GroupVerifyResult group_verify(std::size_t dim, std::size_t trials,
                               std::uint64_t seed);

}  // namespace symtrace

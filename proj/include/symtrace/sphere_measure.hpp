// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "symtrace/norm.hpp"

namespace symtrace {

/// Points on the unit sphere S_X with their surface-measure weights.
struct SampleBatch {
  std::vector<Vector> points;   // norm(point) == 1
  std::vector<double> weights;  // pushforward density at the source direction
  std::uint64_t seed = 0;
  NormSpec spec;
  std::uint64_t resampled = 0;  // directions redrawn because they hit a corner
};

struct EstimateReport {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t n_batches = 0;
  std::uint64_t seed = 0;
  NormSpec spec;
  std::string integrand;
  std::string method = "montecarlo";
  std::uint64_t resampled = 0;
  bool theorem_hypothesis_violated = false;
};

using Integrand = std::function<double(std::span<const double>)>;

/// Samples are produced in fixed-size chunks; chunk c draws from its own
/// generator seeded with (seed, c), so output depends only on (n, seed) and
/// never on the thread count. threads == 0 picks the hardware concurrency.
inline constexpr std::size_t kSampleChunk = 4096;
inline constexpr std::size_t kDefaultBatches = 100;

std::vector<Vector> sample_euclidean_sphere(std::size_t n, std::size_t dim,
                                            std::uint64_t seed,
                                            unsigned threads = 0);

/// Density of the surface measure of S_X relative to the uniform measure on
/// the Euclidean sphere, under u -> u / norm(u):
///   w(u) = ||grad norm(u)||_2 / norm(u)^N,   ||u||_2 == 1.
double surface_weight(const NormSpec& spec, std::span<const double> u);

SampleBatch pushforward_sample(const NormSpec& spec, std::size_t n,
                               std::uint64_t seed, unsigned threads = 0);

/// Self-normalised estimate of the mu-average of f with batch-means
/// standard error. Uses n_batches * floor(n / n_batches) samples.
EstimateReport estimate_surface_average(const NormSpec& spec,
                                        const Integrand& f, std::size_t n,
                                        std::uint64_t seed,
                                        std::size_t n_batches = kDefaultBatches,
                                        std::string integrand_tag = "custom",
                                        unsigned threads = 0);

/// Average of f over a planar S_X against arc length, by adaptive
/// Gauss-Kronrod on [0, 2 pi) split at every multiple of pi/4.
double quadrature_average_2d(const NormSpec& spec, const Integrand& f,
                             double tol);

/// Arc length of a planar S_X as the angular integral of surface_weight.
double perimeter_2d(const NormSpec& spec, double tol);

/// Monte Carlo (N-1)-dimensional area of S_X.
EstimateReport surface_area(const NormSpec& spec, std::size_t n,
                            std::uint64_t seed,
                            std::size_t n_batches = kDefaultBatches,
                            unsigned threads = 0);

/// Area of the Euclidean unit sphere in R^N.
double euclidean_sphere_area(std::size_t dim);

/// Integral of f from breakpoints.front() to breakpoints.back(), one
/// adaptive rule per consecutive pair, to absolute accuracy tol. Segments that miss their share are bisected; throws NoConvergence past the bisection budget.
double integrate_piecewise(const std::function<double(double)>& f,
                           std::span<const double> breakpoints, double tol);

}  // namespace symtrace

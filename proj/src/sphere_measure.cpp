// SPDX-License-Identifier: Apache-2.0

#include "symtrace/sphere_measure.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "symtrace/error.hpp"

namespace symtrace {

namespace {

std::mt19937_64 chunk_generator(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk),
                    static_cast<std::uint32_t>(chunk >> 32)};
  return std::mt19937_64(seq);
}

// Runs fn(chunk, begin, end) over [0, n) in kSampleChunk pieces. Exceptions
// are rethrown in chunk order so failures are reproducible too.
template <class Fn>
void run_chunks(std::size_t n, unsigned threads, Fn&& fn) {
  const std::size_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, chunks));

  std::vector<std::exception_ptr> errors(chunks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        fn(c, c * kSampleChunk, std::min(n, (c + 1) * kSampleChunk));
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void draw_direction(std::mt19937_64& rng, std::normal_distribution<double>& gauss,
                    std::span<double> u) {
  for (;;) {
    double ss = 0.0;
    for (double& v : u) {
      v = gauss(rng);
      ss += v * v;
    }
    if (ss > 0.0) {
      const double r = std::sqrt(ss);
      for (double& v : u) v /= r;
      return;
    }
  }
}

// Draws a direction that is a smooth point of spec; returns redraw count.
std::uint64_t draw_smooth_direction(const NormSpec& spec, std::mt19937_64& rng,
                                    std::normal_distribution<double>& gauss,
                                    std::span<double> u) {
  std::uint64_t redraws = 0;
  for (;;) {
    draw_direction(rng, gauss, u);
    if (spec.everywhere_smooth() || smoothness_margin(spec, u) > 0.0) {
      return redraws;
    }
    ++redraws;
  }
}

double weight_unchecked(const NormSpec& spec, std::span<const double> u) {
  const Vector g = select_norming_direction(spec, u);
  const double rho = norm_eval(spec, u);
  return std::sqrt(dot(g, g)) / std::pow(rho, static_cast<double>(spec.dim()));
}

std::string describe_point(std::span<const double> x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ')';
  return os.str();
}

void check_batches(std::size_t n, std::size_t n_batches) {
  if (n_batches < 2 || n < n_batches) {
    throw Error(ErrorCode::InvalidArgument,
                "need n >= n_batches >= 2 (n=" + std::to_string(n) +
                    ", n_batches=" + std::to_string(n_batches) + ")");
  }
}

// Ratio estimate sum w f / sum w, centred on a reference value so that a
// constant integrand reproduces itself exactly.
double centred_ratio(std::span<const double> w, std::span<const double> f,
                     double ref) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    num += w[i] * (f[i] - ref);
    den += w[i];
  }
  return ref + num / den;
}

struct BatchSummary {
  double estimate;
  double stderr_;
};

BatchSummary batch_means(std::span<const double> w, std::span<const double> f,
                         std::size_t n_batches) {
  const double ref = f.front();
  const std::size_t size = w.size() / n_batches;
  // Batch ratios are kept as offsets from ref so a constant integrand gives
  // a spread of exactly zero.
  std::vector<double> offsets(n_batches);
  for (std::size_t b = 0; b < n_batches; ++b) {
    offsets[b] =
        centred_ratio(w.subspan(b * size, size), f.subspan(b * size, size), ref) - ref;
  }
  double mean = 0.0;
  for (double r : offsets) mean += r;
  mean /= static_cast<double>(n_batches);
  double ss = 0.0;
  for (double r : offsets) ss += (r - mean) * (r - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n_batches - 1));
  return {centred_ratio(w, f, ref), sd / std::sqrt(static_cast<double>(n_batches))};
}

}  // namespace

std::vector<Vector> sample_euclidean_sphere(std::size_t n, std::size_t dim,
                                            std::uint64_t seed,
                                            unsigned threads) {
  if (n == 0 || dim == 0) {
    throw Error(ErrorCode::InvalidArgument, "sample count and dimension must be >= 1");
  }
  std::vector<Vector> out(n, Vector(dim));
  run_chunks(n, threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
    auto rng = chunk_generator(seed, c);
    std::normal_distribution<double> gauss;
    for (std::size_t i = begin; i < end; ++i) draw_direction(rng, gauss, out[i]);
  });
  return out;
}

double surface_weight(const NormSpec& spec, std::span<const double> u) {
  const double len = std::sqrt(dot(u, u));
  if (std::abs(len - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument,
                "surface weight is defined on the Euclidean unit sphere");
  }
  const Vector g = norm_gradient(spec, u);
  const double rho = norm_eval(spec, u);
  return std::sqrt(dot(g, g)) / std::pow(rho, static_cast<double>(spec.dim()));
}

SampleBatch pushforward_sample(const NormSpec& spec, std::size_t n,
                               std::uint64_t seed, unsigned threads) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample count must be >= 1");
  const std::size_t dim = spec.dim();
  SampleBatch batch{.points = std::vector<Vector>(n, Vector(dim)),
                    .weights = std::vector<double>(n),
                    .seed = seed,
                    .spec = spec,
                    .resampled = 0};
  std::vector<std::uint64_t> redraws((n + kSampleChunk - 1) / kSampleChunk, 0);
  run_chunks(n, threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
    auto rng = chunk_generator(seed, c);
    std::normal_distribution<double> gauss;
    Vector u(dim);
    for (std::size_t i = begin; i < end; ++i) {
      redraws[c] += draw_smooth_direction(spec, rng, gauss, u);
      batch.weights[i] = surface_weight(spec, u);
      const double rho = norm_eval(spec, u);
      for (std::size_t j = 0; j < dim; ++j) batch.points[i][j] = u[j] / rho;
    }
  });
  for (auto r : redraws) batch.resampled += r;
  return batch;
}

EstimateReport estimate_surface_average(const NormSpec& spec,
                                        const Integrand& f, std::size_t n,
                                        std::uint64_t seed,
                                        std::size_t n_batches,
                                        std::string integrand_tag,
                                        unsigned threads) {
  check_batches(n, n_batches);
  const std::size_t total = (n / n_batches) * n_batches;
  const std::size_t dim = spec.dim();
  std::vector<double> w(total);
  std::vector<double> values(total);
  std::vector<std::uint64_t> redraws((total + kSampleChunk - 1) / kSampleChunk, 0);

  run_chunks(total, threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
    auto rng = chunk_generator(seed, c);
    std::normal_distribution<double> gauss;
    Vector u(dim);
    Vector x(dim);
    for (std::size_t i = begin; i < end; ++i) {
      redraws[c] += draw_smooth_direction(spec, rng, gauss, u);
      w[i] = surface_weight(spec, u);
      const double rho = norm_eval(spec, u);
      for (std::size_t j = 0; j < dim; ++j) x[j] = u[j] / rho;
      const double v = f(x);
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::NonFinite,
                    "integrand is not finite at " + describe_point(x));
      }
      values[i] = v;
    }
  });

  const BatchSummary s = batch_means(w, values, n_batches);
  EstimateReport report{.estimate = s.estimate,
                        .stderr_ = s.stderr_,
                        .n_samples = total,
                        .n_batches = n_batches,
                        .seed = seed,
                        .spec = spec,
                        .integrand = std::move(integrand_tag)};
  for (auto r : redraws) report.resampled += r;
  report.theorem_hypothesis_violated = !spec.is_one_symmetric();
  return report;
}

double integrate_piecewise(const std::function<double(double)>& f,
                           std::span<const double> breakpoints, double tol) {
  if (!(tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "quadrature tolerance must be > 0");
  }
  if (breakpoints.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "need at least two breakpoints");
  }
  constexpr std::size_t kMaxRefinements = 12;
  constexpr int kMaxBisections = 10;
  constexpr double kRelativeFloor = 1e-15;
  // tanh-sinh clusters nodes at the segment ends, where the integrands
  // here have their kinks and algebraic endpoint singularities. Segments
  // that miss their budget are halved.
  boost::math::quadrature::tanh_sinh<double> rule(kMaxRefinements);
  double total = 0.0;
  double error = 0.0;
  std::function<void(double, double, double, int)> segment =
      [&](double a, double b, double budget, int depth) {
        // The rule stops once error <= relative * L1; convert the absolute
        // budget with a coarse pass.
        double l1 = 0.0;
        double coarse_err = 0.0;
        rule.integrate(f, a, b, 1e-3, &coarse_err, &l1);
        const double relative =
            l1 > 0.0 ? std::max(budget / l1, kRelativeFloor) : kRelativeFloor;
        double err = 0.0;
        const double value = rule.integrate(f, a, b, relative, &err);
        if (err > budget && depth < kMaxBisections) {
          const double mid = 0.5 * (a + b);
          segment(a, mid, 0.5 * budget, depth + 1);
          segment(mid, b, 0.5 * budget, depth + 1);
          return;
        }
        total += value;
        error += err;
      };
  const double per_segment = tol / static_cast<double>(breakpoints.size() - 1);
  for (std::size_t s = 0; s + 1 < breakpoints.size(); ++s) {
    segment(breakpoints[s], breakpoints[s + 1], per_segment, 0);
  }
  if (!std::isfinite(total) || error > tol) {
    std::ostringstream os;
    os << "quadrature did not reach tolerance " << tol << " (error estimate "
       << error << ", " << kMaxBisections << " bisections)";
    throw Error(ErrorCode::NoConvergence, os.str());
  }
  return total;
}

namespace {

std::vector<double> octant_breakpoints() {
  std::vector<double> bp(9);
  for (int i = 0; i <= 8; ++i) bp[i] = i * std::numbers::pi / 4.0;
  return bp;
}

void require_planar(const NormSpec& spec) {
  if (spec.dim() != 2) {
    throw Error(ErrorCode::DimensionMismatch,
                "planar quadrature needs dimension 2, got " +
                    std::to_string(spec.dim()));
  }
}

// (cos t, sin t), moved off a corner by one ulp in t if it lands on one.
// Corners are isolated, so this does not change any integral.
std::array<double, 2> planar_direction(const NormSpec& spec, double t) {
  for (;;) {
    std::array<double, 2> u{std::cos(t), std::sin(t)};
    if (spec.everywhere_smooth() || smoothness_margin(spec, u) > 0.0) return u;
    t = std::nextafter(t, 10.0);
  }
}

}  // namespace

double quadrature_average_2d(const NormSpec& spec, const Integrand& f,
                             double tol) {
  require_planar(spec);
  // On the unit circle the arc-length speed of theta -> u / norm(u) is the
  // surface weight at u.
  const auto bp = octant_breakpoints();
  const double len = perimeter_2d(spec, tol * 0.1);
  auto point = [&](double t) {
    const auto u = planar_direction(spec, t);
    const double rho = norm_eval(spec, u);
    return std::array<double, 2>{u[0] / rho, u[1] / rho};
  };
  const double ref = f(point(std::numbers::pi / 8.0));
  const double num = integrate_piecewise(
      [&](double t) {
        return weight_unchecked(spec, planar_direction(spec, t)) * (f(point(t)) - ref);
      },
      bp, tol * 0.1 * len);
  return ref + num / len;
}

double perimeter_2d(const NormSpec& spec, double tol) {
  require_planar(spec);
  return integrate_piecewise(
      [&](double t) { return weight_unchecked(spec, planar_direction(spec, t)); },
      octant_breakpoints(), tol);
}

double euclidean_sphere_area(std::size_t dim) {
  const double half = static_cast<double>(dim) / 2.0;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

EstimateReport surface_area(const NormSpec& spec, std::size_t n,
                            std::uint64_t seed, std::size_t n_batches,
                            unsigned threads) {
  check_batches(n, n_batches);
  const std::size_t total = (n / n_batches) * n_batches;
  const std::size_t dim = spec.dim();
  std::vector<double> w(total);
  std::vector<std::uint64_t> redraws((total + kSampleChunk - 1) / kSampleChunk, 0);
  run_chunks(total, threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
    auto rng = chunk_generator(seed, c);
    std::normal_distribution<double> gauss;
    Vector u(dim);
    for (std::size_t i = begin; i < end; ++i) {
      redraws[c] += draw_smooth_direction(spec, rng, gauss, u);
      w[i] = surface_weight(spec, u);
    }
  });
  const double area = euclidean_sphere_area(dim);
  // Uniform sampling: the area is the plain mean of w times |S^{N-1}|.
  const std::vector<double> ones(total, 1.0);
  const BatchSummary s = batch_means(ones, w, n_batches);
  EstimateReport report{.estimate = area * s.estimate,
                        .stderr_ = area * s.stderr_,
                        .n_samples = total,
                        .n_batches = n_batches,
                        .seed = seed,
                        .spec = spec,
                        .integrand = "surface_area"};
  for (auto r : redraws) report.resampled += r;
  report.theorem_hypothesis_violated = !spec.is_one_symmetric();
  return report;
}

}  // namespace symtrace

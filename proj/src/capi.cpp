// SPDX-License-Identifier: Apache-2.0

#include "symtrace/symtrace.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "symtrace/duality.hpp"
#include "symtrace/error.hpp"
#include "symtrace/trace_lab.hpp"

struct symtrace_norm {
  symtrace::NormSpec spec;
};

struct symtrace_matrix {
  symtrace::Matrix matrix;
};

struct symtrace_report {
  symtrace::EstimateReport report;
};

struct symtrace_report_list {
  std::vector<symtrace_report> reports;
};

namespace {

thread_local std::string g_last_error;

symtrace_status to_status(symtrace::ErrorCode code) {
  using symtrace::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return SYMTRACE_E_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return SYMTRACE_E_DIMENSION_MISMATCH;
    case ErrorCode::NonFinite: return SYMTRACE_E_NON_FINITE;
    case ErrorCode::ZeroVector: return SYMTRACE_E_ZERO_VECTOR;
    case ErrorCode::NonSmoothPoint: return SYMTRACE_E_NON_SMOOTH_POINT;
    case ErrorCode::NotOneSymmetric: return SYMTRACE_E_NOT_ONE_SYMMETRIC;
    case ErrorCode::OutOfRange: return SYMTRACE_E_OUT_OF_RANGE;
    case ErrorCode::Parse: return SYMTRACE_E_PARSE;
    case ErrorCode::NoConvergence: return SYMTRACE_E_NO_CONVERGENCE;
    case ErrorCode::Io: return SYMTRACE_E_IO;
    case ErrorCode::Overflow: return SYMTRACE_E_OVERFLOW;
  }
  return SYMTRACE_E_INTERNAL;
}

symtrace_status fail(symtrace_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs body, translating exceptions into status codes.
template <class Body>
symtrace_status guarded(Body&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const symtrace::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SYMTRACE_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SYMTRACE_E_INTERNAL, e.what());
  } catch (...) {
    return fail(SYMTRACE_E_INTERNAL, "unknown error");
  }
}

symtrace_status copy_text(const std::string& text, char* buf, size_t cap,
                          size_t* len) {
  if (len) *len = text.size();
  if (!buf || cap < text.size() + 1) {
    return fail(SYMTRACE_E_BUFFER_TOO_SMALL,
                "buffer needs " + std::to_string(text.size() + 1) + " bytes");
  }
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return SYMTRACE_OK;
}

#define SYMTRACE_REQUIRE(cond)                                              \
  do {                                                                      \
    if (!(cond)) {                                                          \
      return fail(SYMTRACE_E_INVALID_ARGUMENT, "null argument: " #cond);    \
    }                                                                       \
  } while (0)

symtrace::TraceExperimentConfig make_config(const symtrace_norm* norm,
                                            const symtrace_matrix* matrix,
                                            const symtrace_trace_config* c) {
  symtrace::TraceExperimentConfig config{.norm = norm->spec,
                                         .matrix = matrix->matrix};
  config.n_samples = c->n_samples;
  config.seed = c->seed;
  config.n_batches = c->n_batches ? c->n_batches : symtrace::kDefaultBatches;
  switch (c->method) {
    case SYMTRACE_METHOD_MONTECARLO:
      config.method = symtrace::TraceMethod::MonteCarlo;
      break;
    case SYMTRACE_METHOD_QUADRATURE2D:
      config.method = symtrace::TraceMethod::Quadrature2d;
      break;
    case SYMTRACE_METHOD_GROUPAVERAGE:
      config.method = symtrace::TraceMethod::GroupAverage;
      break;
    default:
      throw symtrace::Error(symtrace::ErrorCode::InvalidArgument,
                            "unknown method value");
  }
  config.tol = c->tol > 0.0 ? c->tol : 1e-10;
  config.threads = c->threads;
  return config;
}

}  // namespace

extern "C" {

const char* symtrace_last_error(void) { return g_last_error.c_str(); }

const char* symtrace_status_string(symtrace_status status) {
  switch (status) {
    case SYMTRACE_OK: return "ok";
    case SYMTRACE_E_INVALID_ARGUMENT: return "invalid argument";
    case SYMTRACE_E_DIMENSION_MISMATCH: return "dimension mismatch";
    case SYMTRACE_E_NON_FINITE: return "non-finite value";
    case SYMTRACE_E_ZERO_VECTOR: return "zero vector";
    case SYMTRACE_E_NON_SMOOTH_POINT: return "non-smooth point";
    case SYMTRACE_E_NOT_ONE_SYMMETRIC: return "norm is not 1-symmetric";
    case SYMTRACE_E_OUT_OF_RANGE: return "parameter out of range";
    case SYMTRACE_E_PARSE: return "parse error";
    case SYMTRACE_E_NO_CONVERGENCE: return "no convergence";
    case SYMTRACE_E_IO: return "i/o error";
    case SYMTRACE_E_OVERFLOW: return "integer overflow";
    case SYMTRACE_E_BUFFER_TOO_SMALL: return "buffer too small";
    case SYMTRACE_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

symtrace_status symtrace_norm_parse(const char* text, symtrace_norm** out) {
  if (out) *out = nullptr;
  SYMTRACE_REQUIRE(text && out);
  return guarded([&] {
    *out = new symtrace_norm{symtrace::parse_norm_spec(text)};
    return SYMTRACE_OK;
  });
}

void symtrace_norm_free(symtrace_norm* norm) { delete norm; }

size_t symtrace_norm_dim(const symtrace_norm* norm) {
  return norm ? norm->spec.dim() : 0;
}

int symtrace_norm_is_one_symmetric(const symtrace_norm* norm) {
  return norm && norm->spec.is_one_symmetric() ? 1 : 0;
}

symtrace_status symtrace_norm_format(const symtrace_norm* norm, char* buf,
                                     size_t cap, size_t* len) {
  SYMTRACE_REQUIRE(norm);
  return guarded(
      [&] { return copy_text(symtrace::format_norm_spec(norm->spec), buf, cap, len); });
}

symtrace_status symtrace_norm_eval(const symtrace_norm* norm, const double* x,
                                   size_t n, double* out) {
  SYMTRACE_REQUIRE(norm && x && out);
  return guarded([&] {
    *out = symtrace::norm_eval(norm->spec, {x, n});
    return SYMTRACE_OK;
  });
}

symtrace_status symtrace_norm_gradient(const symtrace_norm* norm,
                                       const double* x, size_t n,
                                       double* grad_out) {
  SYMTRACE_REQUIRE(norm && x && grad_out);
  return guarded([&] {
    const auto g = symtrace::norm_gradient(norm->spec, {x, n});
    std::copy(g.begin(), g.end(), grad_out);
    return SYMTRACE_OK;
  });
}

symtrace_status symtrace_dual_norm_eval(const symtrace_norm* norm,
                                        const double* f, size_t n,
                                        double* out) {
  SYMTRACE_REQUIRE(norm && f && out);
  return guarded([&] {
    *out = symtrace::dual_norm_eval(norm->spec, {f, n});
    return SYMTRACE_OK;
  });
}

symtrace_status symtrace_norming_functional(const symtrace_norm* norm,
                                            const double* x, size_t n,
                                            double* functional_out,
                                            symtrace_norming_info* info) {
  SYMTRACE_REQUIRE(norm && x && functional_out);
  return guarded([&] {
    const auto r = symtrace::norming_functional(norm->spec, {x, n});
    std::copy(r.functional.begin(), r.functional.end(), functional_out);
    if (info) {
      info->smooth = r.smooth ? 1 : 0;
      info->margin = r.margin;
      info->pairing = r.pairing;
      info->dual_norm_value = r.dual_norm_value;
    }
    return SYMTRACE_OK;
  });
}

symtrace_status symtrace_matrix_load(const char* path, symtrace_matrix** out) {
  if (out) *out = nullptr;
  SYMTRACE_REQUIRE(path && out);
  return guarded([&] {
    *out = new symtrace_matrix{symtrace::load_matrix(path).matrix};
    return SYMTRACE_OK;
  });
}

symtrace_status symtrace_matrix_create(size_t n, const double* row_major,
                                       symtrace_matrix** out) {
  if (out) *out = nullptr;
  SYMTRACE_REQUIRE(row_major && out && n > 0);
  return guarded([&] {
    std::vector<double> data(row_major, row_major + n * n);
    for (double v : data) {
      if (!std::isfinite(v)) {
        throw symtrace::Error(symtrace::ErrorCode::NonFinite,
                              "matrix has a non-finite entry");
      }
    }
    *out = new symtrace_matrix{symtrace::Matrix(n, std::move(data))};
    return SYMTRACE_OK;
  });
}

void symtrace_matrix_free(symtrace_matrix* matrix) { delete matrix; }

size_t symtrace_matrix_dim(const symtrace_matrix* matrix) {
  return matrix ? matrix->matrix.dim() : 0;
}

double symtrace_matrix_trace(const symtrace_matrix* matrix) {
  return matrix ? matrix->matrix.trace() : 0.0;
}

void symtrace_trace_config_init(symtrace_trace_config* config) {
  if (!config) return;
  config->n_samples = 1000000;
  config->seed = 0;
  config->n_batches = symtrace::kDefaultBatches;
  config->method = SYMTRACE_METHOD_MONTECARLO;
  config->tol = 1e-10;
  config->threads = 0;
}

symtrace_status symtrace_estimate_trace(const symtrace_norm* norm,
                                        const symtrace_matrix* matrix,
                                        const symtrace_trace_config* config,
                                        symtrace_report** out) {
  if (out) *out = nullptr;
  SYMTRACE_REQUIRE(norm && matrix && config && out);
  return guarded([&] {
    *out = new symtrace_report{
        symtrace::estimate_trace(make_config(norm, matrix, config))};
    return SYMTRACE_OK;
  });
}

void symtrace_report_free(symtrace_report* report) { delete report; }

double symtrace_report_estimate(const symtrace_report* report) {
  return report ? report->report.estimate : NAN;
}

double symtrace_report_stderr(const symtrace_report* report) {
  return report ? report->report.stderr_ : NAN;
}

uint64_t symtrace_report_n_samples(const symtrace_report* report) {
  return report ? report->report.n_samples : 0;
}

int symtrace_report_hypothesis_violated(const symtrace_report* report) {
  return report && report->report.theorem_hypothesis_violated ? 1 : 0;
}

symtrace_status symtrace_report_json(const symtrace_report* report, char* buf,
                                     size_t cap, size_t* len) {
  SYMTRACE_REQUIRE(report);
  return guarded(
      [&] { return copy_text(symtrace::report_to_json(report->report), buf, cap, len); });
}

symtrace_status symtrace_convergence(const symtrace_norm* norm,
                                     const symtrace_matrix* matrix,
                                     const uint64_t* schedule,
                                     size_t schedule_len,
                                     const symtrace_trace_config* config,
                                     symtrace_report_list** out) {
  if (out) *out = nullptr;
  SYMTRACE_REQUIRE(norm && matrix && schedule && config && out);
  return guarded([&] {
    const std::vector<std::size_t> steps(schedule, schedule + schedule_len);
    auto reports = symtrace::convergence_study(make_config(norm, matrix, config), steps);
    auto* list = new symtrace_report_list;
    list->reports.reserve(reports.size());
    for (auto& r : reports) list->reports.push_back({std::move(r)});
    *out = list;
    return SYMTRACE_OK;
  });
}

void symtrace_report_list_free(symtrace_report_list* list) { delete list; }

size_t symtrace_report_list_size(const symtrace_report_list* list) {
  return list ? list->reports.size() : 0;
}

const symtrace_report* symtrace_report_list_at(const symtrace_report_list* list,
                                               size_t index) {
  if (!list || index >= list->reports.size()) return nullptr;
  return &list->reports[index];
}

symtrace_status symtrace_report_list_csv(const symtrace_report_list* list,
                                         const symtrace_matrix* matrix,
                                         char* buf, size_t cap, size_t* len) {
  SYMTRACE_REQUIRE(list && matrix);
  return guarded([&] {
    std::vector<symtrace::EstimateReport> reports;
    reports.reserve(list->reports.size());
    for (const auto& r : list->reports) reports.push_back(r.report);
    return copy_text(symtrace::convergence_to_csv(reports, matrix->matrix.trace()),
                     buf, cap, len);
  });
}

symtrace_status symtrace_group_verify(size_t dim, size_t trials, uint64_t seed,
                                      size_t* mismatches,
                                      uint64_t* group_order) {
  SYMTRACE_REQUIRE(mismatches);
  return guarded([&] {
    const auto r = symtrace::group_verify(dim, trials, seed);
    *mismatches = r.mismatches;
    if (group_order) *group_order = r.group_order;
    return SYMTRACE_OK;
  });
}

symtrace_status symtrace_ellipse_average(double b, double tol, double* out) {
  SYMTRACE_REQUIRE(out);
  return guarded([&] {
    *out = symtrace::ellipse_average(b, tol);
    return SYMTRACE_OK;
  });
}

symtrace_status symtrace_ellipse_csv(const double* b_values, size_t count,
                                     double tol, char* buf, size_t cap,
                                     size_t* len) {
  SYMTRACE_REQUIRE(b_values || count == 0);
  return guarded([&] {
    const auto rows = symtrace::ellipse_counterexample({b_values, count}, tol);
    return copy_text(symtrace::ellipse_to_csv(rows), buf, cap, len);
  });
}

}  // extern "C"

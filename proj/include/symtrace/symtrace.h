/* SPDX-License-Identifier: Apache-2.0 */

/* C interface to the symtrace library. All objects are opaque handles owned
 * by the caller and released with the matching *_free function. Every call
 * that can fail returns a symtrace_status; on failure a description is
 * available from symtrace_last_error() on the same thread. Calls that
 * return a handle through an out pointer set it to NULL on failure. */

#ifndef SYMTRACE_SYMTRACE_H
#define SYMTRACE_SYMTRACE_H

#include <stddef.h>
#include <stdint.h>

#ifndef SYMTRACE_EXPORT
#define SYMTRACE_EXPORT __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum symtrace_status {
  SYMTRACE_OK = 0,
  SYMTRACE_E_INVALID_ARGUMENT = 1,
  SYMTRACE_E_DIMENSION_MISMATCH = 2,
  SYMTRACE_E_NON_FINITE = 3,
  SYMTRACE_E_ZERO_VECTOR = 4,
  SYMTRACE_E_NON_SMOOTH_POINT = 5,
  SYMTRACE_E_NOT_ONE_SYMMETRIC = 6,
  SYMTRACE_E_OUT_OF_RANGE = 7,
  SYMTRACE_E_PARSE = 8,
  SYMTRACE_E_NO_CONVERGENCE = 9,
  SYMTRACE_E_IO = 10,
  SYMTRACE_E_OVERFLOW = 11,
  SYMTRACE_E_BUFFER_TOO_SMALL = 12,
  SYMTRACE_E_INTERNAL = 99
} symtrace_status;

typedef enum symtrace_method {
  SYMTRACE_METHOD_MONTECARLO = 0,
  SYMTRACE_METHOD_QUADRATURE2D = 1,
  SYMTRACE_METHOD_GROUPAVERAGE = 2
} symtrace_method;

typedef struct symtrace_norm symtrace_norm;
typedef struct symtrace_matrix symtrace_matrix;
typedef struct symtrace_report symtrace_report;
typedef struct symtrace_report_list symtrace_report_list;

SYMTRACE_EXPORT const char* symtrace_last_error(void);
SYMTRACE_EXPORT const char* symtrace_status_string(symtrace_status status);

/* Text-producing calls use the same convention: *len receives the length
 * without the terminator; if cap is too small nothing but *len is written
 * and SYMTRACE_E_BUFFER_TOO_SMALL is returned. buf may be NULL with cap 0. */

/* ---- norms ---------------------------------------------------------- */

SYMTRACE_EXPORT symtrace_status symtrace_norm_parse(const char* text,
                                                    symtrace_norm** out);
SYMTRACE_EXPORT void symtrace_norm_free(symtrace_norm* norm);
SYMTRACE_EXPORT size_t symtrace_norm_dim(const symtrace_norm* norm);
SYMTRACE_EXPORT int symtrace_norm_is_one_symmetric(const symtrace_norm* norm);
SYMTRACE_EXPORT symtrace_status symtrace_norm_format(const symtrace_norm* norm,
                                                     char* buf, size_t cap,
                                                     size_t* len);

SYMTRACE_EXPORT symtrace_status symtrace_norm_eval(const symtrace_norm* norm,
                                                   const double* x, size_t n,
                                                   double* out);
SYMTRACE_EXPORT symtrace_status symtrace_norm_gradient(
    const symtrace_norm* norm, const double* x, size_t n, double* grad_out);
SYMTRACE_EXPORT symtrace_status symtrace_dual_norm_eval(
    const symtrace_norm* norm, const double* f, size_t n, double* out);

typedef struct symtrace_norming_info {
  int smooth;
  double margin; /* +inf for everywhere-smooth norms */
  double pairing;
  double dual_norm_value;
} symtrace_norming_info;

SYMTRACE_EXPORT symtrace_status symtrace_norming_functional(
    const symtrace_norm* norm, const double* x, size_t n,
    double* functional_out, symtrace_norming_info* info);

/* ---- matrices ------------------------------------------------------- */

/* JSON {"n": N, "rows": [[...], ...]} or CSV with N rows of N reals. */
SYMTRACE_EXPORT symtrace_status symtrace_matrix_load(const char* path,
                                                     symtrace_matrix** out);
SYMTRACE_EXPORT symtrace_status symtrace_matrix_create(size_t n,
                                                       const double* row_major,
                                                       symtrace_matrix** out);
SYMTRACE_EXPORT void symtrace_matrix_free(symtrace_matrix* matrix);
SYMTRACE_EXPORT size_t symtrace_matrix_dim(const symtrace_matrix* matrix);
SYMTRACE_EXPORT double symtrace_matrix_trace(const symtrace_matrix* matrix);

/* ---- trace estimation ---------------------------------------------- */

typedef struct symtrace_trace_config {
  uint64_t n_samples;
  uint64_t seed;
  uint64_t n_batches; /* 0 selects the default of 100 */
  symtrace_method method;
  double tol;       /* quadrature2d; 0 selects 1e-10 */
  unsigned threads; /* 0 selects the hardware concurrency */
} symtrace_trace_config;

SYMTRACE_EXPORT void symtrace_trace_config_init(symtrace_trace_config* config);

SYMTRACE_EXPORT symtrace_status symtrace_estimate_trace(
    const symtrace_norm* norm, const symtrace_matrix* matrix,
    const symtrace_trace_config* config, symtrace_report** out);

SYMTRACE_EXPORT void symtrace_report_free(symtrace_report* report);
SYMTRACE_EXPORT double symtrace_report_estimate(const symtrace_report* report);
SYMTRACE_EXPORT double symtrace_report_stderr(const symtrace_report* report);
SYMTRACE_EXPORT uint64_t symtrace_report_n_samples(const symtrace_report* report);
SYMTRACE_EXPORT int symtrace_report_hypothesis_violated(
    const symtrace_report* report);
SYMTRACE_EXPORT symtrace_status symtrace_report_json(
    const symtrace_report* report, char* buf, size_t cap, size_t* len);

/* Monte Carlo runs at each schedule entry (strictly increasing). */
SYMTRACE_EXPORT symtrace_status symtrace_convergence(
    const symtrace_norm* norm, const symtrace_matrix* matrix,
    const uint64_t* schedule, size_t schedule_len,
    const symtrace_trace_config* config, symtrace_report_list** out);
SYMTRACE_EXPORT void symtrace_report_list_free(symtrace_report_list* list);
SYMTRACE_EXPORT size_t symtrace_report_list_size(
    const symtrace_report_list* list);
SYMTRACE_EXPORT const symtrace_report* symtrace_report_list_at(
    const symtrace_report_list* list, size_t index);
/* CSV columns n,estimate,stderr,abs_error against the matrix trace. */
SYMTRACE_EXPORT symtrace_status symtrace_report_list_csv(
    const symtrace_report_list* list, const symtrace_matrix* matrix, char* buf,
    size_t cap, size_t* len);

/* ---- exact group identity and counterexample ----------------------- */

SYMTRACE_EXPORT symtrace_status symtrace_group_verify(size_t dim,
                                                      size_t trials,
                                                      uint64_t seed,
                                                      size_t* mismatches,
                                                      uint64_t* group_order);

SYMTRACE_EXPORT symtrace_status symtrace_ellipse_average(double b, double tol,
                                                         double* out);
/* CSV with columns b,average. */
SYMTRACE_EXPORT symtrace_status symtrace_ellipse_csv(const double* b_values,
                                                     size_t count, double tol,
                                                     char* buf, size_t cap,
                                                     size_t* len);

#ifdef __cplusplus
}
#endif

#endif /* SYMTRACE_SYMTRACE_H */

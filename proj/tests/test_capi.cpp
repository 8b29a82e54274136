// SPDX-License-Identifier: Apache-2.0
//
// Exercises the shared library through its C interface only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "symtrace/symtrace.h"

namespace {

std::string last_error() { return symtrace_last_error(); }

symtrace_norm* parse(const char* text) {
  symtrace_norm* norm = nullptr;
  REQUIRE(symtrace_norm_parse(text, &norm) == SYMTRACE_OK);
  REQUIRE(norm != nullptr);
  return norm;
}

symtrace_matrix* matrix(std::size_t n, const double* data) {
  symtrace_matrix* m = nullptr;
  REQUIRE(symtrace_matrix_create(n, data, &m) == SYMTRACE_OK);
  return m;
}

}  // namespace

TEST_CASE("norm handles") {
  symtrace_norm* norm = parse("lp:3:2");
  CHECK(symtrace_norm_dim(norm) == 2);
  CHECK(symtrace_norm_is_one_symmetric(norm) == 1);
  const double x[] = {1.0, -2.0};
  double value = 0.0;
  CHECK(symtrace_norm_eval(norm, x, 2, &value) == SYMTRACE_OK);
  CHECK(value == doctest::Approx(std::cbrt(9.0)).epsilon(1e-15));
  double grad[2];
  CHECK(symtrace_norm_gradient(norm, x, 2, grad) == SYMTRACE_OK);
  CHECK(grad[0] * x[0] + grad[1] * x[1] == doctest::Approx(value).epsilon(1e-14));
  double dual = 0.0;
  CHECK(symtrace_dual_norm_eval(norm, grad, 2, &dual) == SYMTRACE_OK);
  CHECK(dual == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(symtrace_norm_eval(norm, x, 3, &value) == SYMTRACE_E_DIMENSION_MISMATCH);
  CHECK_FALSE(last_error().empty());
  symtrace_norm_free(norm);
  symtrace_norm_free(nullptr);
}

TEST_CASE("norming functional info") {
  symtrace_norm* norm = parse("linf:2");
  const double corner[] = {1.0, 1.0};
  double f[2];
  symtrace_norming_info info{};
  CHECK(symtrace_norming_functional(norm, corner, 2, f, &info) == SYMTRACE_OK);
  CHECK(info.smooth == 0);
  CHECK(info.margin == 0.0);
  CHECK(f[0] == 1.0);
  CHECK(f[1] == 0.0);
  CHECK(info.pairing == 1.0);
  CHECK(info.dual_norm_value == 1.0);
  CHECK(symtrace_norm_gradient(norm, corner, 2, f) == SYMTRACE_E_NON_SMOOTH_POINT);
  symtrace_norm_free(norm);

  symtrace_norm* e = parse("euclidean:3");
  const double x[] = {0.0, 3.0, 4.0};
  double g[3];
  CHECK(symtrace_norming_functional(e, x, 3, g, &info) == SYMTRACE_OK);
  CHECK(info.smooth == 1);
  CHECK(std::isinf(info.margin));
  const double zero[] = {0.0, 0.0, 0.0};
  CHECK(symtrace_norm_gradient(e, zero, 3, g) == SYMTRACE_E_ZERO_VECTOR);
  symtrace_norm_free(e);
}

TEST_CASE("parse errors and status strings") {
  symtrace_norm* norm = reinterpret_cast<symtrace_norm*>(0x1);
  CHECK(symtrace_norm_parse("lp:0.5:3", &norm) != SYMTRACE_OK);
  CHECK(norm == nullptr);
  CHECK_FALSE(last_error().empty());
  CHECK(symtrace_norm_parse("bogus", &norm) == SYMTRACE_E_PARSE);
  CHECK(symtrace_norm_parse(nullptr, &norm) == SYMTRACE_E_INVALID_ARGUMENT);
  CHECK(symtrace_norm_parse("l1:2", nullptr) == SYMTRACE_E_INVALID_ARGUMENT);
  CHECK(std::string(symtrace_status_string(SYMTRACE_OK)).size() > 0);
  CHECK(std::string(symtrace_status_string(SYMTRACE_E_BUFFER_TOO_SMALL)).size() > 0);
  symtrace_norm* ok = parse("l1:2");
  CHECK(last_error().empty());
  symtrace_norm_free(ok);
}

TEST_CASE("two-call text convention") {
  symtrace_norm* norm = parse("wl2:1,0.5");
  CHECK(symtrace_norm_is_one_symmetric(norm) == 0);
  std::size_t len = 0;
  CHECK(symtrace_norm_format(norm, nullptr, 0, &len) == SYMTRACE_E_BUFFER_TOO_SMALL);
  CHECK(len == std::string("wl2:1,0.5").size());
  char small[4] = {'x', 'x', 'x', 'x'};
  CHECK(symtrace_norm_format(norm, small, sizeof small, &len) == SYMTRACE_E_BUFFER_TOO_SMALL);
  CHECK(small[0] == 'x');
  std::string buf(len + 1, '\0');
  CHECK(symtrace_norm_format(norm, buf.data(), buf.size(), &len) == SYMTRACE_OK);
  CHECK(std::string(buf.c_str()) == "wl2:1,0.5");
  symtrace_norm_free(norm);
}

TEST_CASE("trace estimation through handles") {
  symtrace_norm* norm = parse("l1:2");
  const double a[] = {1.0, 2.0, 3.0, 4.0};
  symtrace_matrix* m = matrix(2, a);
  CHECK(symtrace_matrix_dim(m) == 2);
  CHECK(symtrace_matrix_trace(m) == 5.0);

  symtrace_trace_config config;
  symtrace_trace_config_init(&config);
  config.n_samples = 100000;
  config.seed = 5;
  symtrace_report* report = nullptr;
  REQUIRE(symtrace_estimate_trace(norm, m, &config, &report) == SYMTRACE_OK);
  const double est = symtrace_report_estimate(report);
  const double se = symtrace_report_stderr(report);
  CHECK(std::abs(est - 5.0) <= 4 * se);
  CHECK(symtrace_report_n_samples(report) == 100000);
  CHECK(symtrace_report_hypothesis_violated(report) == 0);

  std::size_t len = 0;
  CHECK(symtrace_report_json(report, nullptr, 0, &len) == SYMTRACE_E_BUFFER_TOO_SMALL);
  std::string json(len + 1, '\0');
  CHECK(symtrace_report_json(report, json.data(), json.size(), &len) == SYMTRACE_OK);
  json.resize(len);
  CHECK(json.find("\"norm\": \"l1:2\"") != std::string::npos);
  CHECK(json.find("\"seed\": 5") != std::string::npos);
  symtrace_report_free(report);

  config.method = SYMTRACE_METHOD_QUADRATURE2D;
  REQUIRE(symtrace_estimate_trace(norm, m, &config, &report) == SYMTRACE_OK);
  CHECK(std::abs(symtrace_report_estimate(report) - 5.0) <= 1e-9);
  CHECK(symtrace_report_stderr(report) == 0.0);
  symtrace_report_free(report);

  symtrace_norm* n3 = parse("l1:3");
  CHECK(symtrace_estimate_trace(n3, m, &config, &report) == SYMTRACE_E_DIMENSION_MISMATCH);
  CHECK(report == nullptr);
  symtrace_norm_free(n3);

  symtrace_norm* wl2 = parse("wl2:1,0.5");
  config.method = SYMTRACE_METHOD_GROUPAVERAGE;
  CHECK(symtrace_estimate_trace(wl2, m, &config, &report) == SYMTRACE_E_NOT_ONE_SYMMETRIC);
  config.method = SYMTRACE_METHOD_QUADRATURE2D;
  REQUIRE(symtrace_estimate_trace(wl2, m, &config, &report) == SYMTRACE_OK);
  CHECK(symtrace_report_hypothesis_violated(report) == 1);
  symtrace_report_free(report);
  symtrace_norm_free(wl2);

  symtrace_matrix_free(m);
  symtrace_norm_free(norm);
}

TEST_CASE("convergence list") {
  symtrace_norm* norm = parse("lp:3:3");
  const double a[] = {1, 0, 2, 0, -1, 0, 3, 0, 2};
  symtrace_matrix* m = matrix(3, a);
  symtrace_trace_config config;
  symtrace_trace_config_init(&config);
  config.seed = 9;
  const std::uint64_t schedule[] = {1000, 10000, 100000};
  symtrace_report_list* list = nullptr;
  REQUIRE(symtrace_convergence(norm, m, schedule, 3, &config, &list) == SYMTRACE_OK);
  CHECK(symtrace_report_list_size(list) == 3);
  CHECK(symtrace_report_n_samples(symtrace_report_list_at(list, 2)) == 100000);
  CHECK(symtrace_report_list_at(list, 3) == nullptr);
  std::size_t len = 0;
  symtrace_report_list_csv(list, m, nullptr, 0, &len);
  std::string csv(len + 1, '\0');
  CHECK(symtrace_report_list_csv(list, m, csv.data(), csv.size(), &len) == SYMTRACE_OK);
  csv.resize(len);
  CHECK(csv.rfind("n,estimate,stderr,abs_error\n1000,", 0) == 0);
  symtrace_report_list_free(list);

  const std::uint64_t bad[] = {100, 50};
  CHECK(symtrace_convergence(norm, m, bad, 2, &config, &list) == SYMTRACE_E_INVALID_ARGUMENT);
  symtrace_matrix_free(m);
  symtrace_norm_free(norm);
}

TEST_CASE("matrix loading") {
  const auto path = std::filesystem::temp_directory_path() / "symtrace_capi.csv";
  std::ofstream(path) << "1,2\n3,4\n";
  symtrace_matrix* m = nullptr;
  REQUIRE(symtrace_matrix_load(path.c_str(), &m) == SYMTRACE_OK);
  CHECK(symtrace_matrix_trace(m) == 5.0);
  symtrace_matrix_free(m);
  std::ofstream(path) << "1,2\n3\n";
  CHECK(symtrace_matrix_load(path.c_str(), &m) == SYMTRACE_E_DIMENSION_MISMATCH);
  CHECK(symtrace_matrix_load("/nonexistent/m.csv", &m) == SYMTRACE_E_IO);
  const double bad[] = {1.0, NAN, 0.0, 1.0};
  CHECK(symtrace_matrix_create(2, bad, &m) == SYMTRACE_E_NON_FINITE);
  CHECK(symtrace_matrix_create(0, bad, &m) != SYMTRACE_OK);
}

TEST_CASE("group and ellipse entry points") {
  std::size_t mismatches = 99;
  std::uint64_t order = 0;
  CHECK(symtrace_group_verify(4, 10, 1, &mismatches, &order) == SYMTRACE_OK);
  CHECK(mismatches == 0);
  CHECK(order == 384);
  CHECK(symtrace_group_verify(9, 1, 1, &mismatches, &order) != SYMTRACE_OK);

  double avg = 0.0;
  CHECK(symtrace_ellipse_average(1.0, 1e-12, &avg) == SYMTRACE_OK);
  CHECK(std::abs(avg - 0.5) <= 1e-12);
  CHECK(symtrace_ellipse_average(2.0, 1e-12, &avg) == SYMTRACE_E_OUT_OF_RANGE);
  const double bs[] = {0.0, 1.0};
  std::size_t len = 0;
  symtrace_ellipse_csv(bs, 2, 1e-10, nullptr, 0, &len);
  std::string csv(len + 1, '\0');
  CHECK(symtrace_ellipse_csv(bs, 2, 1e-10, csv.data(), csv.size(), &len) == SYMTRACE_OK);
  csv.resize(len);
  CHECK(csv == "b,average\n0,0.33333333333333354\n1,0.49999999999999994\n");
}

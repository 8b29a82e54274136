// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end over the symtrace C API.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "symtrace/symtrace.h"

namespace {

struct CliError {
  int exit_code;
};

void check(symtrace_status status, const char* what) {
  if (status == SYMTRACE_OK) return;
  std::cerr << "symtrace: " << what << ": " << symtrace_status_string(status);
  const std::string detail = symtrace_last_error();
  if (!detail.empty()) std::cerr << ": " << detail;
  std::cerr << "\n";
  throw CliError{2};
}

// Calls a (buf, cap, len) producer twice: once to size, once to fill.
template <class Producer>
std::string fetch_text(Producer&& produce, const char* what) {
  size_t len = 0;
  symtrace_status s = produce(nullptr, 0, &len);
  if (s != SYMTRACE_E_BUFFER_TOO_SMALL) check(s, what);
  std::string out(len + 1, '\0');
  check(produce(out.data(), out.size(), &len), what);
  out.resize(len);
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "symtrace: cannot write '" << path << "'\n";
    throw CliError{2};
  }
  out << text;
}

struct NormDeleter {
  void operator()(symtrace_norm* p) const { symtrace_norm_free(p); }
};
struct MatrixDeleter {
  void operator()(symtrace_matrix* p) const { symtrace_matrix_free(p); }
};
struct ReportDeleter {
  void operator()(symtrace_report* p) const { symtrace_report_free(p); }
};
struct ReportListDeleter {
  void operator()(symtrace_report_list* p) const { symtrace_report_list_free(p); }
};

using NormPtr = std::unique_ptr<symtrace_norm, NormDeleter>;
using MatrixPtr = std::unique_ptr<symtrace_matrix, MatrixDeleter>;

NormPtr load_norm(const std::string& text) {
  symtrace_norm* norm = nullptr;
  check(symtrace_norm_parse(text.c_str(), &norm), "--norm");
  return NormPtr(norm);
}

MatrixPtr load_matrix(const std::string& path) {
  symtrace_matrix* matrix = nullptr;
  check(symtrace_matrix_load(path.c_str(), &matrix), "--matrix");
  return MatrixPtr(matrix);
}

symtrace_method method_from(const std::string& name) {
  if (name == "quadrature2d") return SYMTRACE_METHOD_QUADRATURE2D;
  if (name == "groupaverage") return SYMTRACE_METHOD_GROUPAVERAGE;
  return SYMTRACE_METHOD_MONTECARLO;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trace of a matrix as an average over the unit sphere of a "
               "normed space with a 1-symmetric basis"};
  app.require_subcommand(1);

  std::string norm_text;
  std::string matrix_path;
  std::string out_path;
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 0;
  std::uint64_t batches = 100;
  std::string method = "montecarlo";
  unsigned threads = 0;

  auto* trace = app.add_subcommand("trace-estimate", "Estimate tr A from the sphere integral");
  trace->add_option("--norm", norm_text, "Norm spec, e.g. lp:3:4")->required();
  trace->add_option("--matrix", matrix_path, "Matrix file (JSON or CSV)")->required();
  trace->add_option("--samples", samples, "Monte Carlo sample count")->required();
  trace->add_option("--seed", seed, "RNG seed")->required();
  trace->add_option("--batches", batches, "Batch count for the standard error");
  trace->add_option("--method", method, "Estimator")
      ->check(CLI::IsMember({"montecarlo", "quadrature2d", "groupaverage"}));
  trace->add_option("--out", out_path, "Write report JSON here instead of stdout");
  trace->add_option("--threads", threads, "Worker threads (0 = all cores)");

  std::size_t dim = 0;
  std::size_t trials = 20;
  auto* group = app.add_subcommand("group-verify",
                                   "Exact check of the signed-permutation conjugation sum");
  group->add_option("--dim", dim, "Dimension N (1..8)")->required();
  group->add_option("--trials", trials, "Random integer matrices to check");
  group->add_option("--seed", seed, "RNG seed for the matrices");

  std::vector<double> b_values;
  double tol = 1e-10;
  auto* ellipse = app.add_subcommand("ellipse", "Arc-length average of x^2 on ellipses");
  ellipse->add_option("--b", b_values, "Comma-separated b values in [0, 1]")
      ->required()
      ->delimiter(',');
  ellipse->add_option("--tol", tol, "Quadrature tolerance");
  ellipse->add_option("--out", out_path, "Write CSV here instead of stdout");

  std::vector<std::uint64_t> schedule;
  auto* conv = app.add_subcommand("convergence", "Monte Carlo error across sample counts");
  conv->add_option("--norm", norm_text, "Norm spec")->required();
  conv->add_option("--matrix", matrix_path, "Matrix file (JSON or CSV)")->required();
  conv->add_option("--schedule", schedule, "Comma-separated increasing sample counts")
      ->required()
      ->delimiter(',');
  conv->add_option("--seed", seed, "RNG seed")->required();
  conv->add_option("--out", out_path, "CSV output path")->required();
  conv->add_option("--batches", batches, "Batch count for the standard error");
  conv->add_option("--threads", threads, "Worker threads (0 = all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*trace) {
      auto norm = load_norm(norm_text);
      auto matrix = load_matrix(matrix_path);
      symtrace_trace_config config;
      symtrace_trace_config_init(&config);
      config.n_samples = samples;
      config.seed = seed;
      config.n_batches = batches;
      config.method = method_from(method);
      config.threads = threads;
      symtrace_report* raw = nullptr;
      check(symtrace_estimate_trace(norm.get(), matrix.get(), &config, &raw),
            "trace-estimate");
      std::unique_ptr<symtrace_report, ReportDeleter> report(raw);
      if (symtrace_report_hypothesis_violated(report.get())) {
        std::cerr << "symtrace: warning: norm is not 1-symmetric; the trace "
                     "formula is not expected to hold\n";
      }
      emit(fetch_text(
               [&](char* b, size_t c, size_t* l) {
                 return symtrace_report_json(report.get(), b, c, l);
               },
               "report"),
           out_path);
    } else if (*group) {
      size_t mismatches = 0;
      uint64_t order = 0;
      check(symtrace_group_verify(dim, trials, seed, &mismatches, &order),
            "group-verify");
      std::printf("dim=%zu order=%llu trials=%zu mismatches=%zu %s\n", dim,
                  static_cast<unsigned long long>(order), trials, mismatches,
                  mismatches == 0 ? "OK" : "FAIL");
      return mismatches == 0 ? 0 : 1;
    } else if (*ellipse) {
      emit(fetch_text(
               [&](char* b, size_t c, size_t* l) {
                 return symtrace_ellipse_csv(b_values.data(), b_values.size(), tol,
                                             b, c, l);
               },
               "ellipse"),
           out_path);
    } else if (*conv) {
      auto norm = load_norm(norm_text);
      auto matrix = load_matrix(matrix_path);
      symtrace_trace_config config;
      symtrace_trace_config_init(&config);
      config.seed = seed;
      config.n_batches = batches;
      config.threads = threads;
      symtrace_report_list* raw = nullptr;
      check(symtrace_convergence(norm.get(), matrix.get(), schedule.data(),
                                 schedule.size(), &config, &raw),
            "convergence");
      std::unique_ptr<symtrace_report_list, ReportListDeleter> list(raw);
      emit(fetch_text(
               [&](char* b, size_t c, size_t* l) {
                 return symtrace_report_list_csv(list.get(), matrix.get(), b, c, l);
               },
               "convergence"),
           out_path);
    }
  } catch (const CliError& e) {
    return e.exit_code;
  }
  return 0;
}

// Copyright 2026 The wsharp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wsharp/wsharp.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "wsharp/problem.hpp"

struct wsharp_problem {
  wsharp::ProblemInstance instance;
};

struct wsharp_report {
  wsharp::CertificateReport report;
  std::optional<wsharp::GridTrace> trace;
};

struct wsharp_polytope {
  wsharp::Polytope poly;
};

namespace {

thread_local std::string g_last_error;

wsharp_status status_of(wsharp::ErrorCode c) {
  using wsharp::ErrorCode;
  switch (c) {
    case ErrorCode::InvalidArgument:
      return WSHARP_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch:
      return WSHARP_ERR_DIMENSION_MISMATCH;
    case ErrorCode::Parse:
      return WSHARP_ERR_PARSE;
    case ErrorCode::Schema:
      return WSHARP_ERR_SCHEMA;
    case ErrorCode::Precondition:
      return WSHARP_ERR_PRECONDITION;
    case ErrorCode::Convergence:
      return WSHARP_ERR_CONVERGENCE;
    case ErrorCode::NotQuasidifferentiable:
      return WSHARP_ERR_NOT_QUASIDIFFERENTIABLE;
    case ErrorCode::Io:
      return WSHARP_ERR_IO;
  }
  return WSHARP_ERR_INTERNAL;
}

// Runs fn, mapping exceptions to status codes and the thread's last error.
template <class Fn>
wsharp_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return WSHARP_OK;
  } catch (const wsharp::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return WSHARP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return WSHARP_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return WSHARP_ERR_INTERNAL;
  }
}

wsharp_status null_arg(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return WSHARP_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* wsharp_version(void) { return "1.0.0"; }

const char* wsharp_last_error(void) { return g_last_error.c_str(); }

const char* wsharp_status_name(wsharp_status s) {
  switch (s) {
    case WSHARP_OK:
      return "ok";
    case WSHARP_ERR_INVALID_ARGUMENT:
      return "invalid-argument";
    case WSHARP_ERR_DIMENSION_MISMATCH:
      return "dimension-mismatch";
    case WSHARP_ERR_PARSE:
      return "parse";
    case WSHARP_ERR_SCHEMA:
      return "schema";
    case WSHARP_ERR_PRECONDITION:
      return "precondition";
    case WSHARP_ERR_CONVERGENCE:
      return "convergence";
    case WSHARP_ERR_NOT_QUASIDIFFERENTIABLE:
      return "not-quasidifferentiable";
    case WSHARP_ERR_IO:
      return "io";
    case WSHARP_ERR_INTERNAL:
      return "internal";
  }
  return "unknown";
}

void wsharp_string_free(char* s) { std::free(s); }

wsharp_status wsharp_problem_load(const char* path, wsharp_problem** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new wsharp_problem{wsharp::parse_problem(path)}; });
}

wsharp_status wsharp_problem_parse(const char* json_text, wsharp_problem** out) {
  if (!json_text) return null_arg("json_text");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded(
      [&] { *out = new wsharp_problem{wsharp::parse_problem_text(json_text)}; });
}

wsharp_status wsharp_problem_to_json(const wsharp_problem* p, char** out) {
  if (!p) return null_arg("problem");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    *out = dup_string(wsharp::problem_to_json(p->instance).dump(2) + "\n");
  });
}

int wsharp_problem_dim(const wsharp_problem* p) {
  return p ? p->instance.dim() : 0;
}

void wsharp_problem_free(wsharp_problem* p) { delete p; }

void wsharp_run_options_init(wsharp_run_options* opt) {
  if (!opt) return;
  std::memset(opt, 0, sizeof *opt);
}

int wsharp_command_known(const char* command) {
  return command && wsharp::is_known_command(command) ? 1 : 0;
}

wsharp_status wsharp_run(const wsharp_problem* p, const char* command,
                         const wsharp_run_options* opt, wsharp_report** out) {
  if (!p) return null_arg("problem");
  if (!command) return null_arg("command");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    wsharp::RunOptions ro;
    bool collect = false;
    if (opt) {
      if (opt->has_sigma) ro.sigma = opt->sigma;
      if (opt->has_lambda) ro.lambda = opt->lambda;
      if (opt->has_seed) ro.seed = opt->seed;
      if (opt->exhauster_path) ro.exhauster_path = std::string(opt->exhauster_path);
      ro.timing = opt->timing != 0;
      collect = opt->collect_trace != 0;
    }
    auto holder = std::make_unique<wsharp_report>();
    wsharp::GridTrace trace;
    holder->report =
        wsharp::execute(command, p->instance, ro, collect ? &trace : nullptr);
    if (collect) holder->trace = std::move(trace);
    *out = holder.release();
  });
}

wsharp_status wsharp_report_render(const wsharp_report* r, const char* format,
                                   char** out) {
  if (!r) return null_arg("report");
  if (!out) return null_arg("out");
  *out = nullptr;
  const std::string fmt = format ? format : "text";
  if (fmt != "json" && fmt != "text") {
    g_last_error = "unknown format \"" + fmt + "\"";
    return WSHARP_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    *out = dup_string(fmt == "json" ? wsharp::report_to_json(r->report)
                                    : wsharp::report_to_text(r->report));
  });
}

wsharp_status wsharp_report_parse(const char* json_text, wsharp_report** out) {
  if (!json_text) return null_arg("json_text");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto holder = std::make_unique<wsharp_report>();
    holder->report = wsharp::report_from_json(json_text);
    *out = holder.release();
  });
}

wsharp_status wsharp_report_csv(const wsharp_report* r, char** out) {
  if (!r) return null_arg("report");
  if (!out) return null_arg("out");
  *out = nullptr;
  if (!r->trace) {
    g_last_error = "report has no grid trace (set collect_trace)";
    return WSHARP_ERR_PRECONDITION;
  }
  return guarded([&] {
    *out = dup_string(wsharp::trace_to_csv(*r->trace, r->report.dim));
  });
}

wsharp_verdict wsharp_report_verdict(const wsharp_report* r) {
  if (!r) return WSHARP_INCONCLUSIVE;
  return static_cast<wsharp_verdict>(wsharp::exit_code(r->report.verdict));
}

int wsharp_report_equal(const wsharp_report* a, const wsharp_report* b) {
  if (!a || !b) return 0;
  return a->report == b->report ? 1 : 0;
}

void wsharp_report_free(wsharp_report* r) { delete r; }

wsharp_status wsharp_polytope_create(int dim, size_t count,
                                     const double* coords,
                                     wsharp_polytope** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  if (!coords) return null_arg("coords");
  if (dim < 1 || count < 1) {
    g_last_error = "polytope needs dim >= 1 and at least one vertex";
    return WSHARP_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    std::vector<wsharp::Vector> pts;
    for (size_t i = 0; i < count; ++i) {
      pts.push_back(Eigen::Map<const Eigen::VectorXd>(coords + i * dim, dim));
    }
    *out = new wsharp_polytope{wsharp::Polytope(std::move(pts))};
  });
}

wsharp_status wsharp_polytope_load(const char* path, wsharp_polytope** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    *out = new wsharp_polytope{
        wsharp::polytope_from_json(wsharp::read_json_file(path), "")};
  });
}

int wsharp_polytope_dim(const wsharp_polytope* p) { return p ? p->poly.dim() : 0; }

size_t wsharp_polytope_size(const wsharp_polytope* p) {
  return p ? p->poly.size() : 0;
}

wsharp_status wsharp_polytope_vertices(const wsharp_polytope* p, double* buf,
                                       size_t len) {
  if (!p) return null_arg("polytope");
  if (!buf) return null_arg("buf");
  const size_t dim = static_cast<size_t>(p->poly.dim());
  if (len < p->poly.size() * dim) {
    g_last_error = "buffer too small";
    return WSHARP_ERR_INVALID_ARGUMENT;
  }
  for (size_t i = 0; i < p->poly.size(); ++i) {
    const auto& v = p->poly.vertex(i);
    for (size_t k = 0; k < dim; ++k) buf[i * dim + k] = v[static_cast<Eigen::Index>(k)];
  }
  return WSHARP_OK;
}

wsharp_status wsharp_polytope_min_norm(const wsharp_polytope* p,
                                       double* distance) {
  if (!p) return null_arg("polytope");
  if (!distance) return null_arg("distance");
  return guarded([&] { *distance = wsharp::min_norm_point(p->poly).distance; });
}

void wsharp_polytope_free(wsharp_polytope* p) { delete p; }

wsharp_status wsharp_demyanov(const wsharp_polytope* a,
                              const wsharp_polytope* b, int force_sampled,
                              int sample_count, uint64_t seed,
                              wsharp_polytope** out, char** backend) {
  if (!a || !b) return null_arg("polytope");
  if (!out) return null_arg("out");
  *out = nullptr;
  if (backend) *backend = nullptr;
  return guarded([&] {
    wsharp::DemyanovOptions opt;
    opt.force_sampled = force_sampled != 0;
    if (sample_count > 0) opt.sample_count = sample_count;
    opt.seed = seed;
    auto r = wsharp::demyanov_diff(a->poly, b->poly, opt);
    auto holder = std::make_unique<wsharp_polytope>(wsharp_polytope{std::move(r.set)});
    if (backend) *backend = dup_string(wsharp::to_string(r.backend));
    *out = holder.release();
  });
}

wsharp_status wsharp_demyanov_files(const char* a_path, const char* b_path,
                                    int force_sampled, uint64_t seed,
                                    char** out) {
  if (!a_path || !b_path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    wsharp::DemyanovOptions opt;
    opt.force_sampled = force_sampled != 0;
    opt.seed = seed;
    *out = dup_string(wsharp::demyanov_files(a_path, b_path, opt));
  });
}

}  // extern "C"

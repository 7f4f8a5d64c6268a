/*
 * Copyright 2026 The wsharp Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the wsharp library.
 *
 * Objects are opaque handles released by their *_free function. Functions
 * return a wsharp_status; on failure wsharp_last_error() describes the
 * problem for the calling thread. Strings returned through char** are
 * owned by the caller and released with wsharp_string_free.
 */
#ifndef WSHARP_WSHARP_H
#define WSHARP_WSHARP_H

#include <stddef.h>
#include <stdint.h>

#if defined(WSHARP_BUILDING_LIBRARY)
#define WSHARP_API __attribute__((visibility("default")))
#else
#define WSHARP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wsharp_status {
  WSHARP_OK = 0,
  WSHARP_ERR_INVALID_ARGUMENT = 1,
  WSHARP_ERR_DIMENSION_MISMATCH = 2,
  WSHARP_ERR_PARSE = 3,
  WSHARP_ERR_SCHEMA = 4,
  WSHARP_ERR_PRECONDITION = 5,
  WSHARP_ERR_CONVERGENCE = 6,
  WSHARP_ERR_NOT_QUASIDIFFERENTIABLE = 7,
  WSHARP_ERR_IO = 8,
  WSHARP_ERR_INTERNAL = 9
} wsharp_status;

typedef enum wsharp_verdict {
  WSHARP_CERTIFIED = 0,
  WSHARP_REFUTED = 2,
  WSHARP_INCONCLUSIVE = 3
} wsharp_verdict;

typedef struct wsharp_problem wsharp_problem;
typedef struct wsharp_report wsharp_report;
typedef struct wsharp_polytope wsharp_polytope;

typedef struct wsharp_run_options {
  int has_sigma;
  double sigma;
  int has_lambda;
  double lambda;
  int has_seed;
  uint64_t seed;
  /* Record wall-clock time in the report (breaks byte determinism). */
  int timing;
  /* Keep the per-point grid trace for wsharp_report_csv. */
  int collect_trace;
  /* Optional exhauster override file; NULL when unused. */
  const char* exhauster_path;
} wsharp_run_options;

WSHARP_API const char* wsharp_version(void);
WSHARP_API const char* wsharp_last_error(void);
WSHARP_API const char* wsharp_status_name(wsharp_status s);
WSHARP_API void wsharp_string_free(char* s);

WSHARP_API wsharp_status wsharp_problem_load(const char* path,
                                             wsharp_problem** out);
WSHARP_API wsharp_status wsharp_problem_parse(const char* json_text,
                                              wsharp_problem** out);
WSHARP_API wsharp_status wsharp_problem_to_json(const wsharp_problem* p,
                                                char** out);
WSHARP_API int wsharp_problem_dim(const wsharp_problem* p);
WSHARP_API void wsharp_problem_free(wsharp_problem* p);

WSHARP_API void wsharp_run_options_init(wsharp_run_options* opt);
WSHARP_API int wsharp_command_known(const char* command);
WSHARP_API wsharp_status wsharp_run(const wsharp_problem* p,
                                    const char* command,
                                    const wsharp_run_options* opt,
                                    wsharp_report** out);

/* format: "json" or "text". */
WSHARP_API wsharp_status wsharp_report_render(const wsharp_report* r,
                                              const char* format, char** out);
WSHARP_API wsharp_status wsharp_report_parse(const char* json_text,
                                             wsharp_report** out);
WSHARP_API wsharp_status wsharp_report_csv(const wsharp_report* r, char** out);
WSHARP_API wsharp_verdict wsharp_report_verdict(const wsharp_report* r);
WSHARP_API int wsharp_report_equal(const wsharp_report* a,
                                   const wsharp_report* b);
WSHARP_API void wsharp_report_free(wsharp_report* r);

/* coords holds count points of dim doubles each, row-major. */
WSHARP_API wsharp_status wsharp_polytope_create(int dim, size_t count,
                                                const double* coords,
                                                wsharp_polytope** out);
WSHARP_API wsharp_status wsharp_polytope_load(const char* path,
                                              wsharp_polytope** out);
WSHARP_API int wsharp_polytope_dim(const wsharp_polytope* p);
WSHARP_API size_t wsharp_polytope_size(const wsharp_polytope* p);
/* Copies the vertices (size * dim doubles) into buf. */
WSHARP_API wsharp_status wsharp_polytope_vertices(const wsharp_polytope* p,
                                                  double* buf, size_t len);
WSHARP_API wsharp_status wsharp_polytope_min_norm(const wsharp_polytope* p,
                                                  double* distance);
WSHARP_API void wsharp_polytope_free(wsharp_polytope* p);

/* Demyanov difference a (-) b. sample_count <= 0 keeps the default. */
WSHARP_API wsharp_status wsharp_demyanov(const wsharp_polytope* a,
                                         const wsharp_polytope* b,
                                         int force_sampled, int sample_count,
                                         uint64_t seed, wsharp_polytope** out,
                                         char** backend);
/* Reads two polytope files and renders the difference as JSON. */
WSHARP_API wsharp_status wsharp_demyanov_files(const char* a_path,
                                               const char* b_path,
                                               int force_sampled,
                                               uint64_t seed, char** out);

#ifdef __cplusplus
}
#endif

#endif /* WSHARP_WSHARP_H */

// Copyright 2026 The qmetric Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to qmetric: opaque handles, status codes, and a thread-local
 * last-error string. Every function returning qm_status leaves outputs
 * untouched on failure. */
#ifndef QMETRIC_QMETRIC_H
#define QMETRIC_QMETRIC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QM_API __declspec(dllexport)
#else
#define QM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qm_status {
  QM_OK = 0,
  QM_ERR_USAGE = 1,       /* bad argument, config or element */
  QM_ERR_CAP = 2,         /* ball cap exceeded */
  QM_ERR_UNSUPPORTED = 3, /* operation undefined for this group */
  QM_ERR_OVERFLOW = 4,    /* checked integer arithmetic overflowed */
  QM_ERR_INVARIANT = 5,   /* a proven statement failed on concrete data */
  QM_ERR_INTERNAL = 6
} qm_status;

/* Exit codes returned by qm_run_execute. */
enum {
  QM_EXIT_OK = 0,
  QM_EXIT_USAGE = 1,
  QM_EXIT_RIGOROUS_FAILURE = 2,
  QM_EXIT_INCONCLUSIVE = 3
};

QM_API const char* qm_version(void);

/* Message for the last failing call on this thread; "" if none. */
QM_API const char* qm_last_error(void);

/* ---- length functions ------------------------------------------------- */

typedef struct qm_length qm_length;

/* group_json uses the config "group" schema; length_json may be NULL for the
 * family default. */
QM_API qm_status qm_length_create(const char* group_json, const char* length_json, qm_length** out);
QM_API void qm_length_destroy(qm_length* L);
QM_API qm_status qm_length_set_ball_cap(qm_length* L, uint64_t cap);
QM_API qm_status qm_length_of(const qm_length* L, const int64_t* code, size_t code_len, double* out);
QM_API qm_status qm_ball_size(const qm_length* L, double r, uint64_t* out);

/* ---- group-algebra elements ------------------------------------------- */

typedef struct qm_element qm_element;

QM_API qm_status qm_element_create(const qm_length* L, qm_element** out);
QM_API void qm_element_destroy(qm_element* f);
/* Adds c * delta_x, where x is given by its encoding. */
QM_API qm_status qm_element_add(qm_element* f, const int64_t* code, size_t code_len, double re, double im);
QM_API qm_status qm_element_support_size(const qm_element* f, size_t* out);

/* Exact J_D. */
QM_API qm_status qm_jd(const qm_element* f, double* out);
/* Weighted l1 norm sum |f(x)| L(x), an upper bound for L_D. */
QM_API qm_status qm_weighted_l1(const qm_element* f, double* out);
/* Truncation bracket for L_D over radii 1, 2, ..., r_max. */
QM_API qm_status qm_ld_bracket(const qm_element* f, double r_max, double* lower, double* upper);

/* ---- experiment runs --------------------------------------------------- */

typedef struct qm_run qm_run;

QM_API qm_status qm_run_create(const char* command, const char* config_path, qm_run** out);
QM_API void qm_run_destroy(qm_run* run);
QM_API qm_status qm_run_set_out_dir(qm_run* run, const char* dir);
QM_API qm_status qm_run_set_seed(qm_run* run, uint64_t seed);
QM_API qm_status qm_run_set_ball_cap(qm_run* run, uint64_t cap);
QM_API qm_status qm_run_set_threads(qm_run* run, int threads);
/* Runs once; *exit_code receives one of the QM_EXIT_* values. */
QM_API qm_status qm_run_execute(qm_run* run, int* exit_code);
/* Valid until the run is destroyed or executed again. */
QM_API const char* qm_run_message(const qm_run* run);
QM_API const char* qm_run_report(const qm_run* run);
QM_API size_t qm_run_citation_count(const qm_run* run);
QM_API const char* qm_run_citation(const qm_run* run, size_t i);

#ifdef __cplusplus
}
#endif

#endif /* QMETRIC_QMETRIC_H */

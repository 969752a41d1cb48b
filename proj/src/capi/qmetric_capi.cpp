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

#include "qmetric/qmetric.h"

#include <algorithm>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "app/config.hpp"
#include "app/experiment.hpp"
#include "core/errors.hpp"
#include "core/growth.hpp"
#include "core/seminorm.hpp"

struct qm_length {
  qmetric::LengthFunction L;
};

struct qm_element {
  qmetric::LengthFunction L;
  qmetric::AlgebraElement f;
};

struct qm_run {
  qmetric::RunRequest request;
  qmetric::RunOutcome outcome;
};

namespace {

thread_local std::string last_error;

qm_status fail(qm_status s, const std::string& what) {
  last_error = what;
  return s;
}

// Maps whatever the core throws onto a status code.
template <class Fn>
qm_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return QM_OK;
  } catch (const qmetric::UsageError& e) {
    return fail(QM_ERR_USAGE, e.what());
  } catch (const qmetric::CapExceeded& e) {
    return fail(QM_ERR_CAP, e.what());
  } catch (const qmetric::UnsupportedError& e) {
    return fail(QM_ERR_UNSUPPORTED, e.what());
  } catch (const qmetric::OverflowError& e) {
    return fail(QM_ERR_OVERFLOW, e.what());
  } catch (const qmetric::InvariantViolation& e) {
    return fail(QM_ERR_INVARIANT, e.citation() + ": " + e.what());
  } catch (const std::bad_alloc&) {
    return fail(QM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QM_ERR_INTERNAL, "unknown error");
  }
}

qm_status null_arg(const char* name) { return fail(QM_ERR_USAGE, std::string(name) + " is NULL"); }

qmetric::Element element_of(const int64_t* code, size_t n) {
  if (n > 0 && code == nullptr) throw qmetric::UsageError("code is NULL");
  return qmetric::Element(std::vector<std::int64_t>(code, code + n));
}

}  // namespace

extern "C" {

const char* qm_version(void) { return "1.0.0"; }

const char* qm_last_error(void) { return last_error.c_str(); }

qm_status qm_length_create(const char* group_json, const char* length_json, qm_length** out) {
  if (!group_json) return null_arg("group_json");
  if (!out) return null_arg("out");
  return guarded([&] {
    std::string text = std::string("{\"group\":") + group_json;
    if (length_json) text += std::string(",\"length\":") + length_json;
    text += "}";
    const qmetric::ExperimentConfig cfg = qmetric::parse_config(text);
    *out = new qm_length{qmetric::make_length(cfg.group)};
  });
}

void qm_length_destroy(qm_length* L) { delete L; }

qm_status qm_length_set_ball_cap(qm_length* L, uint64_t cap) {
  if (!L) return null_arg("L");
  if (cap == 0) return fail(QM_ERR_USAGE, "ball cap must be >= 1");
  return guarded([&] { L->L.set_ball_cap(static_cast<std::size_t>(cap)); });
}

qm_status qm_length_of(const qm_length* L, const int64_t* code, size_t code_len, double* out) {
  if (!L) return null_arg("L");
  if (!out) return null_arg("out");
  return guarded([&] {
    const qmetric::Element x = element_of(code, code_len);
    L->L.group().validate(x);
    *out = L->L.length(x);
  });
}

qm_status qm_ball_size(const qm_length* L, double r, uint64_t* out) {
  if (!L) return null_arg("L");
  if (!out) return null_arg("out");
  return guarded([&] { *out = L->L.ball_count(r); });
}

qm_status qm_element_create(const qm_length* L, qm_element** out) {
  if (!L) return null_arg("L");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new qm_element{L->L, {}}; });
}

void qm_element_destroy(qm_element* f) { delete f; }

qm_status qm_element_add(qm_element* f, const int64_t* code, size_t code_len, double re, double im) {
  if (!f) return null_arg("f");
  return guarded([&] {
    const qmetric::Element x = element_of(code, code_len);
    f->L.group().validate(x);
    f->f.add(x, qmetric::Complex(re, im));
  });
}

qm_status qm_element_support_size(const qm_element* f, size_t* out) {
  if (!f) return null_arg("f");
  if (!out) return null_arg("out");
  *out = f->f.terms().size();
  last_error.clear();
  return QM_OK;
}

qm_status qm_jd(const qm_element* f, double* out) {
  if (!f) return null_arg("f");
  if (!out) return null_arg("out");
  return guarded([&] { *out = qmetric::jd_exact(f->L, f->f).value; });
}

qm_status qm_weighted_l1(const qm_element* f, double* out) {
  if (!f) return null_arg("f");
  if (!out) return null_arg("out");
  return guarded([&] { *out = qmetric::weighted_l1(f->L, f->f); });
}

qm_status qm_ld_bracket(const qm_element* f, double r_max, double* lower, double* upper) {
  if (!f) return null_arg("f");
  if (!lower || !upper) return null_arg("lower/upper");
  return guarded([&] {
    const qmetric::SeminormEstimate est =
        qmetric::lipnorm_estimate(f->L, f->f, qmetric::linear_schedule(1.0, std::max(1.0, r_max), 1.0));
    *lower = est.lower;
    *upper = est.upper;
  });
}

qm_status qm_run_create(const char* command, const char* config_path, qm_run** out) {
  if (!command) return null_arg("command");
  if (!config_path) return null_arg("config_path");
  if (!out) return null_arg("out");
  return guarded([&] {
    auto run = std::make_unique<qm_run>();
    run->request.command = command;
    run->request.config_path = config_path;
    *out = run.release();
  });
}

void qm_run_destroy(qm_run* run) { delete run; }

qm_status qm_run_set_out_dir(qm_run* run, const char* dir) {
  if (!run) return null_arg("run");
  if (!dir) return null_arg("dir");
  run->request.out_dir = dir;
  return QM_OK;
}

qm_status qm_run_set_seed(qm_run* run, uint64_t seed) {
  if (!run) return null_arg("run");
  run->request.seed = seed;
  return QM_OK;
}

qm_status qm_run_set_ball_cap(qm_run* run, uint64_t cap) {
  if (!run) return null_arg("run");
  if (cap == 0) return fail(QM_ERR_USAGE, "ball cap must be >= 1");
  run->request.ball_cap = static_cast<std::size_t>(cap);
  return QM_OK;
}

qm_status qm_run_set_threads(qm_run* run, int threads) {
  if (!run) return null_arg("run");
  if (threads < 1) return fail(QM_ERR_USAGE, "threads must be >= 1");
  run->request.threads = threads;
  return QM_OK;
}

qm_status qm_run_execute(qm_run* run, int* exit_code) {
  if (!run) return null_arg("run");
  if (!exit_code) return null_arg("exit_code");
  return guarded([&] {
    run->outcome = qmetric::run_experiment(run->request);
    *exit_code = run->outcome.exit_code;
  });
}

const char* qm_run_message(const qm_run* run) { return run ? run->outcome.message.c_str() : ""; }

const char* qm_run_report(const qm_run* run) { return run ? run->outcome.report.c_str() : ""; }

size_t qm_run_citation_count(const qm_run* run) { return run ? run->outcome.citations.size() : 0; }

const char* qm_run_citation(const qm_run* run, size_t i) {
  if (!run || i >= run->outcome.citations.size()) return nullptr;
  return run->outcome.citations[i].c_str();
}

}  // extern "C"

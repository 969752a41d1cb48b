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

#include "app/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "app/io.hpp"
#include "core/cutoff.hpp"
#include "core/errors.hpp"
#include "core/growth.hpp"
#include "core/seminorm.hpp"
#include "core/state_metric.hpp"
#include "core/verify.hpp"

namespace qmetric {

namespace {

constexpr const char* kVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Helpers

Json element_json(const AlgebraElement& f) {
  Json arr = Json::array();
  for (const auto& [x, c] : f.terms()) arr.push_back({{"x", x.code}, {"re", c.real()}, {"im", c.imag()}});
  return arr;
}

Json state_json(const State& s) {
  switch (s.kind) {
    case StateKind::trace: return {{"kind", "trace"}};
    case StateKind::vector: return {{"kind", "vector"}, {"xi", element_json(s.xi)}};
    case StateKind::mixture: {
      Json parts = Json::array();
      for (const auto& p : s.parts) parts.push_back(state_json(p));
      return {{"kind", "mixture"}, {"weights", s.weights}, {"parts", parts}};
    }
  }
  return nullptr;
}

Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json record_json(const InequalityRecord& r) {
  return {{"name", r.name},          {"citation", r.citation},       {"lhs", r.lhs},
          {"lhs_cert", to_string(r.lhs_cert)}, {"rhs", r.rhs},        {"rhs_cert", to_string(r.rhs_cert)},
          {"margin", r.margin},      {"status", to_string(r.status)}, {"rigorous", r.rigorous},
          {"strict", r.strict},      {"detail", r.detail}};
}

CsvTable record_table() {
  return CsvTable({"element", "name", "citation", "lhs", "lhs_cert", "rhs", "rhs_cert", "margin", "status",
                   "rigorous", "detail"});
}

void record_row(CsvTable& t, std::size_t element, const InequalityRecord& r) {
  t.row()
      .cell(static_cast<std::uint64_t>(element))
      .cell(r.name)
      .cell(r.citation)
      .cell(r.lhs)
      .cell(to_string(r.lhs_cert))
      .cell(r.rhs)
      .cell(to_string(r.rhs_cert))
      .cell(r.margin)
      .cell(to_string(r.status))
      .cell(r.rigorous)
      .cell(r.detail);
}

// Outcome bookkeeping shared by every command.
struct Tally {
  std::vector<std::string> citations;
  std::size_t rigorous_failures = 0;
  std::size_t soft_failures = 0;
  std::size_t inconclusive = 0;
  std::vector<std::string> notes;

  void note(const std::string& n) {
    if (notes.size() < 50) notes.push_back(n);
  }
  void rigorous_fail(const std::string& citation, const std::string& what) {
    ++rigorous_failures;
    if (std::find(citations.begin(), citations.end(), citation) == citations.end()) citations.push_back(citation);
    note("rigorous failure [" + citation + "]: " + what);
  }
  void soft_fail(const std::string& what) {
    ++soft_failures;
    note("tolerance-based failure: " + what);
  }
  void unsettled(const std::string& what) {
    ++inconclusive;
    note("inconclusive: " + what);
  }
  void absorb(const InequalityRecord& r, const std::string& where) {
    if (r.status == RecordStatus::fail) {
      if (r.rigorous) rigorous_fail(r.citation, where + r.name + " " + r.detail);
      else soft_fail(where + r.name + " " + r.detail);
    } else if (r.status == RecordStatus::inconclusive) {
      unsettled(where + r.name + " " + r.detail);
    }
  }
  int exit_code() const {
    if (rigorous_failures) return kExitRigorous;
    if (soft_failures || inconclusive) return kExitInconclusive;
    return kExitOk;
  }
};

// Runs fn(i) for i < n on up to `threads` workers; results must be stored by
// index so output order never depends on scheduling.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, threads)), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = n;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct Run {
  const ExperimentConfig& cfg;
  LengthFunction L;
  std::uint64_t seed;
  int threads;
  Tolerance tol;
  Tally tally;
  std::vector<std::pair<std::string, std::string>> files;
  Json payload = Json::object();
};

std::vector<AlgebraElement> gather(Run& run, const std::vector<RawElement>& raw,
                                   const std::optional<CorpusOptions>& corpus) {
  std::vector<AlgebraElement> out;
  for (const auto& r : raw) out.push_back(materialize(run.L.group(), r));
  if (corpus) {
    auto more = random_corpus(run.L, *corpus, run.seed);
    out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
  }
  return out;
}

Json corpus_json(const std::optional<CorpusOptions>& c, std::uint64_t seed) {
  if (!c) return nullptr;
  return {{"generator", "mt19937_64"}, {"seed", seed},         {"size", c->size},
          {"support_radius", c->support_radius}, {"max_atoms", c->max_atoms}, {"identity", c->allow_identity}};
}

double max_len(const LengthFunction& L, const std::vector<AlgebraElement>& fs) {
  double m = 0.0;
  for (const auto& f : fs) m = std::max(m, max_length(L, f));
  return m;
}

// ---------------------------------------------------------------------------
// Scale family shared by decompose, verify and covering-demo

struct FamilyChoice {
  ScaleFamily fam;
  int N = 2;
  std::optional<double> epsilon;
};

FamilyChoice choose_family(Run& run, const FamilySpec& spec, double support_len, bool materialize) {
  const double R = std::ldexp(1.0, spec.K);
  // smallest n whose cutoff g_n lies beyond every support element
  int n_cover = 1;
  while (std::pow(R, n_cover) - std::pow(R, n_cover - 1) < support_len && n_cover < 60) ++n_cover;

  auto n_max_for = [&](int N) { return std::max(2 * N + 2, n_cover + 2); };
  int N = spec.N.value_or(2);
  double C = spec.C.value_or(1.0);
  for (int round = 0; round < 8; ++round) {
    if (!spec.C) C = std::max(C, observed_doubling(run.L, std::pow(R, n_max_for(N) + 1)).ratio);
    ScaleFamily probe = build_scale_family(run.L, spec.K, 1, C, false);
    const int next = spec.epsilon ? choose_N(probe, *spec.epsilon) : N;
    if (next == N && round > 0) break;
    N = next;
  }
  FamilyChoice fc{build_scale_family(run.L, spec.K, n_max_for(N), C, materialize), N, spec.epsilon};
  if (fc.fam.validated_hi <= 0.0) run.tally.unsettled("doubling constant could not be checked within the ball cap");
  return fc;
}

Json family_json(const FamilyChoice& fc) {
  const ScaleFamily& f = fc.fam;
  std::size_t materialized = 0;
  for (const auto& g : f.g) materialized += g.has_value();
  return {{"K", f.K},
          {"R", f.R},
          {"C", f.C},
          {"C1", f.C1},
          {"C2", f.C2},
          {"C3", f.C3},
          {"C4", f.C4},
          {"n_max", f.n_max},
          {"materialized_cutoffs", materialized},
          {"doubling_validated_on", {f.validated_lo, f.validated_hi}},
          {"observed_ratio", f.observed_ratio},
          {"observed_at", f.observed_at},
          {"N", fc.N},
          {"epsilon", opt_json(fc.epsilon)},
          {"epsilon_floor", 4.0 * std::pow(f.R, -2.0 * fc.N) * std::max(f.C1, f.C4)}};
}

// ---------------------------------------------------------------------------
// growth

void run_growth(Run& run) {
  GrowthSpec spec;
  if (run.cfg.growth) spec = *run.cfg.growth;
  else spec.radii = linear_schedule(1, 32, 1);
  GrowthOptions opts;
  opts.fit_lo = spec.fit_lo;
  opts.fit_hi = spec.fit_hi;
  const GrowthReport rep = growth_table(run.L, spec.radii, opts);

  CsvTable growth({"r", "size", "ratio", "exponent"});
  CsvTable balls({"r", "size", "new_elements"});
  Json rows = Json::array();
  std::optional<std::uint64_t> prev;
  for (const auto& row : rep.rows) {
    growth.row().cell(row.r).cell(row.size).cell(row.ratio).cell(row.exponent);
    std::optional<std::uint64_t> fresh;
    if (row.size) fresh = *row.size - prev.value_or(0);
    balls.row().cell(row.r).cell(row.size).cell(fresh);
    prev = row.size;
    rows.push_back({{"r", row.r},
                    {"size", row.size ? Json(*row.size) : Json(nullptr)},
                    {"log_size", row.log_size},
                    {"ratio", opt_json(row.ratio)},
                    {"exponent", opt_json(row.exponent)}});
  }
  Json verdicts = Json::array();
  for (const auto& v : rep.verdicts) {
    verdicts.push_back({{"property", to_string(v.property)},
                        {"status", to_string(v.status)},
                        {"witness_r", opt_json(v.witness_r)},
                        {"constant", v.constant},
                        {"reason", v.reason}});
  }
  Json& p = run.payload;
  p["radii"] = spec.radii;
  p["rows"] = rows;
  p["fitted_degree"] = rep.fitted_degree;
  p["max_ratio"] = rep.max_ratio;
  p["max_ratio_r"] = rep.max_ratio_r;
  p["min_scaled_size"] = rep.min_scaled_size;
  p["max_scaled_size"] = rep.max_scaled_size;
  p["verdicts"] = verdicts;
  p["truncated"] = rep.truncated;
  p["truncation_reason"] = rep.truncation_reason;
  if (rep.truncated) run.tally.unsettled("growth table truncated: " + rep.truncation_reason);

  if (spec.oscillation_tail) {
    try {
      const OscillationEstimate osc = oscillation_probe(run.L, spec.radii, *spec.oscillation_tail);
      p["oscillation"] = {{"limsup", osc.limsup}, {"liminf", osc.liminf}, {"tail_fraction", *spec.oscillation_tail}};
    } catch (const CapExceeded& e) {
      p["oscillation"] = nullptr;
      run.tally.unsettled(std::string("oscillation probe: ") + e.what());
    }
  }
  if (spec.chain_s) {
    const double s = *spec.chain_s, r = *spec.chain_r, C = *spec.chain_C;
    try {
      const ChainCheck cc = doubling_chain_check(run.L, s, r, C);
      p["chain"] = {{"s", s}, {"r", r}, {"C", C}, {"pass", cc.pass}, {"log_lhs", cc.log_lhs}, {"log_rhs", cc.log_rhs}};
      if (!cc.pass) {
        // only a genuine violation when C really bounds the doubling ratio on [s, r]
        const DoublingMax dm = max_doubling_ratio(run.L, s, std::max(s, r / 2));
        if (dm.ratio <= C) run.tally.rigorous_fail("bnded", "doubling chain fails with a valid constant");
        else run.tally.note("doubling chain fails because C is below the observed ratio " + format_double(dm.ratio));
      }
    } catch (const CapExceeded& e) {
      p["chain"] = nullptr;
      run.tally.unsettled(std::string("doubling chain: ") + e.what());
    }
  }
  run.files.emplace_back("growth.csv", growth.str());
  run.files.emplace_back("balls.csv", balls.str());
}

// ---------------------------------------------------------------------------
// seminorm

std::vector<double> usable_radii(const LengthFunction& L, const std::vector<double>& radii) {
  std::vector<double> out;
  for (double r : radii) {
    try {
      L.ball_count(r);
    } catch (const CapExceeded&) {
      break;
    }
    out.push_back(r);
  }
  return out;
}

void run_seminorm(Run& run) {
  const SeminormSpec& spec = *run.cfg.seminorm;
  const std::vector<AlgebraElement> fs = gather(run, spec.elements, spec.corpus);
  struct Item {
    Json json;
    std::vector<TracePoint> trace;
    std::vector<InequalityRecord> records;
    std::string note;
    std::optional<std::string> dump;
  };
  std::vector<Item> items(fs.size());
  parallel_for(fs.size(), run.threads, [&](std::size_t i) {
    const AlgebraElement& f = fs[i];
    Item& it = items[i];
    const double m = max_length(run.L, f);
    const double W = weighted_l1(run.L, f);
    Json j = {{"index", i}, {"f", element_json(f)}, {"max_length", m}, {"weighted_l1", W}};
    try {
      const JdResult jr = jd_exact(run.L, f);
      const SeminormEstimate je = jd_seminorm(run.L, f);
      j["jd"] = {{"value", je.value},       {"certificate", to_string(je.certificate)},
                 {"witness_r", opt_json(je.witness_r)}, {"piece_lo", opt_json(je.piece_lo)},
                 {"attained", je.attained}, {"pieces", jr.pieces}};
      it.records.push_back(compare("jd-le-weighted-l1", "control", je.value, Side::exact, W, Side::upper_bound, run.tol));
      if (spec.dump_matrices && jr.argmax) {
        TruncatedOperator T;
        T.provenance = Provenance::localized_block;
        T.rows = jr.argmax->rows;
        T.cols = jr.argmax->cols;
        T.matrix = jr.argmax->block;
        std::ostringstream os;
        write_dense(os, T);
        it.dump = os.str();
      }

      std::vector<double> radii =
          spec.radii ? *spec.radii : linear_schedule(1.0, std::max(4.0, std::ceil(2.0 * m) + 2.0), 1.0);
      const std::vector<double> usable = usable_radii(run.L, radii);
      if (usable.size() < radii.size()) it.note = "L_D trace stopped at the ball cap";
      if (!usable.empty()) {
        const SeminormEstimate le = lipnorm_estimate(run.L, f, usable);
        it.trace = le.trace;
        j["ld"] = {{"lower", le.lower},
                   {"upper", le.upper},
                   {"certificate", to_string(le.certificate)},
                   {"stabilized", le.stabilized},
                   {"last_radius", usable.back()}};
        it.records.push_back(compare("ld-bracket", "ineq", le.lower, Side::lower_bound, le.upper, Side::upper_bound, run.tol));
        if (le.stabilized) {
          InequalityRecord r = compare("jd-le-ld", "control", je.value, Side::exact, le.lower, Side::stabilized,
                                       Tolerance{1e-6, 0.0});
          it.records.push_back(r);
        }
      } else {
        j["ld"] = nullptr;
      }
    } catch (const CapExceeded& e) {
      it.note = std::string("ball cap: ") + e.what();
      j["jd"] = nullptr;
    }
    Json recs = Json::array();
    for (const auto& r : it.records) recs.push_back(record_json(r));
    j["records"] = recs;
    it.json = j;
  });

  CsvTable trace({"element", "r", "lower", "upper"});
  CsvTable summary({"element", "max_length", "weighted_l1", "jd", "jd_certificate", "ld_lower", "ld_upper"});
  CsvTable records = record_table();
  Json list = Json::array();
  for (std::size_t i = 0; i < items.size(); ++i) {
    Item& it = items[i];
    for (const auto& t : it.trace) trace.row().cell(static_cast<std::uint64_t>(i)).cell(t.r).cell(t.lower).cell(t.upper);
    const Json& j = it.json;
    summary.row()
        .cell(static_cast<std::uint64_t>(i))
        .cell(j["max_length"].get<double>())
        .cell(j["weighted_l1"].get<double>());
    if (j["jd"].is_null()) summary.cell("").cell("");
    else summary.cell(j["jd"]["value"].get<double>()).cell(j["jd"]["certificate"].get<std::string>());
    if (!j.contains("ld") || j["ld"].is_null()) summary.cell("").cell("");
    else summary.cell(j["ld"]["lower"].get<double>()).cell(j["ld"]["upper"].get<double>());
    for (const auto& r : it.records) {
      record_row(records, i, r);
      run.tally.absorb(r, "element " + std::to_string(i) + ": ");
    }
    if (!it.note.empty()) {
      if (j["jd"].is_null()) run.tally.unsettled("element " + std::to_string(i) + ": " + it.note);
      else run.tally.note("element " + std::to_string(i) + ": " + it.note);
    }
    if (it.dump) run.files.emplace_back("jd_block_" + std::to_string(i) + ".txt", *it.dump);
    list.push_back(std::move(it.json));
  }
  run.payload["corpus"] = corpus_json(spec.corpus, run.seed);
  run.payload["elements"] = list;
  run.files.emplace_back("seminorm_trace.csv", trace.str());
  run.files.emplace_back("seminorms.csv", summary.str());
  run.files.emplace_back("records.csv", records.str());
}

// ---------------------------------------------------------------------------
// decompose

struct DecompItem {
  Json json;
  std::vector<InequalityRecord> records;
};

DecompItem decompose_one(const LengthFunction& L, const FamilyChoice& fc, const AlgebraElement& f,
                         std::size_t trunc, const Tolerance& tol) {
  const ScaleFamily& fam = fc.fam;
  const Decomposition d = sharp_flat_decompose(f, fam, fc.N);
  const double J = jd_exact(L, f).value;
  const double Jflat = jd_exact(L, d.flat).value;
  const double m = std::max(max_length(L, f), L.min_positive_length());
  const double rho = truncation_radius(L, m, trunc);
  const double sharp_lower = lambda_norm_lower(L, d.sharp, rho);
  const double RN = std::pow(fam.R, -2.0 * fc.N);
  const double flat_factor = 1.0 + fam.C2 + 4.0 * fam.C4;

  DecompItem it;
  const std::string pN = "N=" + std::to_string(fc.N);
  it.records.push_back(compare("flat-support", "assembly", d.support_ok ? 0.0 : 1.0, Side::exact, 0.0, Side::exact, tol));
  it.records.back().detail = pN + ", support radius " + format_double(d.support_radius);
  it.records.push_back(compare("p-gap", "support", d.p_gap_ok ? 0.0 : 1.0, Side::exact, 0.0, Side::exact, tol));
  it.records.push_back(compare("q-plateau", "support", d.q_plateau_ok ? 0.0 : 1.0, Side::exact, 0.0, Side::exact, tol));
  it.records.push_back(compare("split-identity", "assembly", d.max_drift, Side::exact,
                               1e-12 * std::max(1.0, f.max_abs()), Side::exact, tol));
  it.records.push_back(compare("flat-jd", "assembly", Jflat, Side::exact, flat_factor * J, Side::exact, tol));
  it.records.push_back(compare("sharp-norm", "assembly", sharp_lower, Side::lower_bound,
                               2.0 * (fam.C1 + fam.C4) * RN * J, Side::exact, tol));
  if (fc.epsilon) {
    it.records.push_back(compare("sharp-le-epsilon", "assembly", sharp_lower, Side::lower_bound, *fc.epsilon * J,
                                 Side::exact, tol));
  }
  Json recs = Json::array();
  for (const auto& r : it.records) recs.push_back(record_json(r));
  it.json = {{"jd", J},
             {"jd_flat", Jflat},
             {"flat_bound", flat_factor * J},
             {"support_radius", d.support_radius},
             {"flat_max_length", max_length(L, d.flat)},
             {"support_ok", d.support_ok},
             {"p_gap_ok", d.p_gap_ok},
             {"q_plateau_ok", d.q_plateau_ok},
             {"max_drift", d.max_drift},
             {"bands", d.bands},
             {"support_sizes",
              {{"f", f.terms().size()}, {"p", d.p.terms().size()}, {"rho", d.rho.terms().size()},
               {"flat", d.flat.terms().size()}, {"sharp", d.sharp.terms().size()}}},
             {"sharp_norm_lower", sharp_lower},
             {"truncation_radius", rho},
             {"records", recs}};
  return it;
}

void run_decompose(Run& run) {
  const DecomposeSpec& spec = *run.cfg.decompose;
  std::vector<AlgebraElement> fs = gather(run, spec.elements, spec.corpus);
  if (spec.normalize_jd) {
    for (auto& f : fs) {
      const double J = jd_exact(run.L, f).value;
      if (J > 0.0) f = (1.0 / J) * f;
    }
  }
  const FamilyChoice fc = choose_family(run, spec.family, max_len(run.L, fs), true);
  std::vector<DecompItem> items(fs.size());
  parallel_for(fs.size(), run.threads, [&](std::size_t i) {
    items[i] = decompose_one(run.L, fc, fs[i], spec.truncation_elements, run.tol);
  });
  CsvTable table({"element", "N", "jd", "jd_flat", "flat_bound", "support_radius", "flat_max_length", "support_ok",
                  "sharp_norm_lower", "max_drift"});
  CsvTable records = record_table();
  Json list = Json::array();
  for (std::size_t i = 0; i < items.size(); ++i) {
    Json& j = items[i].json;
    table.row()
        .cell(static_cast<std::uint64_t>(i))
        .cell(fc.N)
        .cell(j["jd"].get<double>())
        .cell(j["jd_flat"].get<double>())
        .cell(j["flat_bound"].get<double>())
        .cell(j["support_radius"].get<double>())
        .cell(j["flat_max_length"].get<double>())
        .cell(j["support_ok"].get<bool>())
        .cell(j["sharp_norm_lower"].get<double>())
        .cell(j["max_drift"].get<double>());
    for (const auto& r : items[i].records) {
      record_row(records, i, r);
      run.tally.absorb(r, "element " + std::to_string(i) + ": ");
    }
    Json entry = {{"index", i}, {"f", element_json(fs[i])}};
    entry.update(j);
    list.push_back(std::move(entry));
  }
  run.payload["family"] = family_json(fc);
  run.payload["corpus"] = corpus_json(spec.corpus, run.seed);
  run.payload["normalize_jd"] = spec.normalize_jd;
  run.payload["elements"] = list;
  run.files.emplace_back("decomposition.csv", table.str());
  run.files.emplace_back("records.csv", records.str());
}

// ---------------------------------------------------------------------------
// verify

void run_verify(Run& run) {
  const VerifySpec& spec = *run.cfg.verify;
  const std::vector<AlgebraElement> fs = gather(run, spec.elements, spec.corpus);
  const FamilyChoice fc = choose_family(run, spec.family, max_len(run.L, fs), true);
  VerifyOptions opts;
  opts.truncation_elements = spec.truncation_elements;
  opts.tol = run.tol;
  std::vector<InequalityReport> reps(fs.size());
  parallel_for(fs.size(), run.threads, [&](std::size_t i) { reps[i] = verify_inequalities(fs[i], fc.fam, fc.N, opts); });

  CsvTable records = record_table();
  Json list = Json::array();
  std::size_t total = 0, pass = 0, fail = 0, inconclusive = 0;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    Json recs = Json::array();
    for (const auto& r : reps[i].records) {
      record_row(records, i, r);
      recs.push_back(record_json(r));
      run.tally.absorb(r, "element " + std::to_string(i) + ": ");
      ++total;
      pass += r.status == RecordStatus::pass;
      fail += r.status == RecordStatus::fail;
      inconclusive += r.status == RecordStatus::inconclusive;
    }
    list.push_back({{"index", i}, {"f", element_json(fs[i])}, {"records", recs}});
  }
  run.payload["family"] = family_json(fc);
  run.payload["corpus"] = corpus_json(spec.corpus, run.seed);
  run.payload["summary"] = {{"elements", fs.size()},
                            {"records", total},
                            {"pass", pass},
                            {"fail", fail},
                            {"inconclusive", inconclusive},
                            {"rigorous_failures", run.tally.rigorous_failures},
                            {"failed_citations", run.tally.citations}};
  run.payload["elements"] = list;
  run.files.emplace_back("records.csv", records.str());
}

// ---------------------------------------------------------------------------
// metric

void run_metric(Run& run) {
  const MetricSpec& spec = *run.cfg.metric;
  const Group& G = run.L.group();
  std::vector<std::pair<State, State>> pairs;
  for (const auto& [a, b] : spec.pairs) pairs.emplace_back(materialize(G, a), materialize(G, b));
  if (spec.random_pairs) {
    CorpusRng rng(run.seed);
    const RandomPairs& rp = *spec.random_pairs;
    for (std::size_t i = 0; i < rp.count; ++i) {
      State mu = State::vector(random_unit_vector(run.L, rp.support_radius, rp.atoms, rng));
      State nu = i % 2 == 0 ? State::trace()
                            : State::vector(random_unit_vector(run.L, rp.support_radius, rp.atoms, rng));
      pairs.emplace_back(std::move(mu), std::move(nu));
    }
  }
  std::vector<MetricConstraint> kinds;
  if (spec.l1) kinds.push_back(MetricConstraint::l1);
  if (spec.jd) kinds.push_back(MetricConstraint::jd);
  AscentOptions opts;
  opts.max_iterations = spec.max_iterations;
  opts.step = spec.step;

  struct Item {
    MetricBound atom;
    std::vector<MetricBound> bounds;
    std::vector<FeasibilityAudit> audits;
  };
  std::vector<Item> items(pairs.size());
  parallel_for(pairs.size(), run.threads, [&](std::size_t i) {
    Item& it = items[i];
    it.atom = atom_metric_lower_bound(run.L, pairs[i].first, pairs[i].second, spec.radius);
    for (MetricConstraint c : kinds) {
      it.bounds.push_back(metric_ascent(run.L, pairs[i].first, pairs[i].second, spec.radius, c, opts));
      it.audits.push_back(audit_feasibility(run.L, it.bounds.back()));
    }
  });

  CsvTable table({"pair", "constraint", "radius", "atom_bound", "bound", "f_support", "iterations", "flagged",
                  "audit_ok", "constraint_value"});
  CsvTable records = record_table();
  Json list = Json::array();
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Item& it = items[i];
    Json results = Json::array();
    std::vector<InequalityRecord> recs;
    for (std::size_t k = 0; k < it.bounds.size(); ++k) {
      const MetricBound& mb = it.bounds[k];
      const FeasibilityAudit& au = it.audits[k];
      const std::string c = to_string(mb.constraint);
      table.row()
          .cell(static_cast<std::uint64_t>(i))
          .cell(c)
          .cell(mb.radius)
          .cell(it.atom.value)
          .cell(mb.value)
          .cell(static_cast<std::uint64_t>(mb.f.terms().size()))
          .cell(mb.iterations)
          .cell(mb.flagged)
          .cell(au.ok)
          .cell(au.constraint_value);
      recs.push_back(compare("ascent-ge-atom-" + c, "metric", it.atom.value, Side::exact, mb.value, Side::exact, run.tol));
      InequalityRecord feas = compare("feasible-" + c, "metric", au.constraint_value, Side::exact, 1.0, Side::exact, run.tol);
      if (!au.ok) {
        feas.status = RecordStatus::fail;
        feas.detail = "f(e) = " + format_double(au.identity_coeff) + ", hermitian defect " + format_double(au.hermitian_defect);
      }
      recs.push_back(feas);
      // a capped ascent still returns a certified lower bound; only its optimality is open
      if (mb.flagged) run.tally.note("pair " + std::to_string(i) + ": " + c + " ascent hit the iteration cap");
      results.push_back({{"constraint", c},
                         {"radius", mb.radius},
                         {"bound", mb.value},
                         {"f_support", mb.f.terms().size()},
                         {"f", element_json(mb.f)},
                         {"iterations", mb.iterations},
                         {"flagged", mb.flagged},
                         {"audit", {{"ok", au.ok}, {"constraint_value", au.constraint_value}}}});
    }
    if (it.bounds.size() == 2) {
      recs.push_back(compare("dominance", "metric", it.bounds[0].value, Side::exact, it.bounds[1].value, Side::exact, run.tol));
    }
    Json jrecs = Json::array();
    for (const auto& r : recs) {
      record_row(records, i, r);
      jrecs.push_back(record_json(r));
      run.tally.absorb(r, "pair " + std::to_string(i) + ": ");
    }
    list.push_back({{"mu", state_json(pairs[i].first)},
                    {"nu", state_json(pairs[i].second)},
                    {"atom_bound", it.atom.value},
                    {"atom_witness", it.atom.value > 0.0 ? Json(it.atom.witness.code) : Json(nullptr)},
                    {"results", results},
                    {"records", jrecs}});
  }
  run.payload["bound_kind"] = "lower bounds only";
  run.payload["radius"] = spec.radius;
  run.payload["pairs"] = list;
  run.files.emplace_back("metric.csv", table.str());
  run.files.emplace_back("records.csv", records.str());
}

// ---------------------------------------------------------------------------
// covering-demo

void run_covering(Run& run) {
  const CoveringSpec& spec = *run.cfg.covering;
  std::vector<AlgebraElement> fs = random_corpus(run.L, spec.corpus, run.seed);
  for (auto& f : fs) f = (1.0 / jd_exact(run.L, f).value) * f;
  FamilySpec fspec = spec.family;
  if (fspec.N) fspec.epsilon.reset();
  FamilyChoice fc = choose_family(run, fspec, max_len(run.L, fs), true);
  fc.epsilon = spec.epsilon;
  const ScaleFamily& fam = fc.fam;
  const double flat_factor = 1.0 + fam.C2 + 4.0 * fam.C4;
  const double eps_floor = 4.0 * std::pow(fam.R, -2.0 * fc.N) * std::max(fam.C1, fam.C4);
  const double support_radius = fam.scale(2 * fc.N) + fam.scale(2 * fc.N - 1);
  const BallPtr S = run.L.ball(support_radius);

  std::vector<Decomposition> ds(fs.size());
  std::vector<double> jflat(fs.size()), sharp(fs.size());
  parallel_for(fs.size(), run.threads, [&](std::size_t i) {
    ds[i] = sharp_flat_decompose(fs[i], fam, fc.N);
    jflat[i] = jd_exact(run.L, ds[i].flat).value;
    const double m = std::max(max_length(run.L, fs[i]), run.L.min_positive_length());
    sharp[i] = lambda_norm_lower(run.L, ds[i].sharp, truncation_radius(run.L, m, spec.truncation_elements));
  });

  CsvTable records = record_table();
  CsvTable table({"element", "jd_flat", "flat_support", "flat_max_length", "box_ratio", "sharp_norm_lower", "center",
                  "nearest_center", "distance_upper"});
  // box: |f_flat(x)| <= 2 J_D(f_flat) / L(x) <= 2 (1 + C2 + 4 C4) / L(x) on S \ {e}
  double box_ratio_max = 0.0;
  std::vector<double> box_ratio(fs.size(), 0.0);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    std::vector<InequalityRecord> recs;
    double outside = 0.0, worst = 0.0;
    for (const auto& [x, c] : ds[i].flat.terms()) {
      if (!S->contains(x)) outside += 1.0;
      const double l = run.L.length(x);
      if (l > 0.0) worst = std::max(worst, std::abs(c) * l / (2.0 * jflat[i]));
      else outside += 1.0;  // f(e) = 0 throughout, so e never carries mass
    }
    box_ratio[i] = worst * jflat[i] / flat_factor;
    box_ratio_max = std::max(box_ratio_max, box_ratio[i]);
    recs.push_back(compare("flat-support", "assembly", outside, Side::exact, 0.0, Side::exact, run.tol));
    recs.push_back(compare("coordinate-box", "control", worst, Side::exact, 1.0, Side::exact, run.tol));
    recs.push_back(compare("flat-jd", "assembly", jflat[i], Side::exact, flat_factor, Side::exact, run.tol));
    recs.push_back(compare("sharp-norm", "assembly", sharp[i], Side::lower_bound,
                           2.0 * (fam.C1 + fam.C4) * std::pow(fam.R, -2.0 * fc.N), Side::exact, run.tol));
    recs.push_back(compare("sharp-le-epsilon", "assembly", sharp[i], Side::lower_bound, spec.epsilon, Side::exact, run.tol));
    if (spec.epsilon < eps_floor) {
      // below the guaranteed level for this N the check is empirical only
      recs.back().rigorous = false;
      recs.back().detail = "epsilon below the guaranteed level " + format_double(eps_floor);
    }
    for (auto& r : recs) {
      record_row(records, i, r);
      run.tally.absorb(r, "element " + std::to_string(i) + ": ");
    }
  }

  // greedy net; l1 distance bounds the operator norm from above, so every
  // point lies in an operator-norm ball of radius epsilon about a center
  std::vector<std::size_t> centers;
  std::vector<std::size_t> nearest(fs.size());
  std::vector<double> dist(fs.size(), 0.0);
  double diameter = 0.0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) diameter = std::max(diameter, (ds[i].flat - ds[j].flat).norm1());
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = i;
    for (std::size_t c : centers) {
      const double d = (ds[i].flat - ds[c].flat).norm1();
      if (d < best) {
        best = d;
        arg = c;
      }
    }
    if (best <= spec.epsilon) {
      nearest[i] = arg;
      dist[i] = best;
    } else {
      centers.push_back(i);
      nearest[i] = i;
    }
  }
  for (std::size_t i = 0; i < fs.size(); ++i) {
    table.row()
        .cell(static_cast<std::uint64_t>(i))
        .cell(jflat[i])
        .cell(static_cast<std::uint64_t>(ds[i].flat.terms().size()))
        .cell(max_length(run.L, ds[i].flat))
        .cell(box_ratio[i])
        .cell(sharp[i])
        .cell(nearest[i] == i)
        .cell(static_cast<std::uint64_t>(nearest[i]))
        .cell(dist[i]);
  }
  Json& p = run.payload;
  p["family"] = family_json(fc);
  p["corpus"] = corpus_json(spec.corpus, run.seed);
  p["normalization"] = "J_D(f) = 1, f(e) = 0";
  p["support_radius"] = support_radius;
  p["support_size"] = S->size();
  p["box"] = {{"dimension", S->size() - 1},
              {"coordinate_bound", "2 (1 + C2 + 4 C4) / L(x)"},
              {"flat_jd_bound", flat_factor},
              {"max_fill", box_ratio_max}};
  p["net"] = {{"epsilon", spec.epsilon},
              {"distance", "l1 upper bound on the operator norm"},
              {"size", centers.size()},
              {"centers", centers},
              {"diameter_upper", diameter}};
  run.files.emplace_back("covering.csv", table.str());
  run.files.emplace_back("records.csv", records.str());
}

// ---------------------------------------------------------------------------

std::string status_message(const Tally& t, int code) {
  std::ostringstream os;
  switch (code) {
    case kExitOk: os << "ok"; break;
    case kExitRigorous: {
      os << "rigorous inequality failure: ";
      for (std::size_t i = 0; i < t.citations.size(); ++i) os << (i ? ", " : "") << t.citations[i];
      break;
    }
    default:
      os << "inconclusive: " << t.inconclusive << " unsettled, " << t.soft_failures << " tolerance-based failures";
  }
  return os.str();
}

RunOutcome usage(const std::string& why) {
  RunOutcome out;
  out.exit_code = kExitUsage;
  out.message = "usage error: " + why;
  return out;
}

}  // namespace

RunOutcome run_experiment_text(const RunRequest& request, const std::string& config_text) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::optional<Command> command = parse_command(request.command);
  if (!command) return usage("unknown command '" + request.command + "'");

  ExperimentConfig cfg;
  std::optional<LengthFunction> L;
  try {
    cfg = parse_config(config_text);
    if (cfg.command && *cfg.command != *command) {
      return usage("config is for '" + to_string(*cfg.command) + "' but the command is '" + request.command + "'");
    }
    L = make_length(cfg.group);
  } catch (const UsageError& e) {
    return usage(e.what());
  } catch (const UnsupportedError& e) {
    return usage(e.what());
  } catch (const std::exception& e) {
    return usage(e.what());
  }
  const bool has_section = (*command == Command::growth) || (*command == Command::verify) ||
                           (*command == Command::seminorm && cfg.seminorm) ||
                           (*command == Command::decompose && cfg.decompose) ||
                           (*command == Command::metric && cfg.metric) ||
                           (*command == Command::covering_demo && cfg.covering);
  if (!has_section) return usage("config has no section for '" + request.command + "'");
  if (*command == Command::verify && !cfg.verify) cfg.verify = VerifySpec{FamilySpec{}, {}, CorpusOptions{}, 400};
  if (*command == Command::covering_demo && !cfg.covering) return usage("config has no covering section");

  const std::uint64_t seed = request.seed.value_or(cfg.seed);
  const std::size_t cap = request.ball_cap.value_or(cfg.ball_cap);
  const int threads = request.threads.value_or(cfg.threads);
  if (cap < 1) return usage("ball cap must be >= 1");
  if (threads < 1) return usage("threads must be >= 1");
  L->set_ball_cap(cap);

  Run run{cfg, *L, seed, threads, Tolerance{cfg.tol_abs, cfg.tol_rel}, {}, {}, Json::object()};
  std::optional<std::string> fatal;
  try {
    switch (*command) {
      case Command::growth: run_growth(run); break;
      case Command::seminorm: run_seminorm(run); break;
      case Command::decompose: run_decompose(run); break;
      case Command::verify: run_verify(run); break;
      case Command::metric: run_metric(run); break;
      case Command::covering_demo: run_covering(run); break;
    }
  } catch (const UsageError& e) {
    return usage(e.what());
  } catch (const UnsupportedError& e) {
    return usage(e.what());
  } catch (const InvariantViolation& e) {
    run.tally.rigorous_fail(e.citation(), e.what());
    fatal = e.what();
  } catch (const CapExceeded& e) {
    run.tally.unsettled(e.what());
    fatal = e.what();
  } catch (const OverflowError& e) {
    run.tally.unsettled(e.what());
    fatal = e.what();
  }
  if (fatal) run.files.clear();

  RunOutcome out;
  out.exit_code = run.tally.exit_code();
  out.message = status_message(run.tally, out.exit_code);
  out.citations = run.tally.citations;

  Json overrides = Json::object();
  if (request.seed) overrides["seed"] = *request.seed;
  if (request.ball_cap) overrides["ball_cap"] = *request.ball_cap;
  if (request.threads) overrides["threads"] = *request.threads;

  Json report;
  report["tool"] = "qmetric";
  report["version"] = kVersion;
  report["command"] = request.command;
  report["config_hash"] = git_blob_sha1(config_text);
  report["config"] = cfg.echo;
  report["overrides"] = overrides;
  report["seed"] = seed;
  report["ball_cap"] = cap;
  report["group"] = L->group().describe();
  report["length"] = L->describe();
  report["payload"] = run.payload;
  report["status"] = {{"exit_code", out.exit_code},
                      {"message", out.message},
                      {"citations", run.tally.citations},
                      {"rigorous_failures", run.tally.rigorous_failures},
                      {"tolerance_failures", run.tally.soft_failures},
                      {"inconclusive", run.tally.inconclusive},
                      {"fatal", fatal ? Json(*fatal) : Json(nullptr)},
                      {"notes", run.tally.notes}};
  report["peak_ball_size"] = L->peak_ball_size();
  report["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.report = report.dump(2) + "\n";

  try {
    const std::filesystem::path dir(request.out_dir.empty() ? "." : request.out_dir);
    std::filesystem::create_directories(dir);
    for (const auto& [name, content] : run.files) {
      write_atomic(dir / name, content);
      out.files.push_back((dir / name).string());
    }
    write_atomic(dir / "report.json", out.report);
    out.files.push_back((dir / "report.json").string());
  } catch (const std::exception& e) {
    return usage(std::string("cannot write outputs: ") + e.what());
  }
  return out;
}

RunOutcome run_experiment(const RunRequest& request) {
  std::ifstream in(request.config_path, std::ios::binary);
  if (!in) return usage("cannot read config '" + request.config_path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return run_experiment_text(request, ss.str());
}

std::string payload_fingerprint(const std::string& report) {
  Json j = Json::parse(report);
  j.erase("wall_clock_seconds");
  return j.dump();
}

}  // namespace qmetric

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

#include "app/config.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "core/errors.hpp"
#include "core/growth.hpp"

namespace qmetric {

std::string to_string(Command c) {
  switch (c) {
    case Command::growth: return "growth";
    case Command::seminorm: return "seminorm";
    case Command::decompose: return "decompose";
    case Command::verify: return "verify";
    case Command::metric: return "metric";
    case Command::covering_demo: return "covering-demo";
  }
  return "?";
}

std::optional<Command> parse_command(const std::string& name) {
  for (Command c : {Command::growth, Command::seminorm, Command::decompose, Command::verify, Command::metric,
                    Command::covering_demo}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw UsageError("config " + path + ": " + why);
}

std::string kind_of(const Json& j) {
  if (j.is_string()) return "a string";
  if (j.is_boolean()) return "a boolean";
  if (j.is_null()) return "null";
  if (j.is_array()) return "an array";
  if (j.is_object()) return "an object";
  return "a number";
}

double as_number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number, got " + kind_of(j));
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

std::int64_t as_integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer, got " + kind_of(j));
  if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
    fail(path, "integer out of range");
  }
  return j.get<std::int64_t>();
}

// Checked view of one JSON object: every key must be declared up front.
class Obj {
 public:
  Obj(const Json& j, std::string path, std::set<std::string> allowed) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) fail(path_, "expected an object, got " + kind_of(j));
    for (const auto& item : j.items()) {
      if (!allowed.count(item.key())) fail(sub(item.key()), "unknown key");
    }
  }

  bool has(const std::string& k) const { return j_.contains(k); }
  const Json& at(const std::string& k) const {
    if (!has(k)) fail(sub(k), "missing required key");
    return j_.at(k);
  }
  std::string sub(const std::string& k) const { return path_ + "." + k; }

  double number(const std::string& k) const { return as_number(at(k), sub(k)); }
  double number(const std::string& k, double def) const { return has(k) ? number(k) : def; }
  std::optional<double> opt_number(const std::string& k) const {
    return has(k) ? std::optional<double>(number(k)) : std::nullopt;
  }
  double positive(const std::string& k, double def) const {
    const double v = number(k, def);
    if (!(v > 0.0)) fail(sub(k), "must be > 0");
    return v;
  }
  std::int64_t integer(const std::string& k) const { return as_integer(at(k), sub(k)); }
  std::int64_t integer(const std::string& k, std::int64_t def, std::int64_t lo, std::int64_t hi) const {
    const std::int64_t v = has(k) ? integer(k) : def;
    if (v < lo || v > hi) {
      fail(sub(k), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return v;
  }
  bool boolean(const std::string& k, bool def) const {
    if (!has(k)) return def;
    if (!at(k).is_boolean()) fail(sub(k), "expected a boolean, got " + kind_of(at(k)));
    return at(k).get<bool>();
  }
  std::string string(const std::string& k) const {
    if (!at(k).is_string()) fail(sub(k), "expected a string, got " + kind_of(at(k)));
    return at(k).get<std::string>();
  }
  const Json& array(const std::string& k) const {
    if (!at(k).is_array()) fail(sub(k), "expected an array, got " + kind_of(at(k)));
    return at(k);
  }

 private:
  const Json& j_;
  std::string path_;
};

std::vector<double> parse_schedule(const Json& j, const std::string& path) {
  std::vector<double> radii;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) radii.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
  } else {
    const Obj o(j, path, {"from", "to", "step", "factor"});
    const double from = o.number("from");
    const double to = o.number("to");
    if (o.has("step") == o.has("factor")) fail(path, "give exactly one of step or factor");
    try {
      radii = o.has("step") ? linear_schedule(from, to, o.number("step"))
                            : geometric_schedule(from, to, o.number("factor"));
    } catch (const UsageError& e) {
      fail(path, e.what());
    }
  }
  if (radii.empty()) fail(path, "empty schedule");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] >= 0.0)) fail(path, "radii must be >= 0");
    if (i > 0 && !(radii[i] > radii[i - 1])) fail(path, "radii must be strictly increasing");
  }
  return radii;
}

RawElement parse_element(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "an element is an array of terms");
  RawElement out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const Obj t(j[i], p, {"x", "re", "im"});
    std::vector<std::int64_t> code;
    const Json& x = t.array("x");
    for (std::size_t k = 0; k < x.size(); ++k) code.push_back(as_integer(x[k], t.sub("x") + "[" + std::to_string(k) + "]"));
    out.emplace_back(std::move(code), Complex(t.number("re", 0.0), t.number("im", 0.0)));
  }
  return out;
}

std::vector<RawElement> parse_elements(const Obj& o) {
  std::vector<RawElement> out;
  if (!o.has("elements")) return out;
  const Json& arr = o.array("elements");
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(parse_element(arr[i], o.sub("elements") + "[" + std::to_string(i) + "]"));
  return out;
}

CorpusOptions parse_corpus(const Json& j, const std::string& path, CorpusOptions def) {
  const Obj o(j, path, {"size", "support_radius", "max_atoms", "identity"});
  def.size = static_cast<std::size_t>(o.integer("size", static_cast<std::int64_t>(def.size), 1, 100000));
  def.support_radius = o.positive("support_radius", def.support_radius);
  def.max_atoms = static_cast<int>(o.integer("max_atoms", def.max_atoms, 1, 1000));
  def.allow_identity = o.boolean("identity", def.allow_identity);
  return def;
}

std::optional<CorpusOptions> opt_corpus(const Obj& o, CorpusOptions def) {
  if (!o.has("corpus")) return std::nullopt;
  return parse_corpus(o.at("corpus"), o.sub("corpus"), def);
}

FamilySpec parse_family(const Obj& o, bool need_n) {
  FamilySpec f;
  f.K = static_cast<int>(o.integer("K", 2, 2, 20));
  if (o.has("N")) f.N = static_cast<int>(o.integer("N", 2, 2, 64));
  if (o.has("epsilon")) {
    f.epsilon = o.number("epsilon");
    if (!(*f.epsilon > 0.0)) fail(o.sub("epsilon"), "must be > 0");
  }
  if (need_n && f.N.has_value() == f.epsilon.has_value()) fail(o.sub("N"), "give exactly one of N or epsilon");
  if (o.has("C")) {
    f.C = o.number("C");
    if (!(*f.C >= 1.0)) fail(o.sub("C"), "doubling constant must be >= 1");
  }
  return f;
}

StateSpec parse_state(const Json& j, const std::string& path) {
  const Obj o(j, path, {"kind", "xi", "normalize", "weights", "parts"});
  StateSpec s;
  const std::string kind = o.string("kind");
  if (kind == "trace") {
    if (o.has("xi") || o.has("weights") || o.has("parts") || o.has("normalize")) fail(path, "trace takes no parameters");
    s.kind = StateKind::trace;
  } else if (kind == "vector") {
    if (o.has("weights") || o.has("parts")) fail(path, "vector state takes xi and normalize only");
    s.kind = StateKind::vector;
    s.xi = parse_element(o.at("xi"), o.sub("xi"));
    if (s.xi.empty()) fail(o.sub("xi"), "empty vector");
    s.normalize = o.boolean("normalize", false);
  } else if (kind == "mixture") {
    if (o.has("xi") || o.has("normalize")) fail(path, "mixture takes weights and parts only");
    s.kind = StateKind::mixture;
    const Json& w = o.array("weights");
    for (std::size_t i = 0; i < w.size(); ++i) s.weights.push_back(as_number(w[i], o.sub("weights") + "[" + std::to_string(i) + "]"));
    const Json& p = o.array("parts");
    for (std::size_t i = 0; i < p.size(); ++i) s.parts.push_back(parse_state(p[i], o.sub("parts") + "[" + std::to_string(i) + "]"));
    if (s.weights.size() != s.parts.size() || s.parts.empty()) fail(path, "mixture needs one weight per part");
  } else {
    fail(o.sub("kind"), "unknown state kind '" + kind + "'");
  }
  return s;
}

Json parse_group(const Json& j, GroupSpec& spec) {
  const Obj o(j, "$.group", {"family", "rank", "orders", "degree", "components", "weights"});
  const std::string family = o.string("family");
  auto only = [&](std::set<std::string> keys) {
    for (const auto& item : j.items()) {
      if (item.key() != "family" && !keys.count(item.key())) fail(o.sub(item.key()), "not a parameter of " + family);
    }
  };
  if (family == "free-abelian") {
    only({"rank"});
    o.integer("rank", 1, 1, 16);
  } else if (family == "heisenberg") {
    only({});
  } else if (family == "finite-product") {
    only({"orders"});
    const Json& orders = o.array("orders");
    if (orders.empty()) fail(o.sub("orders"), "needs at least one order");
    for (std::size_t i = 0; i < orders.size(); ++i) {
      if (as_integer(orders[i], o.sub("orders") + "[" + std::to_string(i) + "]") < 2) fail(o.sub("orders"), "orders must be >= 2");
    }
  } else if (family == "finite-simple") {
    only({"degree"});
    o.integer("degree", 5, 5, 7);
  } else if (family == "direct-sum") {
    only({"components", "weights"});
    const Json& c = o.at("components");
    if (c.is_array()) {
      if (c.empty()) fail(o.sub("components"), "needs at least one component");
      for (std::size_t i = 0; i < c.size(); ++i) {
        const std::string p = o.sub("components") + "[" + std::to_string(i) + "]";
        if (c[i].is_object()) {
          const Obj a(c[i], p, {"alternating"});
          a.integer("alternating", 5, 5, 7);
        } else if (as_integer(c[i], p) < 2) {
          fail(p, "cyclic component order must be >= 2");
        }
      }
    } else {
      const Obj r(c, o.sub("components"), {"order", "count"});
      r.integer("order", 2, 2, 1 << 20);
      r.integer("count", 1, 1, 4096);
    }
    const Json& w = o.at("weights");
    if (w.is_string()) {
      const std::string name = w.get<std::string>();
      if (name != "pow2-ksquared" && name != "catch-up") fail(o.sub("weights"), "unknown weight rule '" + name + "'");
    } else if (w.is_array()) {
      for (std::size_t i = 0; i < w.size(); ++i) as_number(w[i], o.sub("weights") + "[" + std::to_string(i) + "]");
    } else {
      const Obj r(w, o.sub("weights"), {"geometric", "oscillating"});
      if (r.has("geometric") == r.has("oscillating")) fail(o.sub("weights"), "give exactly one weight rule");
      if (r.has("geometric")) r.number("geometric");
      if (r.has("oscillating")) {
        const Obj osc(r.at("oscillating"), r.sub("oscillating"), {"gamma1", "gamma2", "breaks"});
        osc.number("gamma1");
        osc.number("gamma2");
        const Json& b = osc.array("breaks");
        for (std::size_t i = 0; i < b.size(); ++i) as_integer(b[i], osc.sub("breaks") + "[" + std::to_string(i) + "]");
      }
    }
  } else {
    fail(o.sub("family"), "unknown family '" + family + "'");
  }
  spec.descriptor = j;
  return j;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  const Obj top(j, "$", {"group", "length", "command", "seed", "ball_cap", "threads", "tolerance", "growth",
                         "seminorm", "decompose", "verify", "metric", "covering"});
  cfg.echo = j;
  parse_group(top.at("group"), cfg.group);

  const std::string family = cfg.group.descriptor.at("family").get<std::string>();
  cfg.group.length_kind = family == "direct-sum" ? "max-weight" : "word";
  if (top.has("length")) {
    const Obj l(top.at("length"), "$.length", {"kind", "scale"});
    cfg.group.length_kind = l.string("kind");
    const std::string& k = cfg.group.length_kind;
    if (k != "word" && k != "max-weight" && k != "logarithmic") fail(l.sub("kind"), "unknown length kind '" + k + "'");
    if (l.has("scale") && k != "word") fail(l.sub("scale"), "only word lengths take a scale");
    cfg.group.length_scale = l.positive("scale", 1.0);
    if ((k == "max-weight") != (family == "direct-sum")) fail(l.sub("kind"), "max-weight length goes with direct-sum groups only");
    if (k == "logarithmic" && !(family == "free-abelian" && cfg.group.descriptor.value("rank", 1) == 1)) {
      fail(l.sub("kind"), "logarithmic length is defined on the integers only");
    }
  }

  if (top.has("command")) {
    cfg.command = parse_command(top.string("command"));
    if (!cfg.command) fail("$.command", "unknown command '" + top.string("command") + "'");
  }
  if (top.has("seed")) {
    const Json& s = top.at("seed");
    if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() && s.get<std::int64_t>() < 0)) {
      fail("$.seed", "expected a non-negative integer, got " + kind_of(s));
    }
    cfg.seed = s.get<std::uint64_t>();
  }
  cfg.ball_cap = static_cast<std::size_t>(top.integer("ball_cap", static_cast<std::int64_t>(kDefaultBallCap), 1, 100000000));
  cfg.threads = static_cast<int>(top.integer("threads", 1, 1, 256));
  if (top.has("tolerance")) {
    const Obj t(top.at("tolerance"), "$.tolerance", {"abs", "rel"});
    cfg.tol_abs = t.number("abs", cfg.tol_abs);
    cfg.tol_rel = t.number("rel", cfg.tol_rel);
    if (cfg.tol_abs < 0.0 || cfg.tol_rel < 0.0) fail("$.tolerance", "tolerances must be >= 0");
  }

  if (top.has("growth")) {
    const Obj o(top.at("growth"), "$.growth", {"radii", "fit_window", "oscillation_tail", "chain"});
    GrowthSpec g;
    g.radii = o.has("radii") ? parse_schedule(o.at("radii"), o.sub("radii")) : linear_schedule(1, 32, 1);
    if (g.radii.front() < 1.0) fail(o.sub("radii"), "growth radii must be >= 1");
    if (o.has("fit_window")) {
      const Json& w = o.array("fit_window");
      if (w.size() != 2) fail(o.sub("fit_window"), "expected [lo, hi]");
      g.fit_lo = as_number(w[0], o.sub("fit_window") + "[0]");
      g.fit_hi = as_number(w[1], o.sub("fit_window") + "[1]");
      if (!(0.0 <= g.fit_lo && g.fit_lo < g.fit_hi && g.fit_hi <= 1.0)) fail(o.sub("fit_window"), "need 0 <= lo < hi <= 1");
    }
    if (o.has("oscillation_tail")) {
      g.oscillation_tail = o.number("oscillation_tail");
      if (!(*g.oscillation_tail > 0.0 && *g.oscillation_tail <= 1.0)) fail(o.sub("oscillation_tail"), "must lie in (0, 1]");
    }
    if (o.has("chain")) {
      const Obj c(o.at("chain"), o.sub("chain"), {"s", "r", "C"});
      g.chain_s = c.number("s");
      g.chain_r = c.number("r");
      g.chain_C = c.number("C");
      if (!(1.0 <= *g.chain_s && *g.chain_s <= *g.chain_r && *g.chain_C >= 1.0)) fail(o.sub("chain"), "need 1 <= s <= r and C >= 1");
    }
    cfg.growth = g;
  }

  if (top.has("seminorm")) {
    const Obj o(top.at("seminorm"), "$.seminorm", {"elements", "corpus", "radii", "dump_matrices"});
    SeminormSpec s;
    s.elements = parse_elements(o);
    CorpusOptions def;
    def.size = 20;
    def.support_radius = 4;
    s.corpus = opt_corpus(o, def);
    if (o.has("radii")) s.radii = parse_schedule(o.at("radii"), o.sub("radii"));
    s.dump_matrices = o.boolean("dump_matrices", false);
    if (s.elements.empty() && !s.corpus) fail("$.seminorm", "needs elements or a corpus");
    cfg.seminorm = s;
  }

  if (top.has("decompose")) {
    const Obj o(top.at("decompose"), "$.decompose",
                {"K", "N", "epsilon", "C", "elements", "corpus", "normalize_jd", "truncation_elements"});
    DecomposeSpec d;
    d.family = parse_family(o, true);
    d.elements = parse_elements(o);
    CorpusOptions def;
    def.size = 20;
    def.support_radius = 400;
    def.max_atoms = 4;
    d.corpus = opt_corpus(o, def);
    d.normalize_jd = o.boolean("normalize_jd", false);
    d.truncation_elements = static_cast<std::size_t>(o.integer("truncation_elements", 400, 1, 2000));
    if (d.elements.empty() && !d.corpus) fail("$.decompose", "needs elements or a corpus");
    cfg.decompose = d;
  }

  if (top.has("verify")) {
    const Obj o(top.at("verify"), "$.verify", {"K", "N", "epsilon", "C", "elements", "corpus", "truncation_elements"});
    VerifySpec v;
    v.family = parse_family(o, false);
    if (v.family.N && v.family.epsilon) fail("$.verify", "give at most one of N or epsilon");
    v.elements = parse_elements(o);
    v.corpus = opt_corpus(o, CorpusOptions{});
    v.truncation_elements = static_cast<std::size_t>(o.integer("truncation_elements", 400, 1, 2000));
    if (v.elements.empty() && !v.corpus) v.corpus = CorpusOptions{};
    cfg.verify = v;
  }

  if (top.has("metric")) {
    const Obj o(top.at("metric"), "$.metric", {"radius", "constraint", "max_iterations", "step", "pairs", "random_pairs"});
    MetricSpec m;
    m.radius = o.positive("radius", 2.0);
    if (o.has("constraint")) {
      const std::string c = o.string("constraint");
      if (c == "l1") m.jd = false;
      else if (c == "jd") m.l1 = false;
      else if (c != "both") fail(o.sub("constraint"), "expected l1, jd or both");
    }
    m.max_iterations = static_cast<int>(o.integer("max_iterations", 500, 1, 100000));
    m.step = o.positive("step", 1.0);
    if (o.has("pairs")) {
      const Json& p = o.array("pairs");
      for (std::size_t i = 0; i < p.size(); ++i) {
        const std::string path = o.sub("pairs") + "[" + std::to_string(i) + "]";
        const Obj pr(p[i], path, {"mu", "nu"});
        m.pairs.emplace_back(parse_state(pr.at("mu"), pr.sub("mu")), parse_state(pr.at("nu"), pr.sub("nu")));
      }
    }
    if (o.has("random_pairs")) {
      const Obj r(o.at("random_pairs"), o.sub("random_pairs"), {"count", "support_radius", "atoms"});
      RandomPairs rp;
      rp.count = static_cast<std::size_t>(r.integer("count", 20, 1, 10000));
      rp.support_radius = r.number("support_radius", 2.0);
      if (rp.support_radius < 0.0) fail(r.sub("support_radius"), "must be >= 0");
      rp.atoms = static_cast<int>(r.integer("atoms", 2, 1, 1000));
      m.random_pairs = rp;
    }
    if (m.pairs.empty() && !m.random_pairs) fail("$.metric", "needs pairs or random_pairs");
    cfg.metric = m;
  }

  if (top.has("covering")) {
    const Obj o(top.at("covering"), "$.covering", {"K", "N", "epsilon", "C", "corpus", "truncation_elements"});
    CoveringSpec c;
    c.family = parse_family(o, false);
    if (!c.family.epsilon) c.family.epsilon = 0.5;
    c.epsilon = *c.family.epsilon;
    CorpusOptions def;
    def.size = 50;
    def.support_radius = 400;
    def.max_atoms = 4;
    def.allow_identity = false;
    c.corpus = o.has("corpus") ? parse_corpus(o.at("corpus"), o.sub("corpus"), def) : def;
    c.corpus.allow_identity = false;
    c.truncation_elements = static_cast<std::size_t>(o.integer("truncation_elements", 400, 1, 2000));
    cfg.covering = c;
  }
  return cfg;
}

LengthFunction make_length(const GroupSpec& spec) {
  const Json& d = spec.descriptor;
  const std::string family = d.at("family").get<std::string>();
  std::optional<Group> G;
  if (family == "free-abelian") {
    G = Group::free_abelian(static_cast<int>(d.value("rank", 1)));
  } else if (family == "heisenberg") {
    G = Group::heisenberg();
  } else if (family == "finite-product") {
    G = Group::finite_product(d.at("orders").get<std::vector<std::int64_t>>());
  } else if (family == "finite-simple") {
    G = Group::finite_simple(d.value("degree", 5));
  } else {
    std::vector<FiniteGroup> comps;
    const Json& c = d.at("components");
    if (c.is_array()) {
      for (const auto& item : c) {
        comps.push_back(item.is_object() ? FiniteGroup::alternating(item.at("alternating").get<int>())
                                         : FiniteGroup::cyclic(item.get<std::int64_t>()));
      }
    } else {
      comps.assign(static_cast<std::size_t>(c.at("count").get<std::int64_t>()), FiniteGroup::cyclic(c.at("order").get<std::int64_t>()));
    }
    const Json& w = d.at("weights");
    std::vector<double> weights;
    if (w.is_string()) {
      weights = w.get<std::string>() == "pow2-ksquared" ? weights_pow2_ksquared(comps.size()) : weights_catch_up(comps);
    } else if (w.is_array()) {
      weights = w.get<std::vector<double>>();
    } else if (w.contains("geometric")) {
      weights = weights_geometric(w.at("geometric").get<double>(), comps.size());
    } else {
      const Json& o = w.at("oscillating");
      weights = weights_oscillating(o.at("gamma1").get<double>(), o.at("gamma2").get<double>(),
                                    o.at("breaks").get<std::vector<std::int64_t>>(), comps);
    }
    G = Group::direct_sum(std::move(comps), std::move(weights));
  }
  if (spec.length_kind == "max-weight") return LengthFunction::max_weight(*G);
  if (spec.length_kind == "logarithmic") return LengthFunction::logarithmic(*G);
  return LengthFunction::word(*G, spec.length_scale);
}

AlgebraElement materialize(const Group& G, const RawElement& raw) {
  AlgebraElement f;
  for (const auto& [code, c] : raw) {
    Element x(code);
    G.validate(x);
    f.add(x, c);
  }
  return f;
}

State materialize(const Group& G, const StateSpec& spec) {
  switch (spec.kind) {
    case StateKind::trace: return State::trace();
    case StateKind::vector: {
      AlgebraElement xi = materialize(G, spec.xi);
      if (xi.is_zero()) throw UsageError("vector state with zero vector");
      if (spec.normalize) xi = (1.0 / xi.norm2()) * xi;
      return State::vector(std::move(xi));
    }
    case StateKind::mixture: {
      std::vector<State> parts;
      for (const auto& p : spec.parts) parts.push_back(materialize(G, p));
      return State::mixture(spec.weights, std::move(parts));
    }
  }
  return State::trace();
}

}  // namespace qmetric

// Shared test utilities: corpus loading, box enumeration, ground property
// evaluation (the independent oracle for trivial-success sets), and random
// generators for abstract values.

#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hornbeam/analyzer.hpp"
#include "hornbeam/chc.hpp"
#include "hornbeam/domains.hpp"
#include "hornbeam/oracle.hpp"
#include "hornbeam/parser.hpp"
#include "hornbeam/store.hpp"
#include "hornbeam/transform.hpp"

namespace hbt {

using namespace hornbeam;

inline std::string corpus_path(const std::string& name) {
  return std::string(HORNBEAM_CORPUS_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Program load_corpus(const std::string& name) {
  return lower_pp_assertions(normalize(parse_program(read_file(corpus_path(name)))));
}

// All corpus file names; keep in sync with tests/corpus/.
inline std::vector<std::string> corpus_files() {
  return {"fact.pl",      "pow.pl",          "countup.pl",
          "trusted_external.pl", "pp_trust.pl", "bot_loop.pl",
          "false_check.pl", "mul_external.pl", "sample.pl",
          "sumto.pl",      "square.pl",       "even_odd.pl"};
}

// Enumerates every total store over `vars` with values in [lo, hi].
inline void for_each_store(
    const std::vector<Var>& vars, std::int64_t lo, std::int64_t hi,
    const std::function<void(const std::map<Var, std::int64_t>&)>& fn) {
  std::map<Var, std::int64_t> store;
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == vars.size()) {
      fn(store);
      return;
    }
    for (std::int64_t v = lo; v <= hi; ++v) {
      store[vars[i]] = v;
      rec(i + 1);
    }
  };
  rec(0);
}

// Ground evaluation of a property literal on a total integer store. This is
// the independent reference for trivial success on the numeric fragment: a
// ground test succeeds without constraining the store.
inline std::int64_t eval_ground_term(const Term& t,
                                     const std::map<Var, std::int64_t>& store) {
  if (t.is_int()) return t.as_int();
  if (t.is_var()) return store.at(t.as_var());
  const Compound& c = t.as_compound();
  if (c.args.size() == 2) {
    std::int64_t a = eval_ground_term(c.args[0], store);
    std::int64_t b = eval_ground_term(c.args[1], store);
    if (c.functor == "+") return a + b;
    if (c.functor == "-") return a - b;
    if (c.functor == "*") return a * b;
  }
  if (c.args.size() == 1 && c.functor == "-")
    return -eval_ground_term(c.args[0], store);
  throw std::runtime_error("not a ground arithmetic term");
}

inline bool holds_ground(const PropLit& lit,
                         const std::map<Var, std::int64_t>& store) {
  if (lit.args.size() == 1) {
    std::int64_t v = eval_ground_term(lit.args[0], store);
    if (lit.name == "int") return true;
    if (lit.name == "nat") return v >= 0;
    if (lit.name == "even") return v % 2 == 0;
  }
  if (lit.args.size() == 2) {
    std::int64_t a = eval_ground_term(lit.args[0], store);
    std::int64_t b = eval_ground_term(lit.args[1], store);
    if (lit.name == ">") return a > b;
    if (lit.name == ">=") return a >= b;
    if (lit.name == "<") return a < b;
    if (lit.name == "=<") return a <= b;
    if (lit.name == "=" || lit.name == "=:=") return a == b;
  }
  throw std::runtime_error("not a ground property literal");
}

inline bool holds_ground(const std::vector<PropLit>& conj,
                         const std::map<Var, std::int64_t>& store) {
  for (const PropLit& l : conj)
    if (!holds_ground(l, store)) return false;
  return true;
}

inline bool holds_ground(const PropertyFormula& f,
                         const std::map<Var, std::int64_t>& store) {
  for (const auto& conj : f.dnf)
    if (holds_ground(conj, store)) return true;
  return false;
}

// Membership of a total store in gamma(v), by per-variable concretization.
template <class D>
bool in_gamma(const std::map<Var, std::int64_t>& store, const AbsVal<D>& v) {
  if (v.is_bottom()) return false;
  for (const auto& [var, elem] : v.env())
    if (!D::contains(elem, store.at(var))) return false;
  return true;
}

// --- random generators -------------------------------------------------------

struct Rng {
  std::mt19937 gen;
  explicit Rng(unsigned seed) : gen(seed) {}
  std::int64_t pick(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen);
  }
  bool coin() { return pick(0, 1) == 1; }
};

inline Sign random_sign(Rng& rng) {
  static const Sign all[] = {Sign::Bot, Sign::Neg, Sign::Zero,
                             Sign::Pos, Sign::Int, Sign::Top};
  return all[rng.pick(0, 5)];
}

inline Interval random_interval(Rng& rng) {
  int kind = static_cast<int>(rng.pick(0, 9));
  if (kind == 0) return Interval::bottom();
  if (kind == 1) return Interval::top();
  std::int64_t a = rng.pick(-8, 8);
  std::int64_t b = rng.pick(-8, 8);
  if (kind <= 4) return Interval(Bound(std::min(a, b)), Bound(std::max(a, b)));
  if (kind <= 6) return Interval::at_least(Bound(a));
  if (kind <= 8) return Interval::at_most(Bound(a));
  return Interval(a);
}

template <class D>
typename D::Elem random_elem(Rng& rng);

template <>
inline Sign random_elem<SignDomain>(Rng& rng) {
  return random_sign(rng);
}
template <>
inline Interval random_elem<IntervalDomain>(Rng& rng) {
  return random_interval(rng);
}

template <class D>
AbsVal<D> random_absval(Rng& rng, const std::vector<Var>& vars) {
  if (rng.pick(0, 15) == 0) return AbsVal<D>::bottom();
  AbsVal<D> v = AbsVal<D>::top_over(vars);
  for (const Var& x : vars) v.refine(x, random_elem<D>(rng));
  return v;
}

// A random value above `lo` over the same variables (for monotonicity
// probes).
template <class D>
AbsVal<D> random_above(Rng& rng, const AbsVal<D>& lo,
                       const std::vector<Var>& vars) {
  return lo.join(random_absval<D>(rng, vars));
}

template <class D>
std::vector<Query<D>> entry_queries(const Program& p) {
  std::vector<Query<D>> qs;
  for (const EntryDecl& e : p.entries)
    qs.push_back(Query<D>{e.head, ts_over<D>(e.pre, e.head.var_args())});
  return qs;
}

template <class D>
EngineResult<D> run_baseline(const Program& p, EngineConfig cfg = {}) {
  return analyze_baseline<D>(p, entry_queries<D>(p), cfg);
}

template <class D>
EngineResult<D> run_guided(const Program& p, bool speed_up = false,
                           EngineConfig cfg = {}) {
  cfg.speed_up = speed_up;
  return guided_analyze<D>(p, entry_queries<D>(p), conditions_of(p), cfg);
}

// Concrete store induced by an entry's exact `V = c` literals.
inline std::map<Var, std::int64_t> entry_oracle_store(const EntryDecl& e) {
  std::map<Var, std::int64_t> store;
  for (const PropLit& lit : e.pre.dnf[0]) {
    if (lit.args.size() != 2 || !(lit.name == "=" || lit.name == "=:="))
      continue;
    if (lit.args[0].is_var() && lit.args[1].is_int())
      store.emplace(lit.args[0].as_var(), lit.args[1].as_int());
    else if (lit.args[1].is_var() && lit.args[0].is_int())
      store.emplace(lit.args[1].as_var(), lit.args[0].as_int());
  }
  return store;
}

// --- Lemma invariants over analysis results ----------------------------------

// Applied call conditions: every triple of an asserted predicate satisfies
// call <= ts_over(Pre-disjunction).
template <class D>
std::vector<std::string> lemma_call_violations(
    const AnalysisTable<D>& a, const std::vector<AssertionCondition>& conds) {
  std::vector<std::string> out;
  for (const AssertionCondition& c : conds) {
    if (c.kind != AssertionCondition::Kind::Calls || !c.analyzer_usable())
      continue;
    PredId id = c.head.pred_id();
    if (!a.has_pred(id)) continue;
    Renaming r = Renaming::positional(c.head, a.canon_atom(id));
    AbsVal<D> bound = ts_over<D>(r.apply(c.pre), a.canon_atom(id).var_args());
    for (const AbsVal<D>& call : a.call_patterns(id))
      if (!call.leq(bound))
        out.push_back("call " + call.str() + " of " + id.str() +
                      " escapes " + bound.str());
  }
  return out;
}

// Applied success conditions: call <= ts_under(Pre) implies
// success <= ts_over(Post).
template <class D>
std::vector<std::string> lemma_succ_violations(
    const AnalysisTable<D>& a, const std::vector<AssertionCondition>& conds) {
  std::vector<std::string> out;
  for (const AssertionCondition& c : conds) {
    if (c.kind != AssertionCondition::Kind::Success || !c.analyzer_usable())
      continue;
    PredId id = c.head.pred_id();
    if (!a.has_pred(id)) continue;
    Renaming r = Renaming::positional(c.head, a.canon_atom(id));
    std::vector<Var> vars = a.canon_atom(id).var_args();
    AbsVal<D> under = ts_under<D>(r.apply(c.pre).dnf[0], vars);
    AbsVal<D> post = ts_over<D>(r.apply(c.post), vars);
    auto pats = a.call_patterns(id);
    for (size_t i = 0; i < pats.size(); ++i) {
      if (!pats[i].leq(under)) continue;
      const AbsVal<D>& succ = a.entry(id, i).success;
      if (!succ.leq(post))
        out.push_back("success " + succ.str() + " of " + id.str() + " at " +
                      pats[i].str() + " escapes " + post.str());
    }
  }
  return out;
}

// --- Oracle verification of assertion conditions ------------------------------
// (the "correct call/success condition" checks, bounded to a small box)

template <class D>
bool calls_condition_oracle_correct(const Program&,
                                    const AssertionCondition& c,
                                    const std::vector<TraceEvent>& trace) {
  std::vector<Var> vars = c.head.var_args();
  AbsVal<D> over = ts_over<D>(c.pre, vars);
  for (const TraceEvent& ev : trace) {
    if (ev.kind != TraceEvent::Kind::Call || ev.pred != c.head.pred_id())
      continue;
    if (!abstract_singleton<D>(vars, ev.args).leq(over)) return false;
  }
  return true;
}

template <class D>
bool success_condition_oracle_correct(const Program& p,
                                      const AssertionCondition& c, int depth,
                                      std::int64_t lo, std::int64_t hi) {
  std::vector<Var> vars = c.head.var_args();
  AbsVal<D> under = ts_under<D>(c.pre.dnf[0], vars);
  AbsVal<D> post = ts_over<D>(c.post, vars);
  if (under.is_bottom()) return true;  // vacuous

  // Enumerate partial call stores over the box (each position: a value or
  // unbound) that fall inside gamma(under).
  bool ok = true;
  std::vector<std::optional<std::int64_t>> vals(vars.size());
  std::function<void(size_t)> rec = [&](size_t i) {
    if (!ok) return;
    if (i == vars.size()) {
      if (!abstract_singleton<D>(vars, vals).leq(under)) return;
      std::map<Var, std::int64_t> store;
      for (size_t k = 0; k < vars.size(); ++k)
        if (vals[k]) store.emplace(vars[k], *vals[k]);
      OracleResult r = run_oracle(p, c.head, store, depth);
      for (const auto& ans : r.answers) {
        std::vector<std::optional<std::int64_t>> out(vars.size());
        for (size_t k = 0; k < vars.size(); ++k) {
          auto it = ans.find(vars[k]);
          if (it != ans.end()) out[k] = it->second;
          else if (vals[k]) out[k] = *vals[k];
        }
        if (!abstract_singleton<D>(vars, out).leq(post)) ok = false;
      }
      return;
    }
    vals[i] = std::nullopt;
    rec(i + 1);
    for (std::int64_t v = lo; v <= hi && ok; ++v) {
      vals[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return ok;
}

// Oracle verification of every analyzer-usable condition of a program, using
// traces from the program's own entries for calls-conditions.
template <class D>
bool conditions_oracle_correct(const Program& p,
                               const std::vector<AssertionCondition>& conds,
                               int depth = 8) {
  std::vector<std::vector<TraceEvent>> traces;
  for (const EntryDecl& e : p.entries)
    traces.push_back(run_oracle(p, e.head, entry_oracle_store(e), depth).trace);
  for (const AssertionCondition& c : conds) {
    if (!c.analyzer_usable()) continue;
    if (c.kind == AssertionCondition::Kind::Calls) {
      for (const auto& tr : traces)
        if (!calls_condition_oracle_correct<D>(p, c, tr)) return false;
    } else {
      if (!success_condition_oracle_correct<D>(p, c, depth, -2, 2))
        return false;
    }
  }
  return true;
}

// Concrete stores inside gamma(query) over a small box; a position may stay
// unbound only when its description covers every integer.
template <class D>
std::vector<std::map<Var, std::int64_t>> sample_gamma_stores(
    const AbsVal<D>& query, const std::vector<Var>& vars, std::int64_t lo,
    std::int64_t hi, size_t cap) {
  std::vector<std::map<Var, std::int64_t>> out;
  if (query.is_bottom()) return out;
  std::map<Var, std::int64_t> store;
  std::function<void(size_t)> rec = [&](size_t i) {
    if (out.size() >= cap) return;
    if (i == vars.size()) {
      out.push_back(store);
      return;
    }
    const auto& elem = query.get(vars[i]);
    if (D::leq(D::any_int(), elem)) rec(i + 1);  // unbound allowed
    for (std::int64_t v = lo; v <= hi; ++v) {
      if (!D::contains(elem, v)) continue;
      store[vars[i]] = v;
      rec(i + 1);
      store.erase(vars[i]);
    }
  };
  rec(0);
  return out;
}

// Coverage of a guided or baseline result against the program's own entries:
// every sampled concrete query inside gamma of the abstract entry must have
// its whole trace covered by the table.
template <class D>
std::vector<std::string> coverage_violations(const Program& p,
                                             const AnalysisTable<D>& table,
                                             int depth = 8) {
  std::vector<std::string> out;
  for (const EntryDecl& e : p.entries) {
    std::vector<Var> vars = e.head.var_args();
    AbsVal<D> query = ts_over<D>(e.pre, vars);
    for (const auto& store :
         sample_gamma_stores<D>(query, vars, -2, 3, 200)) {
      OracleResult r = run_oracle(p, e.head, store, depth);
      CoverageReport rep = validate_coverage<D>(table, r.trace);
      out.insert(out.end(), rep.violations.begin(), rep.violations.end());
    }
  }
  return out;
}

// --- Randomized small programs -------------------------------------------------

// Deterministic family of small guarded-recursion programs with assertions
// drawn from correct-by-construction templates.
inline Program random_program(unsigned seed) {
  Rng rng(seed);
  std::ostringstream os;
  std::int64_t start = rng.pick(0, 2);
  std::int64_t limit = rng.pick(3, 6);
  std::int64_t step = rng.pick(1, 2);
  const char* st1 = rng.coin() ? "trust" : "check";
  const char* st2 = rng.coin() ? "trust" : "check";

  os << ":- entry p0(X) : X = " << start << ".\n";
  os << ":- " << st1 << " pred p1(Y) : nat(Y) => nat(Y).\n";
  if (rng.coin())
    os << ":- " << st2 << " pred p2(A, B) : (nat(A), nat(B)) => B >= 0.\n";
  if (rng.coin()) os << ":- sample_check pred p0(X) : X >= 0.\n";

  os << "p0(X) :- X < " << limit << ", X1 is X + " << step << ", p0(X1).\n";
  os << "p0(X) :- X >= " << limit << ", p1(X).\n";
  os << "p1(Y) :- Y2 is Y * Y, p2(Y, Y2).\n";
  if (rng.coin()) os << "p1(Y) :- Y > " << limit + 1 << ".\n";
  os << "p2(A, B) :- A >= 0, B >= A.\n";
  os << "p2(A, B) :- A < 0, B = 0.\n";
  return lower_pp_assertions(normalize(parse_program(os.str())));
}

}  // namespace hbt

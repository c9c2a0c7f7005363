/*******************************************************************************
 *
 * Goal-dependent multivariant fixpoint engine over normalized CHC programs.
 * Runs either the plain analysis or the guided variant in which assertion
 * conditions refine (or, in speed-up mode, replace) inferred call and
 * success descriptions. Also collects the pre-guidance snapshot table used
 * by the offline checker.
 *
 ******************************************************************************/

#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hornbeam/assertions.hpp"
#include "hornbeam/chc.hpp"
#include "hornbeam/store.hpp"

namespace hornbeam {

enum class AnalysisMode { Baseline, Guided };

struct EngineConfig {
  AnalysisMode mode = AnalysisMode::Baseline;
  bool speed_up = false;
  std::string domain;
  int max_iterations = 100;
  int multivariance_budget = 3;
  int widening_delay = 2;
};

class AnalysisError : public std::runtime_error {
 public:
  enum class Kind { UnknownPredicate, IterationBudgetExceeded };

  AnalysisError(Kind kind, const std::string& msg)
      : std::runtime_error(msg), kind(kind) {}

  Kind kind;
};

template <class D>
struct Query {
  Atom atom;  // normalized
  AbsVal<D> call;
};

template <class D>
struct Triple {
  Atom atom;
  AbsVal<D> call;
  AbsVal<D> success;
};

// The answer table: per predicate, one canonical atom and one entry per
// distinct abstract call pattern. Entries are never removed; call patterns
// are immutable once inserted.
template <class D>
class AnalysisTable {
 public:
  struct Entry {
    AbsVal<D> call;
    AbsVal<D> success;
    int success_updates = 0;
  };

  void declare_pred(const PredId& id, const Atom& canon) {
    preds_.try_emplace(id, PredInfo{canon, {}});
  }

  bool has_pred(const PredId& id) const { return preds_.contains(id); }

  const Atom& canon_atom(const PredId& id) const { return preds_.at(id).canon; }

  std::optional<size_t> lookup(const PredId& id, const AbsVal<D>& call) const {
    auto it = preds_.find(id);
    if (it == preds_.end()) return std::nullopt;
    const auto& es = it->second.entries;
    for (size_t i = 0; i < es.size(); ++i)
      if (es[i].call == call) return i;
    return std::nullopt;
  }

  size_t insert(const PredId& id, AbsVal<D> call) {
    auto& info = preds_.at(id);
    info.entries.push_back(Entry{std::move(call), AbsVal<D>::bottom(), 0});
    order_.emplace_back(id, info.entries.size() - 1);
    return info.entries.size() - 1;
  }

  Entry& entry(const PredId& id, size_t i) { return preds_.at(id).entries[i]; }
  const Entry& entry(const PredId& id, size_t i) const {
    return preds_.at(id).entries[i];
  }

  std::vector<AbsVal<D>> call_patterns(const PredId& id) const {
    std::vector<AbsVal<D>> out;
    auto it = preds_.find(id);
    if (it == preds_.end()) return out;
    for (const Entry& e : it->second.entries) out.push_back(e.call);
    return out;
  }

  // Global insertion order of (predicate, entry index).
  const std::vector<std::pair<PredId, size_t>>& order() const { return order_; }

  std::vector<Triple<D>> triples() const {
    std::vector<Triple<D>> out;
    out.reserve(order_.size());
    for (const auto& [id, i] : order_) {
      const PredInfo& info = preds_.at(id);
      out.push_back(Triple<D>{info.canon, info.entries[i].call,
                              info.entries[i].success});
    }
    return out;
  }

  bool same_triples(const AnalysisTable& o) const {
    if (order_.size() != o.order_.size()) return false;
    for (size_t k = 0; k < order_.size(); ++k) {
      const auto& [id, i] = order_[k];
      const auto& [oid, oi] = o.order_[k];
      if (id != oid || i != oi) return false;
      if (!(entry(id, i).call == o.entry(id, i).call)) return false;
      if (!(entry(id, i).success == o.entry(id, i).success)) return false;
    }
    return true;
  }

 private:
  struct PredInfo {
    Atom canon;
    std::vector<Entry> entries;
  };

  std::map<PredId, PredInfo> preds_;
  std::vector<std::pair<PredId, size_t>> order_;
};

// Pre-guidance snapshots: inferred call patterns and success values before
// any condition is applied. Call snapshots hold the converged values of the
// final iteration; success snapshots are keyed on (atom, call) and
// overwritten as iterations supersede them.
template <class D>
class PreTable {
 public:
  explicit PreTable(std::string domain_name = {})
      : domain_name_(std::move(domain_name)) {}

  const std::string& domain_name() const { return domain_name_; }

  void begin_iteration() { calls_.clear(); }

  void snapshot_call(const PredId& id, const AbsVal<D>& call) {
    calls_[id].insert(call);
  }

  void snapshot_success(const PredId& id, const AbsVal<D>& call,
                        const AbsVal<D>& success) {
    auto& v = succs_[id];
    for (auto& [c, s] : v) {
      if (c == call) {
        s = success;
        return;
      }
    }
    v.emplace_back(call, success);
  }

  void set_canon(std::map<PredId, Atom> canon) { canon_ = std::move(canon); }
  const std::map<PredId, Atom>& canon() const { return canon_; }

  const std::map<PredId, std::set<AbsVal<D>, typename AbsVal<D>::Less>>&
  call_snaps() const {
    return calls_;
  }
  const std::map<PredId, std::vector<std::pair<AbsVal<D>, AbsVal<D>>>>&
  succ_snaps() const {
    return succs_;
  }

 private:
  std::string domain_name_;
  std::map<PredId, std::set<AbsVal<D>, typename AbsVal<D>::Less>> calls_;
  std::map<PredId, std::vector<std::pair<AbsVal<D>, AbsVal<D>>>> succs_;
  std::map<PredId, Atom> canon_;
};

template <class D>
struct EngineResult {
  AnalysisTable<D> table;
  PreTable<D> pre;
  int iterations = 0;
};

// Canonical atom per predicate, used to key the answer table: the first
// entry declaration, else the first assertion head, else the first
// (normalized) clause head.
inline std::map<PredId, Atom> canonical_atoms(const Program& p) {
  std::map<PredId, Atom> out;
  for (const EntryDecl& e : p.entries) out.try_emplace(e.head.pred_id(), e.head);
  for (const SourceAssertion& a : p.assertions)
    out.try_emplace(a.head.pred_id(), a.head);
  for (const Clause& c : p.clauses) out.try_emplace(c.head.pred_id(), c.head);
  return out;
}

// Assertion conditions with their trivial-success bounds precomputed over
// the canonical atom's variables.
template <class D>
struct CompiledCond {
  const AssertionCondition* src = nullptr;
  size_t index = 0;  // position in the source condition list
  AbsVal<D> over_pre;
  AbsVal<D> under_pre;  // success conditions only
  AbsVal<D> over_post;  // success conditions only
};

template <class D>
struct CompiledConds {
  std::map<PredId, CompiledCond<D>> calls;
  std::map<PredId, std::vector<CompiledCond<D>>> successes;
};

// Compiles the analyzer-usable subset when usable_only is set (the checker
// compiles everything).
template <class D>
CompiledConds<D> compile_conditions(const std::vector<AssertionCondition>& conds,
                                    const std::map<PredId, Atom>& canon,
                                    bool usable_only) {
  CompiledConds<D> out;
  for (size_t i = 0; i < conds.size(); ++i) {
    const AssertionCondition& c = conds[i];
    if (usable_only && !c.analyzer_usable()) continue;
    PredId id = c.head.pred_id();
    auto it = canon.find(id);
    // Conditions on predicates that never occur are kept aside by the
    // checker; the engine can ignore them.
    Atom target = it == canon.end() ? c.head : it->second;
    Renaming r = Renaming::positional(c.head, target);
    std::vector<Var> vars = target.var_args();
    CompiledCond<D> cc;
    cc.src = &c;
    cc.index = i;
    if (c.kind == AssertionCondition::Kind::Calls) {
      cc.over_pre = ts_over<D>(r.apply(c.pre), vars);
      out.calls.emplace(id, std::move(cc));
    } else {
      cc.over_pre = ts_over<D>(r.apply(c.pre), vars);
      cc.under_pre = ts_under<D>(r.apply(c.pre).dnf[0], vars);
      cc.over_post = ts_over<D>(r.apply(c.post), vars);
      out.successes[id].push_back(std::move(cc));
    }
  }
  return out;
}

// Call-condition application: prunes (refine) or replaces (speed-up) a call
// description with the over-approximated precondition disjunction.
template <class D>
AbsVal<D> apply_call(const PredId& id, const AbsVal<D>& call,
                     const CompiledConds<D>& conds, const EngineConfig& cfg) {
  auto it = conds.calls.find(id);
  if (it == conds.calls.end()) return call;
  const AbsVal<D>& bound = it->second.over_pre;
  return cfg.speed_up ? bound : call.meet(bound);
}

// Success-condition application: meets the postconditions of every condition
// whose precondition provably covers the call.
template <class D>
AbsVal<D> apply_succ(const PredId& id, const AbsVal<D>& call,
                     const AbsVal<D>& success, const CompiledConds<D>& conds,
                     const EngineConfig& cfg, bool* applied = nullptr) {
  if (applied) *applied = false;
  auto it = conds.successes.find(id);
  if (it == conds.successes.end()) return success;
  AbsVal<D> met;
  bool any = false;
  for (const CompiledCond<D>& c : it->second) {
    if (!call.leq(c.under_pre)) continue;
    met = any ? met.meet(c.over_post) : c.over_post;
    any = true;
  }
  if (applied) *applied = any;
  if (!any) return success;
  return cfg.speed_up ? met : met.meet(success);
}

template <class D>
class Engine {
 public:
  Engine(const Program& prog, const std::vector<AssertionCondition>& conds,
         EngineConfig cfg)
      : prog_(prog), cfg_(std::move(cfg)), canon_(canonical_atoms(prog)),
        pre_(D::kName) {
    if (cfg_.max_iterations < 1)
      throw std::logic_error("max_iterations must be >= 1");
    if (cfg_.multivariance_budget < 1)
      throw std::logic_error("multivariance_budget must be >= 1");
    for (const auto& [id, atom] : canon_) clauses_[id] = prog.clauses_of(id);
    if (guided())
      compiled_ = compile_conditions<D>(conds, canon_, /*usable_only=*/true);
    // Predicates without clauses need an analyzer-usable assertion.
    for (const SourceAssertion& a : prog.assertions)
      if (a.status != AssertStatus::SampleCheck)
        covered_.insert(a.head.pred_id());
    pre_.set_canon(canon_);
  }

  EngineResult<D> run(const std::vector<Query<D>>& queries) {
    seed(queries);
    bool changes = true;
    while (changes) {
      if (++iterations_ > cfg_.max_iterations)
        throw AnalysisError(AnalysisError::Kind::IterationBudgetExceeded,
                            "fixpoint not reached within " +
                                std::to_string(cfg_.max_iterations) +
                                " iterations (widening bug?)");
      changes = false;
      inserted_ = false;
      pre_.begin_iteration();
      auto work = a_.order();
      for (const auto& [id, idx] : work)
        if (process_entry(id, idx)) changes = true;
      // Newly seeded call patterns are analyzed on the next sweep.
      changes = changes || inserted_;
    }
    return EngineResult<D>{std::move(a_), std::move(pre_), iterations_};
  }

 private:
  bool guided() const { return cfg_.mode == AnalysisMode::Guided; }

  const Atom& require_canon(const PredId& id, const SourceSpan& span) {
    auto it = canon_.find(id);
    if (it == canon_.end())
      throw AnalysisError(AnalysisError::Kind::UnknownPredicate,
                          "call to unknown predicate " + id.str() + " (line " +
                              std::to_string(span.line) + ")");
    return it->second;
  }

  // A predicate the solver may call: has clauses, or is covered by a
  // trust/check assertion (external).
  void require_callable(const PredId& id, const SourceSpan& span) {
    require_canon(id, span);
    if (clauses_.at(id).empty() && !covered_.contains(id))
      throw AnalysisError(AnalysisError::Kind::UnknownPredicate,
                          "predicate " + id.str() +
                              " has no clauses, is not a builtin, and no "
                              "trust/check assertion covers it (line " +
                              std::to_string(span.line) + ")");
  }

  void seed(const std::vector<Query<D>>& queries) {
    if (queries.empty())
      throw std::logic_error("analysis needs at least one initial query");
    for (const Query<D>& q : queries) {
      if (!q.atom.is_normalized())
        throw std::logic_error("initial query atom must be normalized: " +
                               to_string(q.atom));
      PredId id = q.atom.pred_id();
      require_callable(id, SourceSpan{});
      const Atom& canon = canon_.at(id);
      a_.declare_pred(id, canon);
      AbsVal<D> call = q.call.renamed(q.atom.var_args(), canon.var_args());
      if (guided()) call = apply_call<D>(id, call, compiled_, cfg_);
      if (!a_.lookup(id, call)) a_.insert(id, call);
    }
  }

  bool process_entry(const PredId& id, size_t idx) {
    const std::vector<const Clause*>& cls = clauses_.at(id);
    if (cls.empty()) return process_external(id, idx);
    bool changed = false;
    for (const Clause* cl : cls)
      if (process_clause(id, idx, *cl)) changed = true;
    return changed;
  }

  // Trusted external: success is the call description refined by whatever
  // success conditions apply.
  bool process_external(const PredId& id, size_t idx) {
    auto& entry = a_.entry(id, idx);
    AbsVal<D> s1 = entry.call;
    pre_.snapshot_success(id, entry.call, s1);
    AbsVal<D> s = s1;
    // With no conditions at all for this predicate, guided degrades to the
    // baseline fallback (success = call); if conditions exist but none
    // covers this call, nothing constrains the result and we refuse.
    if (guided() && compiled_.successes.contains(id)) {
      bool applied = false;
      s = apply_succ<D>(id, entry.call, s1, compiled_, cfg_, &applied);
      if (!applied)
        throw AnalysisError(AnalysisError::Kind::UnknownPredicate,
                            "external predicate " + id.str() +
                                " has no applicable success condition for call " +
                                entry.call.str());
    }
    if (s == entry.success) return false;
    store_success(id, entry, s);
    return true;
  }

  bool process_clause(const PredId& id, size_t idx, const Clause& cl) {
    const Atom& goal = a_.canon_atom(id);
    AbsVal<D> t = abs_call<D>(goal, a_.entry(id, idx).call, cl);
    t = solve_body(cl, t);
    AbsVal<D> s0 = abs_proceed<D>(goal, cl.head, t);

    auto& entry = a_.entry(id, idx);
    AbsVal<D> s1 = generalize_success(entry, s0);
    pre_.snapshot_success(id, entry.call, s1);
    AbsVal<D> s =
        guided() ? apply_succ<D>(id, entry.call, s1, compiled_, cfg_) : s1;
    if (s == entry.success) return false;
    store_success(id, entry, s);
    return true;
  }

  // Stored success values must form an ascending chain per entry.
  void store_success(const PredId& id, typename AnalysisTable<D>::Entry& entry,
                     const AbsVal<D>& s) {
    if (!entry.success.leq(s))
      throw std::logic_error("non-monotonic success update for " + id.str());
    entry.success = s;
  }

  // Success-side generalization: join with the stored value, widening once
  // the delayed-widening allowance for this entry is spent.
  AbsVal<D> generalize_success(typename AnalysisTable<D>::Entry& entry,
                               const AbsVal<D>& contribution) {
    AbsVal<D> joined = entry.success.join(contribution);
    if (joined == entry.success) return entry.success;
    entry.success_updates += 1;
    if (entry.success_updates > cfg_.widening_delay)
      return entry.success.widen(joined);
    return joined;
  }

  AbsVal<D> solve_body(const Clause& cl, AbsVal<D> t) {
    for (const Literal& lit : cl.body) {
      if (t.is_bottom()) return t;  // dead path, nothing further executes
      if (lit.is_builtin()) {
        std::vector<Var> lv = vars_of(lit);
        AbsVal<D> c = abs_project<D>(lv, t);
        AbsVal<D> s = transfer_builtin<D>(lit.as_builtin(), c);
        t = abs_extend<D>(lv, s, t);
        continue;
      }
      if (!lit.is_call())
        throw std::logic_error(
            "program-point assertion reached the analyzer; run "
            "lower_pp_assertions first");
      t = solve_call(lit.call_atom(), cl.span, t);
    }
    return t;
  }

  AbsVal<D> solve_call(const Atom& atom, const SourceSpan& span, AbsVal<D> t) {
    PredId id = atom.pred_id();
    const Atom& canon = require_canon(id, span);
    std::vector<Var> lv = atom.var_args();
    std::vector<Var> cv = canon.var_args();

    AbsVal<D> c = abs_project<D>(lv, t).renamed(lv, cv);
    std::vector<AbsVal<D>> olds = a_.call_patterns(id);
    bool exhausted =
        olds.size() >= static_cast<size_t>(cfg_.multivariance_budget);
    AbsVal<D> cg = abs_generalize<D>(c, olds, exhausted, /*widen_now=*/true);
    pre_.snapshot_call(id, cg);
    AbsVal<D> cc = guided() ? apply_call<D>(id, cg, compiled_, cfg_) : cg;

    AbsVal<D> s_canon;
    if (cc.is_bottom()) {
      s_canon = AbsVal<D>::bottom();  // pruned call: no successes
    } else if (auto found = a_.lookup(id, cc)) {
      s_canon = a_.entry(id, *found).success;
    } else {
      require_callable(id, span);
      a_.declare_pred(id, canon);
      a_.insert(id, cc);
      inserted_ = true;
      s_canon = AbsVal<D>::bottom();
    }
    return abs_extend<D>(lv, s_canon.renamed(cv, lv), t);
  }

  const Program& prog_;
  EngineConfig cfg_;
  std::map<PredId, Atom> canon_;
  std::map<PredId, std::vector<const Clause*>> clauses_;
  std::set<PredId> covered_;
  CompiledConds<D> compiled_;
  AnalysisTable<D> a_;
  PreTable<D> pre_;
  int iterations_ = 0;
  bool inserted_ = false;
};

template <class D>
EngineResult<D> analyze_baseline(const Program& p,
                                 const std::vector<Query<D>>& queries,
                                 const EngineConfig& cfg_in = {}) {
  EngineConfig cfg = cfg_in;
  cfg.mode = AnalysisMode::Baseline;
  cfg.domain = D::kName;
  return Engine<D>(p, {}, cfg).run(queries);
}

template <class D>
EngineResult<D> guided_analyze(const Program& p,
                               const std::vector<Query<D>>& queries,
                               const std::vector<AssertionCondition>& conds,
                               const EngineConfig& cfg_in = {}) {
  EngineConfig cfg = cfg_in;
  cfg.mode = AnalysisMode::Guided;
  cfg.domain = D::kName;
  return Engine<D>(p, conds, cfg).run(queries);
}

}  // namespace hornbeam

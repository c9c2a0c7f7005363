/*******************************************************************************
 *
 * Depth-bounded concrete interpreter (top-down, left-to-right resolution
 * with full backtracking) over the ground integer fragment, and the
 * coverage validator that compares analysis tables against its traces.
 *
 ******************************************************************************/

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hornbeam/analyzer.hpp"
#include "hornbeam/chc.hpp"
#include "hornbeam/store.hpp"

namespace hornbeam {

// Partial concrete store projected onto an atom's argument positions.
using ProjectedStore = std::vector<std::optional<std::int64_t>>;

struct TraceEvent {
  enum class Kind { Call, Success };

  Kind kind = Kind::Call;
  PredId pred;
  ProjectedStore args;
  int remaining_depth = 0;
  std::size_t call_id = 0;        // success events link to their call
  bool cut_by_depth = false;      // call not expanded: excluded from coverage
};

struct OracleResult {
  // Answers projected onto the goal's variables; unbound variables absent.
  std::set<std::map<Var, std::int64_t>> answers;
  std::vector<TraceEvent> trace;
  bool complete = true;
  std::size_t depth_cut_calls = 0;
  std::size_t insufficient_branches = 0;
};

// Explores all derivations of `goal` under `store` up to `depth` nested
// clause expansions. Branches needing an unbound builtin input are aborted
// with the insufficient marker.
OracleResult run_oracle(const Program& p, const Atom& goal,
                        const std::map<Var, std::int64_t>& store, int depth);

struct CoverageReport {
  std::vector<std::string> violations;
  std::size_t calls_checked = 0;
  std::size_t successes_checked = 0;
};

// Concrete membership: a partially known valuation is inside gamma(v) iff
// its singleton abstraction is below v.
template <class D>
bool store_in_gamma(const ProjectedStore& vals, const std::vector<Var>& vars,
                    const AbsVal<D>& v) {
  return abstract_singleton<D>(vars, vals).leq(v);
}

// Checks both halves of analysis correctness against a trace: every
// completed concrete call is covered by some triple, and every answer of a
// covered call lies inside that triple's success description.
template <class D>
CoverageReport validate_coverage(const AnalysisTable<D>& a,
                                 const std::vector<TraceEvent>& trace) {
  CoverageReport report;
  std::map<std::size_t, const TraceEvent*> call_by_id;
  for (const TraceEvent& ev : trace)
    if (ev.kind == TraceEvent::Kind::Call) call_by_id[ev.call_id] = &ev;

  auto render = [](const PredId& id, const ProjectedStore& args) {
    std::string s = id.name + "(";
    for (size_t i = 0; i < args.size(); ++i) {
      if (i) s += ",";
      s += args[i] ? std::to_string(*args[i]) : "_";
    }
    return s + ")";
  };

  for (const TraceEvent& ev : trace) {
    if (ev.kind == TraceEvent::Kind::Call) {
      if (ev.cut_by_depth) continue;
      report.calls_checked += 1;
      if (!a.has_pred(ev.pred)) {
        report.violations.push_back("no triple at all for concrete call " +
                                    render(ev.pred, ev.args));
        continue;
      }
      std::vector<Var> vars = a.canon_atom(ev.pred).var_args();
      AbsVal<D> s = abstract_singleton<D>(vars, ev.args);
      bool covered = false;
      for (const AbsVal<D>& pat : a.call_patterns(ev.pred))
        if (s.leq(pat)) {
          covered = true;
          break;
        }
      if (!covered)
        report.violations.push_back("concrete call " + render(ev.pred, ev.args) +
                                    " not covered by any call description");
      continue;
    }

    // Success event: must lie inside the success of every triple covering
    // its call.
    const TraceEvent* call = call_by_id.at(ev.call_id);
    if (!a.has_pred(ev.pred)) continue;  // already reported at the call
    std::vector<Var> vars = a.canon_atom(ev.pred).var_args();
    AbsVal<D> sc = abstract_singleton<D>(vars, call->args);
    AbsVal<D> ss = abstract_singleton<D>(vars, ev.args);
    report.successes_checked += 1;
    auto pats = a.call_patterns(ev.pred);
    for (size_t i = 0; i < pats.size(); ++i) {
      if (!sc.leq(pats[i])) continue;
      const AbsVal<D>& succ = a.entry(ev.pred, i).success;
      if (!ss.leq(succ))
        report.violations.push_back(
            "concrete answer " + render(ev.pred, ev.args) + " of call " +
            render(ev.pred, call->args) + " escapes success description " +
            succ.str() + " of call pattern " + pats[i].str());
    }
  }
  return report;
}

}  // namespace hornbeam

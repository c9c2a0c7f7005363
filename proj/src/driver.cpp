#include "hornbeam/driver.hpp"

#include <fstream>
#include <sstream>

#include "hornbeam/analyzer.hpp"
#include "hornbeam/checker.hpp"
#include "hornbeam/domains.hpp"
#include "hornbeam/oracle.hpp"
#include "hornbeam/parser.hpp"
#include "hornbeam/report.hpp"
#include "hornbeam/transform.hpp"

namespace hornbeam {

namespace {

std::string read_input(const RunRequest& req) {
  if (req.source) return *req.source;
  std::ifstream in(req.input_path);
  if (!in) throw std::runtime_error("cannot open " + req.input_path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parse, normalize and lower; shared by analysis and oracle runs.
Program load_program(const RunRequest& req, RunOutcome& out) {
  Program p = parse_program(read_input(req));
  for (const std::string& w : p.warnings) out.diagnostics.push_back("warning: " + w);
  return lower_pp_assertions(normalize(p));
}

std::vector<EntryDecl> effective_entries(const RunRequest& req,
                                         const Program& p) {
  std::vector<EntryDecl> entries;
  if (!req.entries.empty()) {
    for (const std::string& spec : req.entries)
      entries.push_back(parse_entry_spec(spec));
  } else {
    entries = p.entries;
  }
  return entries;
}

// Concrete store for oracle validation of an entry: exact `V = c` literals
// become bindings, everything else stays unbound.
std::map<Var, std::int64_t> entry_store(const EntryDecl& e) {
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

template <class D>
void validate_against_oracle(const Program& p,
                             const std::vector<EntryDecl>& entries,
                             const AnalysisTable<D>& table, int depth,
                             RunOutcome& out) {
  for (const EntryDecl& e : entries) {
    std::map<Var, std::int64_t> store = entry_store(e);
    std::vector<Var> vars = e.head.var_args();
    ProjectedStore vals;
    for (const Var& v : vars) {
      auto it = store.find(v);
      vals.push_back(it == store.end() ? std::nullopt
                                       : std::optional<std::int64_t>(it->second));
    }
    AbsVal<D> query_call = ts_over<D>(e.pre, vars);
    if (!abstract_singleton<D>(vars, vals).leq(query_call)) {
      out.diagnostics.push_back(
          "validate: entry " + to_string(e.head) +
          " has a non-exact precondition; skipping oracle validation");
      continue;
    }
    OracleResult oracle = run_oracle(p, e.head, store, depth);
    CoverageReport cov = validate_coverage<D>(table, oracle.trace);
    for (const std::string& v : cov.violations)
      out.diagnostics.push_back("coverage violation: " + v);
    std::ostringstream note;
    note << "validate: entry " << to_string(e.head) << ": "
         << cov.calls_checked << " calls, " << cov.successes_checked
         << " successes checked, " << cov.violations.size() << " violations"
         << (oracle.complete ? "" : " (trace incomplete at this depth)");
    out.diagnostics.push_back(note.str());
  }
}

template <class D>
void run_with_domain(const RunRequest& req, RunOutcome& out) {
  Program p = load_program(req, out);
  std::vector<AssertionCondition> conds = conditions_of(p);

  std::vector<EntryDecl> entries = effective_entries(req, p);
  if (entries.empty()) {
    out.exit_code = 2;
    out.diagnostics.push_back(
        "error: no entry declarations and no --entry overrides");
    return;
  }

  for (const SourceAssertion& a : p.assertions) {
    for (const std::string& lit : opaque_props(a.pre))
      out.diagnostics.push_back("warning: property " + lit +
                                " is not interpreted by the " +
                                std::string(D::kName) +
                                " property table; safe bounds used");
  }

  EngineConfig cfg;
  cfg.mode = req.mode == "guided" ? AnalysisMode::Guided : AnalysisMode::Baseline;
  cfg.speed_up = req.speed_up;
  cfg.domain = D::kName;

  std::vector<Query<D>> queries;
  for (const EntryDecl& e : entries)
    queries.push_back(Query<D>{e.head, ts_over<D>(e.pre, e.head.var_args())});

  EngineResult<D> result =
      cfg.mode == AnalysisMode::Guided
          ? guided_analyze<D>(p, queries, conds, cfg)
          : analyze_baseline<D>(p, queries, cfg);

  CheckResult<D> check = check_conditions<D>(result.pre, conds);

  if (req.validate)
    validate_against_oracle<D>(p, entries, result.table, req.oracle_depth, out);

  if (req.format == "json") {
    out.report = emit_json<D>(result.table, check).dump(2) + "\n";
  } else {
    out.report = render_text<D>(result.table, check, cfg, result.iterations);
  }
  out.exit_code = check.has_false() ? 1 : 0;
}

}  // namespace

RunOutcome run_analysis(const RunRequest& req) {
  RunOutcome out;
  try {
    if (req.mode != "baseline" && req.mode != "guided") {
      out.exit_code = 2;
      out.diagnostics.push_back("error: unknown mode '" + req.mode + "'");
      return out;
    }
    if (req.format != "text" && req.format != "json") {
      out.exit_code = 2;
      out.diagnostics.push_back("error: unknown format '" + req.format + "'");
      return out;
    }
    if (req.domain == SignDomain::kName) {
      run_with_domain<SignDomain>(req, out);
    } else if (req.domain == IntervalDomain::kName) {
      run_with_domain<IntervalDomain>(req, out);
    } else {
      out.exit_code = 2;
      out.diagnostics.push_back("error: unknown domain '" + req.domain +
                                "' (expected sign or intervals)");
    }
  } catch (const std::exception& e) {
    out.exit_code = 2;
    out.diagnostics.push_back(std::string("error: ") + e.what());
  }
  return out;
}

RunOutcome run_oracle_goal(const RunRequest& req, const std::string& goal_text,
                           int depth) {
  RunOutcome out;
  try {
    Program p = load_program(req, out);
    Atom goal = parse_goal_atom(goal_text);
    OracleResult r = run_oracle(p, goal, {}, depth);

    std::ostringstream os;
    os << "goal: " << to_string(goal) << "  depth: " << depth << "\n";
    os << "answers (" << r.answers.size() << "):\n";
    for (const auto& ans : r.answers) {
      os << "  ";
      if (ans.empty()) {
        os << "yes";
      } else {
        bool first = true;
        for (const auto& [v, val] : ans) {
          if (!first) os << ", ";
          first = false;
          os << v.name << " = " << val;
        }
      }
      os << "\n";
    }
    os << "trace: " << r.trace.size() << " events, " << r.depth_cut_calls
       << " depth-cut calls, " << r.insufficient_branches
       << " insufficiently instantiated branches\n";
    for (const TraceEvent& ev : r.trace) {
      os << (ev.kind == TraceEvent::Kind::Call ? "  call    " : "  success ")
         << ev.pred.name << "(";
      for (size_t i = 0; i < ev.args.size(); ++i) {
        if (i) os << ",";
        os << (ev.args[i] ? std::to_string(*ev.args[i]) : "_");
      }
      os << ")";
      if (ev.cut_by_depth) os << "  [depth cut]";
      os << "\n";
    }
    out.report = os.str();
  } catch (const std::exception& e) {
    out.exit_code = 2;
    out.diagnostics.push_back(std::string("error: ") + e.what());
  }
  return out;
}

}  // namespace hornbeam

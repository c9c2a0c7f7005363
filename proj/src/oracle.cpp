#include "hornbeam/oracle.hpp"

#include <limits>
#include <stdexcept>

namespace hornbeam {

namespace {

// Immutable-style substitution: branches copy it. Programs are desk-sized,
// so correctness beats sharing here.
class Subst {
 public:
  Term walk(Term t) const {
    while (t.is_var()) {
      auto it = m_.find(t.as_var());
      if (it == m_.end()) return t;
      t = it->second;
    }
    return t;
  }

  bool occurs(const Var& v, const Term& t) const {
    Term w = walk(t);
    if (w.is_var()) return w.as_var() == v;
    if (w.is_compound())
      for (const Term& a : w.as_compound().args)
        if (occurs(v, a)) return true;
    return false;
  }

  bool unify(const Term& a, const Term& b) {
    Term x = walk(a), y = walk(b);
    if (x.is_var()) {
      if (y.is_var() && x.as_var() == y.as_var()) return true;
      if (occurs(x.as_var(), y)) return false;
      m_.emplace(x.as_var(), y);
      return true;
    }
    if (y.is_var()) return unify(y, x);
    if (x.is_int() && y.is_int()) return x.as_int() == y.as_int();
    if (x.is_compound() && y.is_compound()) {
      const Compound &cx = x.as_compound(), &cy = y.as_compound();
      if (cx.functor != cy.functor || cx.args.size() != cy.args.size())
        return false;
      for (size_t i = 0; i < cx.args.size(); ++i)
        if (!unify(cx.args[i], cy.args[i])) return false;
      return true;
    }
    return false;
  }

  std::optional<std::int64_t> value(const Term& t) const {
    Term w = walk(t);
    if (w.is_int()) return w.as_int();
    return std::nullopt;
  }

 private:
  std::map<Var, Term> m_;
};

class Interpreter {
 public:
  explicit Interpreter(const Program& p) {
    for (const Clause& c : p.clauses) clauses_[c.head.pred_id()].push_back(&c);
  }

  OracleResult run(const Atom& goal, const std::map<Var, std::int64_t>& store,
                   int depth) {
    Subst s;
    for (const auto& [v, val] : store)
      if (!s.unify(Term::var(v), Term::integer(val)))
        throw std::logic_error("inconsistent initial store");
    std::vector<Subst> outs = solve_call(goal, s, depth);
    for (const Subst& o : outs) {
      std::map<Var, std::int64_t> answer;
      for (const Var& v : vars_of(goal))
        if (auto val = o.value(Term::var(v))) answer.emplace(v, *val);
      result_.answers.insert(std::move(answer));
    }
    result_.complete =
        result_.depth_cut_calls == 0 && result_.insufficient_branches == 0;
    return std::move(result_);
  }

 private:
  ProjectedStore project(const Atom& a, const Subst& s) const {
    ProjectedStore out;
    out.reserve(a.args.size());
    for (const Term& t : a.args) out.push_back(s.value(t));
    return out;
  }

  // Evaluation aborts (nullopt) on unbound inputs, non-arithmetic terms, and
  // results outside the int64 range.
  std::optional<std::int64_t> eval(const Term& t, const Subst& s) {
    auto fit = [](__int128 v) -> std::optional<std::int64_t> {
      if (v > std::numeric_limits<std::int64_t>::max() ||
          v < std::numeric_limits<std::int64_t>::min())
        return std::nullopt;
      return static_cast<std::int64_t>(v);
    };
    Term w = s.walk(t);
    if (w.is_int()) return w.as_int();
    if (w.is_var()) return std::nullopt;
    const Compound& c = w.as_compound();
    if (c.args.size() == 2 &&
        (c.functor == "+" || c.functor == "-" || c.functor == "*")) {
      auto a = eval(c.args[0], s);
      auto b = eval(c.args[1], s);
      if (!a || !b) return std::nullopt;
      __int128 x = *a, y = *b;
      if (c.functor == "+") return fit(x + y);
      if (c.functor == "-") return fit(x - y);
      return fit(x * y);
    }
    if (c.args.size() == 1 && c.functor == "-") {
      auto a = eval(c.args[0], s);
      if (!a) return std::nullopt;
      return fit(-static_cast<__int128>(*a));
    }
    return std::nullopt;
  }

  std::vector<Subst> solve_builtin(const BuiltinLit& lit, Subst s) {
    const std::string& f = lit.name;
    auto insufficient = [&]() -> std::vector<Subst> {
      result_.insufficient_branches += 1;
      return {};
    };
    if (f == "is" && lit.args.size() == 2) {
      auto v = eval(lit.args[1], s);
      if (!v) return insufficient();
      if (!s.unify(lit.args[0], Term::integer(*v))) return {};
      return {std::move(s)};
    }
    if (f == "=" && lit.args.size() == 2) {
      if (!s.unify(lit.args[0], lit.args[1])) return {};
      return {std::move(s)};
    }
    if (lit.args.size() == 2 && is_comparison_builtin(f)) {
      auto a = eval(lit.args[0], s);
      auto b = eval(lit.args[1], s);
      if (!a || !b) return insufficient();
      bool ok = f == ">"    ? *a > *b
                : f == ">=" ? *a >= *b
                : f == "<"  ? *a < *b
                : f == "=<" ? *a <= *b
                            : *a == *b;  // =:= (and = is handled above)
      if (!ok) return {};
      return {std::move(s)};
    }
    if (lit.args.size() == 1 && (f == "int" || f == "nat" || f == "even")) {
      auto v = eval(lit.args[0], s);
      if (!v) return insufficient();
      bool ok = f == "int" || (f == "nat" ? *v >= 0 : *v % 2 == 0);
      if (!ok) return {};
      return {std::move(s)};
    }
    if (f == "!" && lit.args.empty()) return {std::move(s)};  // no-op
    throw std::logic_error("oracle: unknown builtin " + lit.pred_id().str());
  }

  std::vector<Subst> solve_seq(const std::vector<Literal>& body, size_t i,
                               Subst s, int depth) {
    if (i == body.size()) return {std::move(s)};
    const Literal& lit = body[i];
    std::vector<Subst> firsts;
    if (lit.is_builtin()) {
      firsts = solve_builtin(lit.as_builtin(), std::move(s));
    } else if (lit.is_call()) {
      firsts = solve_call(lit.call_atom(), std::move(s), depth);
    } else {
      throw std::logic_error("oracle: program-point assertion not lowered");
    }
    std::vector<Subst> outs;
    for (Subst& s1 : firsts) {
      std::vector<Subst> rest = solve_seq(body, i + 1, std::move(s1), depth);
      for (Subst& s2 : rest) outs.push_back(std::move(s2));
    }
    return outs;
  }

  std::vector<Subst> solve_call(const Atom& goal, Subst s, int depth) {
    std::size_t id = next_call_id_++;
    TraceEvent call;
    call.kind = TraceEvent::Kind::Call;
    call.pred = goal.pred_id();
    call.args = project(goal, s);
    call.remaining_depth = depth;
    call.call_id = id;
    if (depth <= 0) {
      call.cut_by_depth = true;
      result_.depth_cut_calls += 1;
      result_.trace.push_back(std::move(call));
      return {};
    }
    result_.trace.push_back(std::move(call));

    std::vector<Subst> outs;
    auto it = clauses_.find(goal.pred_id());
    if (it == clauses_.end()) return outs;  // no clauses: fails
    for (const Clause* cl : it->second) {
      Clause fresh = rename_clause(*cl);
      Subst s1 = s;
      bool ok = true;
      for (size_t i = 0; i < goal.args.size() && ok; ++i)
        ok = s1.unify(goal.args[i], fresh.head.args[i]);
      if (!ok) continue;
      for (Subst& s2 : solve_seq(fresh.body, 0, std::move(s1), depth - 1)) {
        TraceEvent succ;
        succ.kind = TraceEvent::Kind::Success;
        succ.pred = goal.pred_id();
        succ.args = project(goal, s2);
        succ.remaining_depth = depth;
        succ.call_id = id;
        result_.trace.push_back(std::move(succ));
        outs.push_back(std::move(s2));
      }
    }
    return outs;
  }

  Clause rename_clause(const Clause& cl) {
    Renaming r;
    std::string suffix = "_A" + std::to_string(next_activation_++);
    for (const Var& v : vars_of(cl)) r.bind(v, Var{v.name + suffix});
    Clause fresh;
    fresh.head = r.apply(cl.head);
    fresh.span = cl.span;
    for (const Literal& l : cl.body) {
      if (l.is_call()) {
        fresh.body.push_back(Literal::call(r.apply(l.call_atom())));
      } else if (l.is_builtin()) {
        const BuiltinLit& b = l.as_builtin();
        std::vector<Term> args;
        args.reserve(b.args.size());
        for (const Term& t : b.args) args.push_back(r.apply(t));
        fresh.body.push_back(Literal::builtin(b.name, std::move(args)));
      } else {
        throw std::logic_error("oracle: program-point assertion not lowered");
      }
    }
    return fresh;
  }

  std::map<PredId, std::vector<const Clause*>> clauses_;
  OracleResult result_;
  std::size_t next_call_id_ = 0;
  std::size_t next_activation_ = 0;
};

}  // namespace

OracleResult run_oracle(const Program& p, const Atom& goal,
                        const std::map<Var, std::int64_t>& store, int depth) {
  if (depth < 1) throw std::logic_error("oracle depth must be >= 1");
  return Interpreter(p).run(goal, store, depth);
}

}  // namespace hornbeam

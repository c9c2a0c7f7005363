/*******************************************************************************
 *
 * Non-relational abstract store: a map from clause variables to lattice
 * elements with a distinguished bottom, plus the domain-parametric analysis
 * primitives (abstract parameter passing, projection, extension,
 * generalization) and the builtin transfer functions.
 *
 ******************************************************************************/

#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "hornbeam/chc.hpp"
#include "hornbeam/interval.hpp"

namespace hornbeam {

struct UnknownBuiltinError : std::runtime_error {
  explicit UnknownBuiltinError(const std::string& name)
      : std::runtime_error("unknown builtin: " + name) {}
};

template <class D>
class AbsVal {
 public:
  using Elem = typename D::Elem;

  AbsVal() : bottom_(true) {}

  static AbsVal bottom() { return AbsVal(); }

  static AbsVal top_over(const std::vector<Var>& vars) {
    AbsVal v;
    v.bottom_ = false;
    for (const Var& x : vars) v.env_.emplace(x, D::top());
    return v;
  }

  bool is_bottom() const { return bottom_; }
  const std::map<Var, Elem>& env() const { return env_; }

  std::vector<Var> vars() const {
    std::vector<Var> out;
    out.reserve(env_.size());
    for (const auto& [v, e] : env_) out.push_back(v);
    return out;
  }

  const Elem& get(const Var& v) const {
    auto it = env_.find(v);
    if (it == env_.end())
      throw std::logic_error("abstract value has no binding for " + v.name);
    return it->second;
  }

  // Meet-assigns; collapses the store to bottom if the element is bottom.
  void refine(const Var& v, const Elem& e) {
    if (bottom_) return;
    auto it = env_.find(v);
    if (it == env_.end())
      throw std::logic_error("abstract value has no binding for " + v.name);
    it->second = D::meet(it->second, e);
    if (D::is_bot(it->second)) make_bottom();
  }

  bool leq(const AbsVal& o) const {
    if (bottom_) return true;
    if (o.bottom_) return false;
    require_same_vars(o);
    auto jt = o.env_.begin();
    for (auto it = env_.begin(); it != env_.end(); ++it, ++jt)
      if (!D::leq(it->second, jt->second)) return false;
    return true;
  }

  AbsVal meet(const AbsVal& o) const {
    if (bottom_ || o.bottom_) return bottom();
    require_same_vars(o);
    AbsVal out = *this;
    auto jt = o.env_.begin();
    for (auto it = out.env_.begin(); it != out.env_.end(); ++it, ++jt) {
      it->second = D::meet(it->second, jt->second);
      if (D::is_bot(it->second)) return bottom();
    }
    return out;
  }

  AbsVal join(const AbsVal& o) const {
    if (bottom_) return o;
    if (o.bottom_) return *this;
    require_same_vars(o);
    AbsVal out = *this;
    auto jt = o.env_.begin();
    for (auto it = out.env_.begin(); it != out.env_.end(); ++it, ++jt)
      it->second = D::join(it->second, jt->second);
    return out;
  }

  AbsVal widen(const AbsVal& next) const {
    if (bottom_) return next;
    if (next.bottom_) return *this;
    require_same_vars(next);
    AbsVal out = *this;
    auto jt = next.env_.begin();
    for (auto it = out.env_.begin(); it != out.env_.end(); ++it, ++jt)
      it->second = D::widen(it->second, jt->second);
    return out;
  }

  AbsVal restrict_to(const std::vector<Var>& vars) const {
    if (bottom_) return bottom();
    AbsVal out;
    out.bottom_ = false;
    for (const Var& v : vars) out.env_.emplace(v, get(v));
    return out;
  }

  // Positional renaming from one variable tuple onto another.
  AbsVal renamed(const std::vector<Var>& from, const std::vector<Var>& to) const {
    if (from.size() != to.size())
      throw std::logic_error("renamed: variable tuples differ in length");
    if (bottom_) return bottom();
    AbsVal out;
    out.bottom_ = false;
    for (size_t i = 0; i < from.size(); ++i) out.env_.emplace(to[i], get(from[i]));
    return out;
  }

  friend bool operator==(const AbsVal& a, const AbsVal& b) { return cmp(a, b) == 0; }

  // Representation order for container keys; not the lattice order.
  static int cmp(const AbsVal& a, const AbsVal& b) {
    if (a.bottom_ != b.bottom_) return a.bottom_ ? -1 : 1;
    if (a.bottom_) return 0;
    auto it = a.env_.begin();
    auto jt = b.env_.begin();
    for (; it != a.env_.end() && jt != b.env_.end(); ++it, ++jt) {
      if (it->first != jt->first) return it->first < jt->first ? -1 : 1;
      if (int c = D::cmp(it->second, jt->second)) return c;
    }
    if (it != a.env_.end()) return 1;
    if (jt != b.env_.end()) return -1;
    return 0;
  }

  struct Less {
    bool operator()(const AbsVal& a, const AbsVal& b) const { return cmp(a, b) < 0; }
  };

  std::string str() const { return str(vars()); }

  // Rendering in a caller-chosen variable order (usually the atom's args).
  std::string str(const std::vector<Var>& order) const {
    if (bottom_) return "bot";
    std::ostringstream os;
    os << '(';
    bool first = true;
    for (const Var& v : order) {
      if (!first) os << ", ";
      first = false;
      os << v.name << '/' << D::str(get(v));
    }
    os << ')';
    return os.str();
  }

 private:
  void make_bottom() {
    bottom_ = true;
    env_.clear();
  }

  void require_same_vars(const AbsVal& o) const {
    if (env_.size() != o.env_.size())
      throw std::logic_error("abstract values over different variable sets");
    auto jt = o.env_.begin();
    for (auto it = env_.begin(); it != env_.end(); ++it, ++jt)
      if (it->first != jt->first)
        throw std::logic_error("abstract values over different variable sets");
  }

  bool bottom_;
  std::map<Var, Elem> env_;
};

// --- Analysis primitives -----------------------------------------------------

// Abstract parameter passing: binds the clause head parameters to the call
// descriptions and sets all body-only variables to top.
template <class D>
AbsVal<D> abs_call(const Atom& goal, const AbsVal<D>& call, const Clause& cl) {
  if (goal.pred_id() != cl.head.pred_id())
    throw std::logic_error("abs_call: predicate mismatch");
  if (call.is_bottom()) return AbsVal<D>::bottom();
  AbsVal<D> out = AbsVal<D>::top_over(vars_of(cl));
  std::vector<Var> gv = goal.var_args();
  std::vector<Var> hv = cl.head.var_args();
  for (size_t i = 0; i < gv.size(); ++i) out.refine(hv[i], call.get(gv[i]));
  return out;
}

// Abstract return: projects the clause store back onto the head and renames
// onto the analyzed goal's variables.
template <class D>
AbsVal<D> abs_proceed(const Atom& goal, const Atom& head, const AbsVal<D>& t) {
  if (t.is_bottom()) return AbsVal<D>::bottom();
  std::vector<Var> hv = head.var_args();
  return t.restrict_to(hv).renamed(hv, goal.var_args());
}

template <class D>
AbsVal<D> abs_project(const std::vector<Var>& lit_vars, const AbsVal<D>& t) {
  return t.restrict_to(lit_vars);
}

// Propagates a literal's success description into the clause store.
template <class D>
AbsVal<D> abs_extend(const std::vector<Var>& lit_vars, const AbsVal<D>& success,
                     const AbsVal<D>& t) {
  if (success.is_bottom() || t.is_bottom()) return AbsVal<D>::bottom();
  AbsVal<D> out = t;
  for (const Var& v : lit_vars) out.refine(v, success.get(v));
  return out;
}

// Generalization policy. Below the multivariance budget new descriptions are
// kept as-is (new variants). Once the budget is exhausted, an old description
// covering the new one is reused; otherwise everything is folded together,
// widening if requested.
template <class D>
AbsVal<D> abs_generalize(const AbsVal<D>& nw,
                         const std::vector<AbsVal<D>>& olds, bool exhausted,
                         bool widen_now) {
  if (olds.empty() || !exhausted) return nw;
  for (const AbsVal<D>& o : olds)
    if (nw.leq(o)) return o;
  AbsVal<D> base = AbsVal<D>::bottom();
  for (const AbsVal<D>& o : olds) base = base.join(o);
  AbsVal<D> joined = base.join(nw);
  return widen_now ? base.widen(joined) : joined;
}

// --- Abstract evaluation and builtin transfer --------------------------------

// Evaluates an arithmetic term. Anything outside the +,-,* integer fragment
// maps to "any integer".
template <class D>
typename D::Elem eval_expr(const Term& t, const AbsVal<D>& store) {
  if (t.is_var()) return store.get(t.as_var());
  if (t.is_int()) return D::from_const(t.as_int());
  const Compound& c = t.as_compound();
  if (c.args.size() == 2) {
    if (c.functor == "+")
      return D::add(eval_expr<D>(c.args[0], store), eval_expr<D>(c.args[1], store));
    if (c.functor == "-")
      return D::sub(eval_expr<D>(c.args[0], store), eval_expr<D>(c.args[1], store));
    if (c.functor == "*")
      return D::mul(eval_expr<D>(c.args[0], store), eval_expr<D>(c.args[1], store));
  }
  if (c.args.size() == 1 && c.functor == "-")
    return D::neg(eval_expr<D>(c.args[0], store));
  return D::any_int();
}

namespace detail {

// Meets a refined interval back into a variable-side operand, if it is one.
template <class D>
void refine_side(AbsVal<D>& store, const Term& side, const Interval& refined) {
  if (refined.is_bottom()) {
    store = AbsVal<D>::bottom();
    return;
  }
  if (side.is_var()) store.refine(side.as_var(), D::from_interval_over(refined));
}

template <class D>
AbsVal<D> transfer_compare(const std::string& op, const BuiltinLit& lit,
                           AbsVal<D> store) {
  Interval a = D::to_interval(eval_expr<D>(lit.args[0], store));
  Interval b = D::to_interval(eval_expr<D>(lit.args[1], store));
  CmpRefinement r = refine_compare(op, a, b);
  if (r.left.is_bottom() || r.right.is_bottom()) return AbsVal<D>::bottom();
  refine_side(store, lit.args[0], r.left);
  if (store.is_bottom()) return store;
  refine_side(store, lit.args[1], r.right);
  return store;
}

}  // namespace detail

// Sound over-approximation of one builtin, meet-refined into the projected
// store. The store must bind every variable of the literal.
template <class D>
AbsVal<D> transfer_builtin(const BuiltinLit& lit, const AbsVal<D>& store) {
  if (store.is_bottom()) return store;
  AbsVal<D> out = store;
  const std::string& f = lit.name;

  if (f == "is" && lit.args.size() == 2) {
    typename D::Elem v = eval_expr<D>(lit.args[1], out);
    if (D::is_bot(v)) return AbsVal<D>::bottom();
    const Term& target = lit.args[0];
    if (target.is_var()) {
      out.refine(target.as_var(), v);
    } else if (target.is_int()) {
      if (D::is_bot(D::meet(D::from_const(target.as_int()), v)))
        return AbsVal<D>::bottom();
    }
    return out;
  }

  if (f == "=" && lit.args.size() == 2) {
    const Term &l = lit.args[0], &r = lit.args[1];
    if (l.is_var() && r.is_var()) {
      typename D::Elem m = D::meet(out.get(l.as_var()), out.get(r.as_var()));
      out.refine(l.as_var(), m);
      if (!out.is_bottom()) out.refine(r.as_var(), m);
      return out;
    }
    if (l.is_var() && r.is_int()) {
      out.refine(l.as_var(), D::from_const(r.as_int()));
      return out;
    }
    if (l.is_int() && r.is_var()) {
      out.refine(r.as_var(), D::from_const(l.as_int()));
      return out;
    }
    if (l.is_int() && r.is_int())
      return l.as_int() == r.as_int() ? out : AbsVal<D>::bottom();
    return out;  // compound unification: no numeric information
  }

  if (lit.args.size() == 2 && (f == ">" || f == ">=" || f == "<" || f == "=<"))
    return detail::transfer_compare<D>(f, lit, std::move(out));
  if (f == "=:=" && lit.args.size() == 2)
    return detail::transfer_compare<D>("=", lit, std::move(out));

  if (lit.args.size() == 1 && lit.args[0].is_var()) {
    if (f == "int" || f == "even") {
      out.refine(lit.args[0].as_var(), D::any_int());
      return out;
    }
    if (f == "nat") {
      out.refine(lit.args[0].as_var(),
                 D::from_interval_over(Interval::at_least(Bound(0))));
      return out;
    }
  }
  if ((f == "int" || f == "even" || f == "nat") && lit.args.size() == 1)
    return out;  // non-var argument: no refinement

  if (f == "!" && lit.args.empty()) return out;  // treated as a no-op

  throw UnknownBuiltinError(lit.pred_id().str());
}

// --- Property literal bounds -------------------------------------------------

// Solution "shape" of a property literal over one variable, as an interval
// when representable exactly.
namespace detail {

struct PropShape {
  enum Kind { ExactInterval, EvenSet, AllStores, Empty, Opaque } kind;
  Var var;          // for ExactInterval / EvenSet
  Interval solution;  // for ExactInterval
};

inline PropShape classify_prop(const PropLit& lit) {
  using K = PropShape;
  const std::string& f = lit.name;
  if (lit.args.size() == 1 && lit.args[0].is_var()) {
    const Var& x = lit.args[0].as_var();
    if (f == "int") return {K::ExactInterval, x, Interval::top()};
    if (f == "nat") return {K::ExactInterval, x, Interval::at_least(Bound(0))};
    if (f == "even") return {K::EvenSet, x, Interval::top()};
  }
  if (lit.args.size() == 2 && is_comparison_builtin(f)) {
    const Term &l = lit.args[0], &r = lit.args[1];
    auto flip = [](const std::string& op) -> std::string {
      if (op == ">") return "<";
      if (op == ">=") return "=<";
      if (op == "<") return ">";
      if (op == "=<") return ">=";
      return op;
    };
    auto solve = [](const std::string& op, std::int64_t c) -> Interval {
      if (op == ">") return Interval::at_least(lb_plus(Bound(c), 1));
      if (op == ">=") return Interval::at_least(Bound(c));
      if (op == "<") return Interval::at_most(ub_plus(Bound(c), -1));
      if (op == "=<") return Interval::at_most(Bound(c));
      return Interval(c);  // = and =:=
    };
    if (l.is_var() && r.is_int())
      return {K::ExactInterval, l.as_var(), solve(f, r.as_int())};
    if (l.is_int() && r.is_var())
      return {K::ExactInterval, r.as_var(), solve(flip(f), l.as_int())};
    if (l.is_var() && r.is_var() && l.as_var() == r.as_var()) {
      bool always = f == "=" || f == "=:=" || f == ">=" || f == "=<";
      return always ? PropShape{K::AllStores, {}, {}} : PropShape{K::Empty, {}, {}};
    }
    if (l.is_int() && r.is_int()) {
      CmpRefinement rr = refine_compare(f == "=:=" ? "=" : f,
                                        Interval(l.as_int()), Interval(r.as_int()));
      bool holds = !rr.left.is_bottom();
      return holds ? PropShape{K::AllStores, {}, {}} : PropShape{K::Empty, {}, {}};
    }
  }
  return {K::Opaque, {}, {}};
}

}  // namespace detail

// gamma-superset of the literal's trivial success set, over `vars`.
template <class D>
AbsVal<D> prop_over(const PropLit& lit, const std::vector<Var>& vars) {
  AbsVal<D> out = AbsVal<D>::top_over(vars);
  detail::PropShape s = detail::classify_prop(lit);
  switch (s.kind) {
    case detail::PropShape::ExactInterval:
      out.refine(s.var, D::from_interval_over(s.solution));
      return out;
    case detail::PropShape::EvenSet:
      out.refine(s.var, D::any_int());
      return out;
    case detail::PropShape::Empty:
      return AbsVal<D>::bottom();
    default:
      return out;  // AllStores / Opaque: top is always a superset
  }
}

// gamma-subset of the literal's trivial success set; bottom is always sound.
template <class D>
AbsVal<D> prop_under(const PropLit& lit, const std::vector<Var>& vars) {
  detail::PropShape s = detail::classify_prop(lit);
  switch (s.kind) {
    case detail::PropShape::ExactInterval: {
      typename D::Elem e = D::from_interval_under(s.solution);
      if (D::is_bot(e)) return AbsVal<D>::bottom();
      AbsVal<D> out = AbsVal<D>::top_over(vars);
      out.refine(s.var, e);
      return out;
    }
    case detail::PropShape::AllStores:
      return AbsVal<D>::top_over(vars);
    default:
      return AbsVal<D>::bottom();  // EvenSet / Empty / Opaque
  }
}

// Abstraction of one partially known concrete valuation: bound values map to
// their singleton abstraction, unbound positions to "any integer".
template <class D>
AbsVal<D> abstract_singleton(const std::vector<Var>& vars,
                             const std::vector<std::optional<std::int64_t>>& vals) {
  AbsVal<D> out = AbsVal<D>::top_over(vars);
  for (size_t i = 0; i < vars.size(); ++i)
    out.refine(vars[i], vals[i] ? D::from_const(*vals[i]) : D::any_int());
  return out;
}

}  // namespace hornbeam

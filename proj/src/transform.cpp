#include "hornbeam/transform.hpp"

#include <set>
#include <string>

namespace hornbeam {

namespace {

// Fresh variable names for normalization: A, B, ..., Z, A1, B1, ...
Var fresh_var(std::set<Var>& used) {
  for (int round = 0;; ++round) {
    for (char c = 'A'; c <= 'Z'; ++c) {
      Var v{round == 0 ? std::string(1, c)
                       : std::string(1, c) + std::to_string(round)};
      if (used.insert(v).second) return v;
    }
  }
}

// Normalizes one atom occurrence: returns the atom with distinct variable
// args and appends the equalities that preserve its meaning.
Atom normalize_atom(const Atom& a, std::set<Var>& used,
                    std::vector<Literal>& eqs) {
  Atom out{a.pred, {}};
  out.args.reserve(a.args.size());
  std::set<Var> seen;
  for (const Term& t : a.args) {
    if (t.is_var() && seen.insert(t.as_var()).second) {
      out.args.push_back(t);
      continue;
    }
    Var v = fresh_var(used);
    seen.insert(v);
    out.args.push_back(Term::var(v));
    eqs.push_back(Literal::builtin("=", {Term::var(v), t}));
  }
  return out;
}

// Parser-generated anonymous variables (_G<n>) get readable names; plain
// clause-wide alpha-renaming, so semantics are untouched.
Clause deanonymize(const Clause& cl) {
  std::vector<Var> anon;
  std::set<Var> used;
  for (const Var& v : vars_of(cl)) {
    used.insert(v);
    if (v.name.rfind("_G", 0) == 0) anon.push_back(v);
  }
  if (anon.empty()) return cl;
  Renaming r;
  for (const Var& v : vars_of(cl))
    if (v.name.rfind("_G", 0) != 0) r.bind(v, v);
  for (const Var& v : anon) r.bind(v, fresh_var(used));

  Clause out;
  out.span = cl.span;
  out.head = r.apply(cl.head);
  for (const Literal& l : cl.body) {
    if (l.is_call()) {
      out.body.push_back(Literal::call(r.apply(l.call_atom())));
    } else if (l.is_builtin()) {
      const BuiltinLit& b = l.as_builtin();
      std::vector<Term> args;
      args.reserve(b.args.size());
      for (const Term& t : b.args) args.push_back(r.apply(t));
      out.body.push_back(Literal::builtin(b.name, std::move(args)));
    } else {
      const PpAssertLit& pp = l.as_pp_assert();
      std::vector<PropLit> cond;
      cond.reserve(pp.cond.size());
      for (const PropLit& c : pp.cond) cond.push_back(r.apply(c));
      out.body.push_back(Literal::pp_assert(pp.status, std::move(cond)));
    }
  }
  return out;
}

Clause normalize_clause(const Clause& in) {
  Clause cl = deanonymize(in);
  std::set<Var> used;
  for (const Var& v : vars_of(cl)) used.insert(v);

  Clause out;
  out.span = cl.span;
  std::vector<Literal> head_eqs;
  out.head = normalize_atom(cl.head, used, head_eqs);
  out.body = std::move(head_eqs);
  for (const Literal& l : cl.body) {
    if (l.is_call()) {
      std::vector<Literal> eqs;
      Atom a = normalize_atom(l.call_atom(), used, eqs);
      for (Literal& e : eqs) out.body.push_back(std::move(e));
      out.body.push_back(Literal::call(std::move(a)));
    } else {
      out.body.push_back(l);
    }
  }
  return out;
}

}  // namespace

Program normalize(const Program& p) {
  Program out = p;
  out.clauses.clear();
  out.clauses.reserve(p.clauses.size());
  for (const Clause& cl : p.clauses) out.clauses.push_back(normalize_clause(cl));
  return out;
}

Program lower_pp_assertions(const Program& p) {
  Program out = p;
  out.clauses.clear();

  std::set<std::string> taken;
  for (const Clause& cl : p.clauses) taken.insert(cl.head.pred);
  int counter = 0;
  auto next_aux_name = [&]() {
    for (;;) {
      std::string name = "assrt_aux_" + std::to_string(++counter);
      if (!taken.contains(name)) return name;
    }
  };

  std::vector<Clause> aux_facts;
  for (const Clause& cl : p.clauses) {
    Clause rewritten;
    rewritten.head = cl.head;
    rewritten.span = cl.span;
    for (const Literal& l : cl.body) {
      if (!l.is_pp_assert()) {
        rewritten.body.push_back(l);
        continue;
      }
      const PpAssertLit& pp = l.as_pp_assert();
      std::string name = next_aux_name();

      std::vector<Var> cond_vars;
      std::set<Var> seen;
      for (const PropLit& lit : pp.cond)
        for (const Term& t : lit.args) collect_vars(t, cond_vars, seen);

      Atom call_atom{name, {}};
      for (const Var& v : cond_vars) call_atom.args.push_back(Term::var(v));
      rewritten.body.push_back(Literal::call(call_atom));

      // Always-true fact: assrt_aux_k(A, B, ...).
      Clause fact;
      fact.span = cl.span;
      fact.head.pred = name;
      std::set<Var> used;
      for (size_t i = 0; i < cond_vars.size(); ++i)
        fact.head.args.push_back(Term::var(fresh_var(used)));
      aux_facts.push_back(std::move(fact));

      SourceAssertion a;
      a.status = pp.status;
      a.head = call_atom;
      a.pre = PropertyFormula::conj(pp.cond);
      a.span = cl.span;
      out.assertions.push_back(std::move(a));
    }
    out.clauses.push_back(std::move(rewritten));
  }
  for (Clause& f : aux_facts) out.clauses.push_back(std::move(f));
  return out;
}

}  // namespace hornbeam

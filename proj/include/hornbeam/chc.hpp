/*******************************************************************************
 *
 * Core data model for constrained Horn clause programs with embedded
 * assertions: terms, atoms, literals, clauses, property formulas and
 * renaming substitutions.
 *
 ******************************************************************************/

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace hornbeam {

struct SourceSpan {
  int line = 0;
  int column = 0;
};

struct Var {
  std::string name;
  auto operator<=>(const Var&) const = default;
};

// Predicate identifier: name/arity.
struct PredId {
  std::string name;
  int arity = 0;
  auto operator<=>(const PredId&) const = default;
  std::string str() const { return name + "/" + std::to_string(arity); }
};

struct Term;

struct Compound {
  std::string functor;
  std::vector<Term> args;
};

// A term is a variable, an integer constant, or a compound term. Compound
// terms parse and print but the shipped numeric domains treat builtins over
// them as top.
struct Term {
  std::variant<Var, std::int64_t, Compound> node;

  static Term var(Var v) { return Term{std::move(v)}; }
  static Term var(std::string name) { return Term{Var{std::move(name)}}; }
  static Term integer(std::int64_t v) { return Term{v}; }
  static Term compound(std::string functor, std::vector<Term> args) {
    return Term{Compound{std::move(functor), std::move(args)}};
  }

  bool is_var() const { return std::holds_alternative<Var>(node); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(node); }
  bool is_compound() const { return std::holds_alternative<Compound>(node); }
  const Var& as_var() const { return std::get<Var>(node); }
  std::int64_t as_int() const { return std::get<std::int64_t>(node); }
  const Compound& as_compound() const { return std::get<Compound>(node); }
};

bool operator==(const Term& a, const Term& b);
inline bool operator==(const Compound& a, const Compound& b) {
  return a.functor == b.functor && a.args == b.args;
}

struct Atom {
  std::string pred;
  std::vector<Term> args;

  PredId pred_id() const { return PredId{pred, static_cast<int>(args.size())}; }
  // True iff all args are pairwise-distinct variables.
  bool is_normalized() const;
  std::vector<Var> var_args() const;
};

bool operator==(const Atom& a, const Atom& b);

enum class AssertStatus { Trust, Check, SampleCheck };

std::string to_string(AssertStatus s);

// Builtins and property literals share one shape: a named relation over
// terms. Which names are legal where is decided by the registries below.
struct BuiltinLit {
  std::string name;
  std::vector<Term> args;
  PredId pred_id() const { return PredId{name, static_cast<int>(args.size())}; }
};
using PropLit = BuiltinLit;

bool operator==(const BuiltinLit& a, const BuiltinLit& b);

struct CallLit {
  Atom atom;
};

// Program-point assertion literal; removed by lower_pp_assertions.
struct PpAssertLit {
  AssertStatus status;
  std::vector<PropLit> cond;
};

struct Literal {
  std::variant<CallLit, BuiltinLit, PpAssertLit> node;

  static Literal call(Atom a) { return Literal{CallLit{std::move(a)}}; }
  static Literal builtin(std::string name, std::vector<Term> args) {
    return Literal{BuiltinLit{std::move(name), std::move(args)}};
  }
  static Literal pp_assert(AssertStatus st, std::vector<PropLit> cond) {
    return Literal{PpAssertLit{st, std::move(cond)}};
  }

  bool is_call() const { return std::holds_alternative<CallLit>(node); }
  bool is_builtin() const { return std::holds_alternative<BuiltinLit>(node); }
  bool is_pp_assert() const { return std::holds_alternative<PpAssertLit>(node); }
  const Atom& call_atom() const { return std::get<CallLit>(node).atom; }
  const BuiltinLit& as_builtin() const { return std::get<BuiltinLit>(node); }
  const PpAssertLit& as_pp_assert() const { return std::get<PpAssertLit>(node); }
};

struct Clause {
  Atom head;
  std::vector<Literal> body;
  SourceSpan span;
};

// Disjunctive normal form container for assertion conditions. The surface
// syntax only writes conjunctions; disjunction arises when several
// preconditions for one predicate are merged into a calls-condition.
// Invariant: dnf is non-empty; true is a single empty conjunction.
struct PropertyFormula {
  std::vector<std::vector<PropLit>> dnf;

  static PropertyFormula truth() { return PropertyFormula{{{}}}; }
  static PropertyFormula conj(std::vector<PropLit> lits) {
    return PropertyFormula{{std::move(lits)}};
  }
  bool is_true() const;
  std::set<Var> vars() const;
};

bool operator==(const PropertyFormula& a, const PropertyFormula& b);

struct SourceAssertion {
  AssertStatus status = AssertStatus::Check;
  Atom head;              // normalized
  PropertyFormula pre = PropertyFormula::truth();   // single conjunction
  PropertyFormula post = PropertyFormula::truth();  // single conjunction
  SourceSpan span;
};

struct EntryDecl {
  Atom head;  // normalized
  PropertyFormula pre = PropertyFormula::truth();
  SourceSpan span;
};

struct Program {
  std::vector<Clause> clauses;
  std::vector<SourceAssertion> assertions;
  std::vector<EntryDecl> entries;
  std::set<PredId> builtin_registry;
  std::vector<std::string> warnings;

  bool is_builtin(const PredId& id) const { return builtin_registry.contains(id); }
  std::vector<const Clause*> clauses_of(const PredId& id) const;
  // Predicates defined by at least one clause.
  std::set<PredId> defined_preds() const;
};

// The standard builtin set: is/2, =/2, comparisons, native properties, !/0.
std::set<PredId> default_builtin_registry();
bool is_comparison_builtin(const std::string& name);
bool is_property_name(const PredId& id);

// Injective variable-to-variable substitution. Applying it to a structure
// whose variables are not all in the domain extends the mapping with fresh
// targets on the fly.
class Renaming {
 public:
  Renaming() = default;

  // Positional renaming between two normalized atoms of the same arity.
  static Renaming positional(const Atom& from, const Atom& to);

  void bind(const Var& from, const Var& to);
  bool maps(const Var& v) const { return map_.contains(v); }

  Var apply(const Var& v);
  Term apply(const Term& t);
  Atom apply(const Atom& a);
  PropLit apply(const PropLit& l);
  PropertyFormula apply(const PropertyFormula& f);

  Renaming inverse() const;
  const std::map<Var, Var>& mapping() const { return map_; }

 private:
  Var fresh_target(const Var& hint);

  std::map<Var, Var> map_;
  std::set<Var> targets_;
  int fresh_counter_ = 0;
};

// Variable collection; insertion order is first occurrence, left to right.
void collect_vars(const Term& t, std::vector<Var>& out, std::set<Var>& seen);
std::vector<Var> vars_of(const Atom& a);
std::vector<Var> vars_of(const BuiltinLit& l);
std::vector<Var> vars_of(const Literal& l);
std::vector<Var> vars_of(const Clause& c);

// Canonical printing. parse(print(p)) is a fixed point.
std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const BuiltinLit& l);
std::string to_string(const Literal& l);
std::string to_string(const Clause& c);
std::string to_string(const PropertyFormula& f);
std::string to_string(const SourceAssertion& a);
std::string to_string(const EntryDecl& e);
std::string to_string(const Program& p);

}  // namespace hornbeam

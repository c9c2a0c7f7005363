/*******************************************************************************
 *
 * Assertion conditions: one calls-condition per asserted predicate (the
 * disjunction of all preconditions) plus one success-condition per source
 * assertion, and the abstract trivial-success bounds for property formulas.
 *
 ******************************************************************************/

#pragma once

#include <stdexcept>
#include <vector>

#include "hornbeam/chc.hpp"
#include "hornbeam/store.hpp"

namespace hornbeam {

struct ConflictingArityError : std::runtime_error {
  explicit ConflictingArityError(const std::string& msg)
      : std::runtime_error(msg) {}
};

struct AssertionCondition {
  enum class Kind { Calls, Success };

  Kind kind = Kind::Calls;
  AssertStatus status = AssertStatus::Check;
  Atom head;            // normalized; all formulas are over its variables
  PropertyFormula pre;  // Calls: full DNF; Success: single conjunction
  PropertyFormula post = PropertyFormula::truth();  // Success only
  SourceSpan origin;

  // sample-check information is never used by the analyzer (it may not be
  // checked at run time).
  bool analyzer_usable() const { return status != AssertStatus::SampleCheck; }
  std::string str() const;
};

// Compiles source assertions per Def-style merging: deterministic, stable
// under source order. Throws ConflictingArityError when an assertion's arity
// disagrees with the defined predicate of the same name.
std::vector<AssertionCondition> conditions_of(const Program& p);

// Lists property literals the abstract property table cannot interpret
// (safe defaults are used for them).
std::vector<std::string> opaque_props(const PropertyFormula& f);

// --- Trivial-success bounds ---------------------------------------------------

// Over-approximation of the trivial success set of a DNF formula: meet of
// per-literal supersets inside a conjunct, join across conjuncts.
template <class D>
AbsVal<D> ts_over(const PropertyFormula& f, const std::vector<Var>& vars) {
  AbsVal<D> acc = AbsVal<D>::bottom();
  for (const auto& conj : f.dnf) {
    AbsVal<D> c = AbsVal<D>::top_over(vars);
    for (const PropLit& lit : conj) {
      c = c.meet(prop_over<D>(lit, vars));
      if (c.is_bottom()) break;
    }
    acc = acc.join(c);
  }
  return acc;
}

// Under-approximation for a single conjunction (only success-condition
// preconditions need one).
template <class D>
AbsVal<D> ts_under(const std::vector<PropLit>& conj, const std::vector<Var>& vars) {
  AbsVal<D> c = AbsVal<D>::top_over(vars);
  for (const PropLit& lit : conj) {
    c = c.meet(prop_under<D>(lit, vars));
    if (c.is_bottom()) break;
  }
  return c;
}

template <class D>
struct TSBounds {
  AbsVal<D> under;
  AbsVal<D> over;
  PropertyFormula formula;
};

// Bounds for a single-conjunction formula.
template <class D>
TSBounds<D> ts_bounds(const PropertyFormula& f, const std::vector<Var>& vars) {
  if (f.dnf.size() != 1)
    throw std::logic_error("ts_bounds: expected a single conjunction");
  return TSBounds<D>{ts_under<D>(f.dnf[0], vars), ts_over<D>(f, vars), f};
}

}  // namespace hornbeam

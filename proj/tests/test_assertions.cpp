#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hornbeam/assertions.hpp"
#include "hornbeam/domains.hpp"
#include "hornbeam/parser.hpp"
#include "hornbeam/transform.hpp"

#include "helpers.hpp"

using namespace hornbeam;

namespace {

const Var X{"X"}, N{"N"}, P{"P"};

Program pow_program() { return hbt::load_corpus("pow.pl"); }

PropertyFormula formula(const std::string& head_and_pre) {
  // piggyback on the entry parser: "p(X,...) : <formula>"
  return parse_entry_spec(head_and_pre).pre;
}

}  // namespace

TEST_CASE("conditions_of compiles the two pow assertions into three conditions") {
  std::vector<AssertionCondition> cs = conditions_of(pow_program());
  REQUIRE(cs.size() == 3);

  const AssertionCondition& calls = cs[0];
  CHECK(calls.kind == AssertionCondition::Kind::Calls);
  CHECK(calls.head.pred_id() == PredId{"pow", 3});
  REQUIRE(calls.pre.dnf.size() == 2);  // (int(X), even(N)) v (X >= 0, nat(N))
  CHECK(calls.pre.dnf[0].size() == 2);
  CHECK(calls.pre.dnf[0][0].name == "int");
  CHECK(calls.pre.dnf[0][1].name == "even");
  CHECK(calls.pre.dnf[1][0].name == ">=");
  CHECK(calls.pre.dnf[1][1].name == "nat");

  for (size_t i : {size_t(1), size_t(2)}) {
    CHECK(cs[i].kind == AssertionCondition::Kind::Success);
    CHECK(cs[i].head.pred_id() == PredId{"pow", 3});
    REQUIRE(cs[i].pre.dnf.size() == 1);
    REQUIRE(cs[i].post.dnf.size() == 1);
    CHECK(cs[i].post.dnf[0][0].name == ">=");
  }
  CHECK(cs[1].pre.dnf[0][0].name == "int");
  CHECK(cs[2].pre.dnf[0][0].name == ">=");
}

TEST_CASE("predicate with no assertions yields no conditions") {
  CHECK(conditions_of(hbt::load_corpus("fact.pl")).empty());
}

TEST_CASE("empty precondition becomes a true calls-condition plus one success") {
  Program p = normalize(parse_program(
      ":- trust pred f(X) => X >= 0.\nf(X) :- X = 1.\n"));
  std::vector<AssertionCondition> cs = conditions_of(p);
  REQUIRE(cs.size() == 2);
  CHECK(cs[0].kind == AssertionCondition::Kind::Calls);
  CHECK(cs[0].pre.is_true());
  CHECK(cs[1].kind == AssertionCondition::Kind::Success);
  CHECK(cs[1].pre.is_true());
}

TEST_CASE("conflicting arity is rejected") {
  Program p = normalize(parse_program(
      ":- trust pred f(X, Y) : X >= 0.\nf(X) :- X = 1.\n"));
  CHECK_THROWS_AS(conditions_of(p), ConflictingArityError);
}

TEST_CASE("mixed statuses make the calls-condition conservative") {
  Program p = normalize(parse_program(
      ":- trust pred g(X) : X >= 0.\n"
      ":- sample_check pred g(X) : X =< 0.\n"
      "g(X) :- X = 0.\n"));
  std::vector<AssertionCondition> cs = conditions_of(p);
  REQUIRE(cs.size() == 3);
  CHECK(cs[0].kind == AssertionCondition::Kind::Calls);
  CHECK(cs[0].status == AssertStatus::SampleCheck);
  CHECK(!cs[0].analyzer_usable());
  CHECK(cs[1].status == AssertStatus::Trust);
  CHECK(cs[2].status == AssertStatus::SampleCheck);
}

TEST_CASE("conditions_of is deterministic and order-stable") {
  Program p = pow_program();
  std::vector<AssertionCondition> a = conditions_of(p);
  std::vector<AssertionCondition> b = conditions_of(p);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].str() == b[i].str());
}

TEST_CASE("ts_over on conjunctions: intervals examples") {
  PropertyFormula f = formula("p(X, N) : (X >= 0, nat(N))");
  AbsVal<IntervalDomain> v = ts_over<IntervalDomain>(f, {X, N});
  CHECK(v.get(X) == Interval::at_least(Bound(0)));
  CHECK(v.get(N) == Interval::at_least(Bound(0)));
}

TEST_CASE("ts_over of true is top") {
  std::vector<Var> vars{X, N};
  CHECK(ts_over<IntervalDomain>(PropertyFormula::truth(), vars) ==
        AbsVal<IntervalDomain>::top_over(vars));
  CHECK(ts_over<SignDomain>(PropertyFormula::truth(), vars) ==
        AbsVal<SignDomain>::top_over(vars));
}

TEST_CASE("ts_over in sign over-approximates parity by int") {
  PropertyFormula f = formula("p(X, N) : (int(X), even(N))");
  AbsVal<SignDomain> v = ts_over<SignDomain>(f, {X, N});
  CHECK(v.get(X) == Sign::Int);
  CHECK(v.get(N) == Sign::Int);
}

TEST_CASE("ts_over joins across a disjunction") {
  std::vector<AssertionCondition> cs = conditions_of(pow_program());
  const AssertionCondition& calls = cs[0];
  std::vector<Var> vars = calls.head.var_args();
  AbsVal<IntervalDomain> v = ts_over<IntervalDomain>(calls.pre, vars);
  // join of (full, full, full) and ([0,oo), [0,oo), full) is full everywhere
  CHECK(v == AbsVal<IntervalDomain>::top_over(vars));
}

TEST_CASE("ts_under: intervals examples") {
  PropertyFormula f = formula("p(P) : P >= 0");
  CHECK(ts_under<IntervalDomain>(f.dnf[0], {P}).get(P) ==
        Interval::at_least(Bound(0)));
  // anything containing even(N) collapses to bottom in intervals
  PropertyFormula g = formula("p(P, N) : (P >= 0, even(N))");
  CHECK(ts_under<IntervalDomain>(g.dnf[0], {P, N}).is_bottom());
  // the empty conjunction trivially succeeds everywhere
  std::vector<Var> vars{P, N};
  CHECK(ts_under<IntervalDomain>({}, vars) ==
        AbsVal<IntervalDomain>::top_over(vars));
}

TEST_CASE("ts bounds bracket: under below over for corpus formulas") {
  for (const std::string& name : hbt::corpus_files()) {
    Program p = hbt::load_corpus(name);
    for (const SourceAssertion& a : p.assertions) {
      std::vector<Var> vars = a.head.var_args();
      TSBounds<IntervalDomain> bi = ts_bounds<IntervalDomain>(a.pre, vars);
      CHECK(bi.under.leq(bi.over));
      TSBounds<SignDomain> bs = ts_bounds<SignDomain>(a.pre, vars);
      CHECK(bs.under.leq(bs.over));
    }
  }
}

// Exhaustive box validation of the bracket against ground evaluation (the
// trivial-success reference for the numeric fragment).
TEST_CASE("ts bounds bracket the trivial success set on the -4..4 box") {
  for (const std::string& name : hbt::corpus_files()) {
    Program p = hbt::load_corpus(name);
    std::vector<PropertyFormula> formulas;
    for (const SourceAssertion& a : p.assertions) {
      formulas.push_back(a.pre);
      formulas.push_back(a.post);
    }
    for (const EntryDecl& e : p.entries) formulas.push_back(e.pre);

    for (const SourceAssertion& a : p.assertions) {
      std::vector<Var> vars = a.head.var_args();
      auto check_formula = [&](const PropertyFormula& f) {
        if (f.vars().empty()) return;
        std::set<Var> fv = f.vars();
        std::vector<Var> fvars(fv.begin(), fv.end());
        AbsVal<IntervalDomain> over = ts_over<IntervalDomain>(f, fvars);
        AbsVal<SignDomain> overs = ts_over<SignDomain>(f, fvars);
        AbsVal<IntervalDomain> under =
            f.dnf.size() == 1 ? ts_under<IntervalDomain>(f.dnf[0], fvars)
                              : AbsVal<IntervalDomain>::bottom();
        AbsVal<SignDomain> unders =
            f.dnf.size() == 1 ? ts_under<SignDomain>(f.dnf[0], fvars)
                              : AbsVal<SignDomain>::bottom();
        hbt::for_each_store(fvars, -4, 4,
                            [&](const std::map<Var, std::int64_t>& s) {
          bool ts = hbt::holds_ground(f, s);
          if (ts) {
            CHECK(hbt::in_gamma<IntervalDomain>(s, over));
            CHECK(hbt::in_gamma<SignDomain>(s, overs));
          }
          if (hbt::in_gamma<IntervalDomain>(s, under)) CHECK(ts);
          if (hbt::in_gamma<SignDomain>(s, unders)) CHECK(ts);
        });
      };
      check_formula(a.pre);
      check_formula(a.post);
    }
  }
}

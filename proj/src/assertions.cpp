#include "hornbeam/assertions.hpp"

#include <map>
#include <sstream>

namespace hornbeam {

namespace {

// Conjunctions of two or more literals are parenthesized so the condition's
// fields stay unambiguous.
std::string formula_str(const PropertyFormula& f) {
  std::string s = to_string(f);
  if (f.dnf.size() == 1 && f.dnf[0].size() >= 2) return "(" + s + ")";
  return s;
}

}  // namespace

std::string AssertionCondition::str() const {
  std::ostringstream os;
  if (kind == Kind::Calls) {
    os << "calls(" << to_string(head) << ", " << formula_str(pre) << ")";
  } else {
    os << "success(" << to_string(head) << ", " << formula_str(pre) << ", "
       << formula_str(post) << ")";
  }
  return os.str();
}

std::vector<AssertionCondition> conditions_of(const Program& p) {
  // Defined arities per predicate name, for the arity sanity check.
  std::map<std::string, std::set<int>> arities;
  for (const Clause& c : p.clauses) arities[c.head.pred].insert(c.head.args.size());

  // Group assertions by predicate, keeping first-appearance order.
  std::vector<PredId> group_order;
  std::map<PredId, std::vector<const SourceAssertion*>> groups;
  for (const SourceAssertion& a : p.assertions) {
    PredId id = a.head.pred_id();
    auto it = arities.find(id.name);
    if (it != arities.end() && !it->second.contains(id.arity))
      throw ConflictingArityError(
          "assertion on " + id.str() + " but predicate " + id.name +
          " is defined with arity " + std::to_string(*it->second.begin()));
    if (!groups.contains(id)) group_order.push_back(id);
    groups[id].push_back(&a);
  }

  std::vector<AssertionCondition> out;
  for (const PredId& id : group_order) {
    const auto& as = groups[id];
    const Atom& head = as.front()->head;

    AssertionCondition calls;
    calls.kind = AssertionCondition::Kind::Calls;
    calls.head = head;
    calls.origin = as.front()->span;
    calls.pre.dnf.clear();
    calls.status = AssertStatus::Trust;
    for (const SourceAssertion* a : as) {
      Renaming r = Renaming::positional(a->head, head);
      calls.pre.dnf.push_back(r.apply(a->pre).dnf[0]);
      // Joint call contract: a single untrustworthy contributor makes the
      // whole disjunction unusable.
      calls.status = std::max(calls.status, a->status);
    }
    out.push_back(std::move(calls));

    for (const SourceAssertion* a : as) {
      Renaming r = Renaming::positional(a->head, head);
      AssertionCondition succ;
      succ.kind = AssertionCondition::Kind::Success;
      succ.status = a->status;
      succ.head = head;
      succ.pre = r.apply(a->pre);
      succ.post = r.apply(a->post);
      succ.origin = a->span;
      out.push_back(std::move(succ));
    }
  }
  return out;
}

std::vector<std::string> opaque_props(const PropertyFormula& f) {
  std::vector<std::string> out;
  for (const auto& conj : f.dnf)
    for (const PropLit& lit : conj)
      if (detail::classify_prop(lit).kind == detail::PropShape::Opaque)
        out.push_back(to_string(lit));
  return out;
}

}  // namespace hornbeam

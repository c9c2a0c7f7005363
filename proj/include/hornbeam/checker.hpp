/*******************************************************************************
 *
 * Offline assertion checking: compares compiled assertion conditions against
 * the pre-guidance snapshot table and derives run-time obligations per
 * assertion status.
 *
 ******************************************************************************/

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hornbeam/analyzer.hpp"
#include "hornbeam/assertions.hpp"

namespace hornbeam {

struct DomainMismatchError : std::runtime_error {
  DomainMismatchError(const std::string& have, const std::string& want)
      : std::runtime_error("pre-table was produced under domain '" + have +
                           "', checker runs under '" + want + "'") {}
};

enum class VerdictLevel { Checked, False, Unknown };

inline std::string to_string(VerdictLevel v) {
  switch (v) {
    case VerdictLevel::Checked: return "checked";
    case VerdictLevel::False: return "false";
    case VerdictLevel::Unknown: return "unknown";
  }
  return "?";
}

enum class ObligationAction { None, RuntimeCheckRequired, OptionalSampling };

inline std::string to_string(ObligationAction a) {
  switch (a) {
    case ObligationAction::None: return "none";
    case ObligationAction::RuntimeCheckRequired: return "runtime_check_required";
    case ObligationAction::OptionalSampling: return "optional_sampling";
  }
  return "?";
}

template <class D>
struct Verdict {
  std::size_t cond_index = 0;
  const AssertionCondition* cond = nullptr;
  VerdictLevel level = VerdictLevel::Unknown;
  bool success_side = false;
  AbsVal<D> call_context;      // success side: the snapshot's call pattern
  AbsVal<D> inferred;          // the E value compared
  AbsVal<D> bound;             // the TS bound it was compared against
  std::vector<Var> var_order;  // display order (the atom's arguments)
};

struct Obligation {
  std::size_t cond_index = 0;
  const AssertionCondition* cond = nullptr;
  ObligationAction action = ObligationAction::None;
};

template <class D>
struct CheckResult {
  std::vector<Verdict<D>> verdicts;
  std::vector<Obligation> obligations;

  bool has_false() const {
    for (const auto& v : verdicts)
      if (v.level == VerdictLevel::False) return true;
    return false;
  }
};

namespace detail {

// checked when the inferred value entails the bound; false when they are
// incompatible (empty meet); unknown otherwise.
template <class D>
VerdictLevel classify(const AbsVal<D>& inferred, const AbsVal<D>& bound) {
  if (inferred.leq(bound)) return VerdictLevel::Checked;
  if (inferred.meet(bound).is_bottom()) return VerdictLevel::False;
  return VerdictLevel::Unknown;
}

}  // namespace detail

template <class D>
CheckResult<D> check_conditions(const PreTable<D>& pre,
                                const std::vector<AssertionCondition>& conds) {
  if (pre.domain_name() != D::kName)
    throw DomainMismatchError(pre.domain_name(), D::kName);

  CheckResult<D> out;
  for (std::size_t i = 0; i < conds.size(); ++i) {
    const AssertionCondition& c = conds[i];
    PredId id = c.head.pred_id();
    auto canon_it = pre.canon().find(id);
    Atom target = canon_it == pre.canon().end() ? c.head : canon_it->second;
    Renaming ren = Renaming::positional(c.head, target);
    std::vector<Var> vars = target.var_args();

    std::size_t n_verdicts = 0;
    bool all_checked = true;

    if (c.kind == AssertionCondition::Kind::Calls) {
      AbsVal<D> bound = ts_over<D>(ren.apply(c.pre), vars);
      auto snaps = pre.call_snaps().find(id);
      if (snaps != pre.call_snaps().end()) {
        for (const AbsVal<D>& snap : snaps->second) {
          Verdict<D> v;
          v.cond_index = i;
          v.cond = &c;
          v.level = detail::classify<D>(snap, bound);
          v.inferred = snap;
          v.bound = bound;
          v.var_order = vars;
          all_checked = all_checked && v.level == VerdictLevel::Checked;
          n_verdicts += 1;
          out.verdicts.push_back(std::move(v));
        }
      }
    } else {
      AbsVal<D> under = ts_under<D>(ren.apply(c.pre).dnf[0], vars);
      AbsVal<D> post = ts_over<D>(ren.apply(c.post), vars);
      auto snaps = pre.succ_snaps().find(id);
      if (snaps != pre.succ_snaps().end()) {
        for (const auto& [call, succ] : snaps->second) {
          if (!call.leq(under)) continue;  // condition does not apply
          Verdict<D> v;
          v.cond_index = i;
          v.cond = &c;
          v.level = detail::classify<D>(succ, post);
          v.success_side = true;
          v.call_context = call;
          v.inferred = succ;
          v.bound = post;
          v.var_order = vars;
          all_checked = all_checked && v.level == VerdictLevel::Checked;
          n_verdicts += 1;
          out.verdicts.push_back(std::move(v));
        }
      }
    }

    Obligation o;
    o.cond_index = i;
    o.cond = &c;
    bool discharged = n_verdicts > 0 && all_checked;
    switch (c.status) {
      case AssertStatus::Trust:
        o.action = ObligationAction::None;
        break;
      case AssertStatus::Check:
        o.action = discharged ? ObligationAction::None
                              : ObligationAction::RuntimeCheckRequired;
        break;
      case AssertStatus::SampleCheck:
        o.action = ObligationAction::OptionalSampling;
        break;
    }
    out.obligations.push_back(o);
  }
  return out;
}

}  // namespace hornbeam

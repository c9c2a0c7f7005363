/*******************************************************************************
 *
 * Deterministic text and JSON rendering of analysis results, verdicts and
 * obligations. Byte-identical output for identical inputs.
 *
 ******************************************************************************/

#pragma once

#include <sstream>
#include <string>

#include <json.hpp>

#include "hornbeam/analyzer.hpp"
#include "hornbeam/checker.hpp"

namespace hornbeam {

template <class D>
nlohmann::ordered_json emit_json(const AnalysisTable<D>& a,
                                 const CheckResult<D>& check) {
  nlohmann::ordered_json doc;
  doc["triples"] = nlohmann::ordered_json::array();
  for (const Triple<D>& t : a.triples()) {
    nlohmann::ordered_json jt;
    jt["pred"] = to_string(t.atom);
    jt["call"] = t.call.str(t.atom.var_args());
    jt["success"] = t.success.str(t.atom.var_args());
    doc["triples"].push_back(std::move(jt));
  }
  doc["verdicts"] = nlohmann::ordered_json::array();
  for (const Verdict<D>& v : check.verdicts) {
    nlohmann::ordered_json jv;
    jv["assertion"] = v.cond->str();
    jv["level"] = to_string(v.level);
    nlohmann::ordered_json ev;
    ev["kind"] = v.success_side ? "success" : "call";
    if (v.success_side) ev["call"] = v.call_context.str(v.var_order);
    ev["inferred"] = v.inferred.str(v.var_order);
    ev["bound"] = v.bound.str(v.var_order);
    jv["evidence"] = std::move(ev);
    doc["verdicts"].push_back(std::move(jv));
  }
  doc["obligations"] = nlohmann::ordered_json::array();
  for (const Obligation& o : check.obligations) {
    nlohmann::ordered_json jo;
    jo["assertion"] = o.cond->str();
    jo["status"] = to_string(o.cond->status);
    jo["action"] = to_string(o.action);
    doc["obligations"].push_back(std::move(jo));
  }
  return doc;
}

template <class D>
std::string render_text(const AnalysisTable<D>& a, const CheckResult<D>& check,
                        const EngineConfig& cfg, int iterations) {
  std::ostringstream os;
  os << "domain: " << cfg.domain << "  mode: "
     << (cfg.mode == AnalysisMode::Guided ? "guided" : "baseline");
  if (cfg.speed_up) os << " (speed-up)";
  os << "  iterations: " << iterations << "\n";

  os << "triples:\n";
  for (const Triple<D>& t : a.triples())
    os << "  <" << to_string(t.atom) << ", " << t.call.str(t.atom.var_args())
       << ", " << t.success.str(t.atom.var_args()) << ">\n";

  os << "verdicts:\n";
  for (const Verdict<D>& v : check.verdicts) {
    os << "  [" << to_string(v.level) << "] " << v.cond->str();
    if (v.success_side)
      os << " at call " << v.call_context.str(v.var_order) << ": success "
         << v.inferred.str(v.var_order) << " vs " << v.bound.str(v.var_order);
    else
      os << ": call " << v.inferred.str(v.var_order) << " vs "
         << v.bound.str(v.var_order);
    os << "\n";
  }

  os << "obligations:\n";
  for (const Obligation& o : check.obligations)
    os << "  [" << to_string(o.action) << "] " << to_string(o.cond->status)
       << " " << o.cond->str() << "\n";
  return os.str();
}

}  // namespace hornbeam

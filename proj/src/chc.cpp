#include "hornbeam/chc.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace hornbeam {

bool operator==(const Term& a, const Term& b) {
  if (a.node.index() != b.node.index()) return false;
  if (a.is_var()) return a.as_var() == b.as_var();
  if (a.is_int()) return a.as_int() == b.as_int();
  return a.as_compound() == b.as_compound();
}

bool operator==(const Atom& a, const Atom& b) {
  return a.pred == b.pred && a.args == b.args;
}

bool operator==(const BuiltinLit& a, const BuiltinLit& b) {
  return a.name == b.name && a.args == b.args;
}

bool operator==(const PropertyFormula& a, const PropertyFormula& b) {
  if (a.dnf.size() != b.dnf.size()) return false;
  for (size_t i = 0; i < a.dnf.size(); ++i) {
    if (a.dnf[i].size() != b.dnf[i].size()) return false;
    for (size_t j = 0; j < a.dnf[i].size(); ++j)
      if (!(a.dnf[i][j] == b.dnf[i][j])) return false;
  }
  return true;
}

bool Atom::is_normalized() const {
  std::set<Var> seen;
  for (const Term& t : args) {
    if (!t.is_var()) return false;
    if (!seen.insert(t.as_var()).second) return false;
  }
  return true;
}

std::vector<Var> Atom::var_args() const {
  std::vector<Var> out;
  out.reserve(args.size());
  for (const Term& t : args) out.push_back(t.as_var());
  return out;
}

bool PropertyFormula::is_true() const {
  return dnf.size() == 1 && dnf[0].empty();
}

std::set<Var> PropertyFormula::vars() const {
  std::set<Var> out;
  for (const auto& conj : dnf)
    for (const PropLit& l : conj) {
      std::vector<Var> vs = vars_of(l);
      out.insert(vs.begin(), vs.end());
    }
  return out;
}

std::vector<const Clause*> Program::clauses_of(const PredId& id) const {
  std::vector<const Clause*> out;
  for (const Clause& c : clauses)
    if (c.head.pred_id() == id) out.push_back(&c);
  return out;
}

std::set<PredId> Program::defined_preds() const {
  std::set<PredId> out;
  for (const Clause& c : clauses) out.insert(c.head.pred_id());
  return out;
}

std::set<PredId> default_builtin_registry() {
  return {
      {"is", 2},  {"=", 2},  {">", 2},   {">=", 2},  {"<", 2}, {"=<", 2},
      {"=:=", 2}, {"int", 1}, {"nat", 1}, {"even", 1}, {"!", 0},
  };
}

bool is_comparison_builtin(const std::string& name) {
  return name == ">" || name == ">=" || name == "<" || name == "=<" ||
         name == "=:=" || name == "=";
}

bool is_property_name(const PredId& id) {
  if (id.arity == 1)
    return id.name == "int" || id.name == "nat" || id.name == "even";
  if (id.arity == 2) return is_comparison_builtin(id.name);
  return false;
}

std::string to_string(AssertStatus s) {
  switch (s) {
    case AssertStatus::Trust: return "trust";
    case AssertStatus::Check: return "check";
    case AssertStatus::SampleCheck: return "sample_check";
  }
  return "?";
}

// --- Renaming ---------------------------------------------------------------

Renaming Renaming::positional(const Atom& from, const Atom& to) {
  if (from.args.size() != to.args.size())
    throw std::logic_error("positional renaming: arity mismatch " +
                           from.pred_id().str() + " vs " + to.pred_id().str());
  Renaming r;
  for (size_t i = 0; i < from.args.size(); ++i)
    r.bind(from.args[i].as_var(), to.args[i].as_var());
  return r;
}

void Renaming::bind(const Var& from, const Var& to) {
  auto it = map_.find(from);
  if (it != map_.end()) {
    if (it->second == to) return;
    throw std::logic_error("renaming rebinds " + from.name);
  }
  if (!targets_.insert(to).second)
    throw std::logic_error("renaming not injective at " + to.name);
  map_.emplace(from, to);
}

Var Renaming::fresh_target(const Var& hint) {
  for (;;) {
    Var cand{"_R" + std::to_string(fresh_counter_++) + "_" + hint.name};
    if (!targets_.contains(cand)) return cand;
  }
}

Var Renaming::apply(const Var& v) {
  auto it = map_.find(v);
  if (it != map_.end()) return it->second;
  Var t = fresh_target(v);
  map_.emplace(v, t);
  targets_.insert(t);
  return t;
}

Term Renaming::apply(const Term& t) {
  if (t.is_var()) return Term::var(apply(t.as_var()));
  if (t.is_int()) return t;
  std::vector<Term> args;
  args.reserve(t.as_compound().args.size());
  for (const Term& a : t.as_compound().args) args.push_back(apply(a));
  return Term::compound(t.as_compound().functor, std::move(args));
}

Atom Renaming::apply(const Atom& a) {
  Atom out{a.pred, {}};
  out.args.reserve(a.args.size());
  for (const Term& t : a.args) out.args.push_back(apply(t));
  return out;
}

PropLit Renaming::apply(const PropLit& l) {
  PropLit out{l.name, {}};
  out.args.reserve(l.args.size());
  for (const Term& t : l.args) out.args.push_back(apply(t));
  return out;
}

PropertyFormula Renaming::apply(const PropertyFormula& f) {
  PropertyFormula out;
  for (const auto& conj : f.dnf) {
    std::vector<PropLit> c;
    c.reserve(conj.size());
    for (const PropLit& l : conj) c.push_back(apply(l));
    out.dnf.push_back(std::move(c));
  }
  return out;
}

Renaming Renaming::inverse() const {
  Renaming r;
  for (const auto& [from, to] : map_) r.bind(to, from);
  return r;
}

// --- Variable collection ----------------------------------------------------

void collect_vars(const Term& t, std::vector<Var>& out, std::set<Var>& seen) {
  if (t.is_var()) {
    if (seen.insert(t.as_var()).second) out.push_back(t.as_var());
  } else if (t.is_compound()) {
    for (const Term& a : t.as_compound().args) collect_vars(a, out, seen);
  }
}

static std::vector<Var> vars_of_terms(const std::vector<Term>& ts) {
  std::vector<Var> out;
  std::set<Var> seen;
  for (const Term& t : ts) collect_vars(t, out, seen);
  return out;
}

std::vector<Var> vars_of(const Atom& a) { return vars_of_terms(a.args); }
std::vector<Var> vars_of(const BuiltinLit& l) { return vars_of_terms(l.args); }

std::vector<Var> vars_of(const Literal& l) {
  if (l.is_call()) return vars_of(l.call_atom());
  if (l.is_builtin()) return vars_of(l.as_builtin());
  std::vector<Var> out;
  std::set<Var> seen;
  for (const PropLit& p : l.as_pp_assert().cond)
    for (const Term& t : p.args) collect_vars(t, out, seen);
  return out;
}

std::vector<Var> vars_of(const Clause& c) {
  std::vector<Var> out;
  std::set<Var> seen;
  for (const Term& t : c.head.args) collect_vars(t, out, seen);
  for (const Literal& l : c.body)
    for (const Var& v : vars_of(l))
      if (seen.insert(v).second) out.push_back(v);
  return out;
}

// --- Printing ---------------------------------------------------------------

namespace {

// Prolog-ish operator priorities for minimal-paren printing.
int op_priority(const std::string& f, size_t arity) {
  if (arity == 2) {
    if (f == "+" || f == "-") return 500;
    if (f == "*") return 400;
    if (is_comparison_builtin(f) || f == "is") return 700;
  }
  if (arity == 1 && f == "-") return 200;
  return 0;
}

bool plain_atom_name(const std::string& s) {
  if (s.empty() || !(std::islower(static_cast<unsigned char>(s[0])))) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

void print_term(std::ostringstream& os, const Term& t, int max_prio);

void print_functor(std::ostringstream& os, const std::string& f) {
  if (plain_atom_name(f) || f == "!")
    os << f;
  else
    os << '\'' << f << '\'';
}

void print_args(std::ostringstream& os, const std::vector<Term>& args) {
  os << '(';
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) os << ", ";
    print_term(os, args[i], 999);
  }
  os << ')';
}

void print_term(std::ostringstream& os, const Term& t, int max_prio) {
  if (t.is_var()) {
    os << t.as_var().name;
    return;
  }
  if (t.is_int()) {
    os << t.as_int();
    return;
  }
  const Compound& c = t.as_compound();
  int prio = op_priority(c.functor, c.args.size());
  if (prio > 0 && c.args.size() == 2) {
    bool paren = prio > max_prio;
    if (paren) os << '(';
    // yfx: left arg may have equal priority, right must be lower.
    print_term(os, c.args[0], prio);
    os << ' ' << c.functor << ' ';
    print_term(os, c.args[1], prio - 1);
    if (paren) os << ')';
    return;
  }
  if (prio > 0 && c.args.size() == 1) {
    bool paren = prio > max_prio;
    if (paren) os << '(';
    os << c.functor;
    print_term(os, c.args[0], prio);
    if (paren) os << ')';
    return;
  }
  print_functor(os, c.functor);
  if (!c.args.empty()) print_args(os, c.args);
}

void print_relation(std::ostringstream& os, const std::string& name,
                    const std::vector<Term>& args) {
  if (args.size() == 2 && (is_comparison_builtin(name) || name == "is")) {
    print_term(os, args[0], 699);
    os << ' ' << name << ' ';
    print_term(os, args[1], 699);
    return;
  }
  print_functor(os, name);
  if (!args.empty()) print_args(os, args);
}

void print_conj(std::ostringstream& os, const std::vector<PropLit>& conj) {
  if (conj.empty()) {
    os << "true";
    return;
  }
  for (size_t i = 0; i < conj.size(); ++i) {
    if (i) os << ", ";
    print_relation(os, conj[i].name, conj[i].args);
  }
}

}  // namespace

std::string to_string(const Term& t) {
  std::ostringstream os;
  print_term(os, t, 1200);
  return os.str();
}

std::string to_string(const Atom& a) {
  std::ostringstream os;
  print_functor(os, a.pred);
  if (!a.args.empty()) print_args(os, a.args);
  return os.str();
}

std::string to_string(const BuiltinLit& l) {
  std::ostringstream os;
  print_relation(os, l.name, l.args);
  return os.str();
}

std::string to_string(const Literal& l) {
  if (l.is_call()) return to_string(l.call_atom());
  if (l.is_builtin()) return to_string(l.as_builtin());
  const PpAssertLit& pp = l.as_pp_assert();
  std::ostringstream os;
  os << to_string(pp.status) << '(';
  print_conj(os, pp.cond);
  os << ')';
  return os.str();
}

std::string to_string(const Clause& c) {
  std::ostringstream os;
  os << to_string(c.head);
  if (!c.body.empty()) {
    os << " :- ";
    for (size_t i = 0; i < c.body.size(); ++i) {
      if (i) os << ", ";
      os << to_string(c.body[i]);
    }
  }
  os << '.';
  return os.str();
}

std::string to_string(const PropertyFormula& f) {
  std::ostringstream os;
  if (f.dnf.size() == 1) {
    print_conj(os, f.dnf[0]);
  } else {
    for (size_t i = 0; i < f.dnf.size(); ++i) {
      if (i) os << " ; ";
      os << '(';
      print_conj(os, f.dnf[i]);
      os << ')';
    }
  }
  return os.str();
}

std::string to_string(const SourceAssertion& a) {
  std::ostringstream os;
  os << ":- " << to_string(a.status) << " pred " << to_string(a.head);
  if (!a.pre.is_true()) {
    os << " : ";
    print_conj(os, a.pre.dnf[0]);
  }
  if (!a.post.is_true()) {
    os << " => ";
    print_conj(os, a.post.dnf[0]);
  }
  os << '.';
  return os.str();
}

std::string to_string(const EntryDecl& e) {
  std::ostringstream os;
  os << ":- entry " << to_string(e.head);
  if (!e.pre.is_true()) {
    os << " : ";
    print_conj(os, e.pre.dnf[0]);
  }
  os << '.';
  return os.str();
}

std::string to_string(const Program& p) {
  std::ostringstream os;
  for (const EntryDecl& e : p.entries) os << to_string(e) << '\n';
  for (const SourceAssertion& a : p.assertions) os << to_string(a) << '\n';
  for (const Clause& c : p.clauses) os << to_string(c) << '\n';
  return os.str();
}

}  // namespace hornbeam

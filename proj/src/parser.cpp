#include "hornbeam/parser.hpp"

#include <cctype>
#include <cstring>
#include <optional>
#include <vector>

namespace hornbeam {

namespace {

enum class Tok { Ident, Variable, Integer, Punct, Eof };

struct Token {
  Tok type = Tok::Eof;
  std::string text;
  SourceSpan span;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    skip_layout();
    Token t;
    t.span = {line_, col_};
    if (pos_ >= text_.size()) return t;
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.type = Tok::Integer;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        t.text += take();
      return t;
    }
    if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
      t.type = Tok::Variable;
      while (pos_ < text_.size() && ident_char(text_[pos_])) t.text += take();
      return t;
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      t.type = Tok::Ident;
      while (pos_ < text_.size() && ident_char(text_[pos_])) t.text += take();
      return t;
    }
    if (c == '\'') {
      take();
      t.type = Tok::Ident;
      while (pos_ < text_.size() && text_[pos_] != '\'') t.text += take();
      if (pos_ >= text_.size())
        throw ParseError(ParseError::Kind::Syntax, t.span, "unterminated quoted atom");
      take();
      return t;
    }
    static const char* multi[] = {"=:=", ":-", "=<", ">=", "=>"};
    for (const char* op : multi) {
      size_t n = std::strlen(op);
      if (text_.compare(pos_, n, op) == 0) {
        t.type = Tok::Punct;
        t.text = op;
        for (size_t i = 0; i < n; ++i) take();
        return t;
      }
    }
    static const std::string single = "()[],.:=<>+-*!;";
    if (single.find(c) != std::string::npos) {
      t.type = Tok::Punct;
      t.text = std::string(1, take());
      return t;
    }
    throw ParseError(ParseError::Kind::Syntax, t.span,
                     std::string("unexpected character '") + c + "'");
  }

 private:
  bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  char take() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_layout() {
    for (;;) {
      while (pos_ < text_.size() &&
             std::isspace(static_cast<unsigned char>(text_[pos_])))
        take();
      if (pos_ < text_.size() && text_[pos_] == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') take();
        continue;
      }
      if (pos_ + 1 < text_.size() && text_[pos_] == '/' && text_[pos_ + 1] == '*') {
        SourceSpan start{line_, col_};
        take();
        take();
        while (pos_ + 1 < text_.size() &&
               !(text_[pos_] == '*' && text_[pos_ + 1] == '/'))
          take();
        if (pos_ + 1 >= text_.size())
          throw ParseError(ParseError::Kind::Syntax, start, "unterminated comment");
        take();
        take();
        continue;
      }
      return;
    }
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct OpInfo {
  int prio;
  bool right_assoc;  // xfy
};

std::optional<OpInfo> infix_op(const Token& t) {
  if (t.type == Tok::Punct) {
    if (t.text == ",") return OpInfo{1000, true};
    if (t.text == "=" || t.text == "<" || t.text == ">" || t.text == "=<" ||
        t.text == ">=" || t.text == "=:=")
      return OpInfo{700, false};
    if (t.text == "+" || t.text == "-") return OpInfo{500, false};
    if (t.text == "*") return OpInfo{400, false};
  }
  if (t.type == Tok::Ident && t.text == "is") return OpInfo{700, false};
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) { advance(); }

  Program parse() {
    Program p;
    p.builtin_registry = default_builtin_registry();
    while (cur_.type != Tok::Eof) {
      if (is_punct(":-"))
        parse_directive(p);
      else
        parse_clause(p);
    }
    group_clauses(p);
    resolve_warnings(p);
    return p;
  }

  Atom parse_single_atom() {
    Term t = parse_term(999);
    expect_eof();
    return term_to_atom(t, {1, 1});
  }

  EntryDecl parse_entry_tail() {
    EntryDecl e = parse_entry_body();
    expect_eof();
    return e;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  bool is_punct(const std::string& s) const {
    return cur_.type == Tok::Punct && cur_.text == s;
  }
  bool is_ident(const std::string& s) const {
    return cur_.type == Tok::Ident && cur_.text == s;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(ParseError::Kind::Syntax, cur_.span, msg);
  }

  void expect_punct(const std::string& s) {
    if (!is_punct(s)) fail("expected '" + s + "'");
    advance();
  }

  void expect_eof() {
    if (cur_.type != Tok::Eof) fail("trailing input");
  }

  Var fresh_anon() { return Var{"_G" + std::to_string(anon_counter_++)}; }

  // --- term expressions ---

  Term parse_term(int max_prio) {
    Term left = parse_primary();
    for (;;) {
      auto op = infix_op(cur_);
      if (!op || op->prio > max_prio) return left;
      std::string name = cur_.text;
      advance();
      int sub = op->right_assoc ? op->prio : op->prio - 1;
      Term right = parse_term(sub);
      left = Term::compound(name, {std::move(left), std::move(right)});
    }
  }

  std::int64_t integer_value() {
    try {
      return std::stoll(cur_.text);
    } catch (const std::out_of_range&) {
      fail("integer literal out of range");
    }
  }

  Term parse_primary() {
    if (cur_.type == Tok::Integer) {
      std::int64_t v = integer_value();
      advance();
      return Term::integer(v);
    }
    if (cur_.type == Tok::Variable) {
      std::string name = cur_.text;
      advance();
      if (name == "_") return Term::var(fresh_anon());
      return Term::var(name);
    }
    if (is_punct("-")) {
      advance();
      if (cur_.type == Tok::Integer) {
        std::int64_t v = integer_value();
        advance();
        return Term::integer(-v);
      }
      return Term::compound("-", {parse_term(200)});
    }
    if (is_punct("(")) {
      advance();
      Term t = parse_term(1200);
      expect_punct(")");
      return t;
    }
    if (is_punct("!")) {
      advance();
      return Term::compound("!", {});
    }
    if (cur_.type == Tok::Ident) {
      std::string name = cur_.text;
      advance();
      if (is_punct("(")) {
        advance();
        std::vector<Term> args;
        args.push_back(parse_term(999));
        while (is_punct(",")) {
          advance();
          args.push_back(parse_term(999));
        }
        expect_punct(")");
        return Term::compound(name, std::move(args));
      }
      return Term::compound(name, {});
    }
    fail("expected a term");
  }

  // --- structure classification ---

  static void flatten_conj(const Term& t, std::vector<Term>& out) {
    if (t.is_compound() && t.as_compound().functor == "," &&
        t.as_compound().args.size() == 2) {
      flatten_conj(t.as_compound().args[0], out);
      flatten_conj(t.as_compound().args[1], out);
      return;
    }
    out.push_back(t);
  }

  Atom term_to_atom(const Term& t, SourceSpan where) const {
    if (!t.is_compound())
      throw ParseError(ParseError::Kind::Syntax, where, "expected an atom");
    const Compound& c = t.as_compound();
    return Atom{c.functor, c.args};
  }

  static std::optional<AssertStatus> status_of(const std::string& name) {
    if (name == "trust") return AssertStatus::Trust;
    if (name == "check") return AssertStatus::Check;
    if (name == "sample_check") return AssertStatus::SampleCheck;
    return std::nullopt;
  }

  PropLit term_to_prop(const Term& t, SourceSpan where) const {
    if (!t.is_compound())
      throw ParseError(ParseError::Kind::Syntax, where,
                       "expected a property literal");
    const Compound& c = t.as_compound();
    PropLit l{c.functor, c.args};
    if (!is_property_name(l.pred_id()))
      throw ParseError(ParseError::Kind::Syntax, where,
                       "unsupported property literal '" + l.pred_id().str() +
                           "' (properties must be built-in: int/1, nat/1, "
                           "even/1 or a comparison)");
    return l;
  }

  std::vector<PropLit> parse_prop_conj() {
    SourceSpan where = cur_.span;
    Term t = parse_term(1200);
    std::vector<Term> parts;
    flatten_conj(t, parts);
    std::vector<PropLit> out;
    if (parts.size() == 1 && parts[0].is_compound() &&
        parts[0].as_compound().functor == "true" &&
        parts[0].as_compound().args.empty())
      return out;
    out.reserve(parts.size());
    for (const Term& part : parts) out.push_back(term_to_prop(part, where));
    return out;
  }

  Literal classify_body_literal(const Term& t, SourceSpan where) {
    if (!t.is_compound())
      throw ParseError(ParseError::Kind::Syntax, where,
                       "body literal must be an atom or builtin");
    const Compound& c = t.as_compound();
    if (auto st = status_of(c.functor); st && c.args.size() == 1) {
      std::vector<Term> parts;
      flatten_conj(c.args[0], parts);
      std::vector<PropLit> cond;
      cond.reserve(parts.size());
      for (const Term& part : parts) cond.push_back(term_to_prop(part, where));
      return Literal::pp_assert(*st, std::move(cond));
    }
    PredId id{c.functor, static_cast<int>(c.args.size())};
    if (default_builtin_registry().contains(id))
      return Literal::builtin(c.functor, c.args);
    return Literal::call(Atom{c.functor, c.args});
  }

  // --- items ---

  void parse_clause(Program& p) {
    SourceSpan start = cur_.span;
    Term h = parse_term(999);
    Clause cl;
    cl.span = start;
    cl.head = term_to_atom(h, start);
    if (default_builtin_registry().contains(cl.head.pred_id()))
      throw ParseError(ParseError::Kind::Syntax, start,
                       "clause head redefines builtin " + cl.head.pred_id().str());
    if (is_punct(":-")) {
      advance();
      SourceSpan bodyspan = cur_.span;
      Term b = parse_term(1200);
      std::vector<Term> parts;
      flatten_conj(b, parts);
      for (const Term& part : parts)
        cl.body.push_back(classify_body_literal(part, bodyspan));
    }
    expect_punct(".");
    p.clauses.push_back(std::move(cl));
  }

  AssertStatus parse_status_keyword() {
    // Accepts trust | check | sample_check, and the hyphenated spelling
    // sample-check in directive position.
    std::string name = cur_.text;
    SourceSpan where = cur_.span;
    advance();
    if (name == "sample" && is_punct("-")) {
      advance();
      if (!is_ident("check"))
        throw ParseError(ParseError::Kind::UnknownStatus, where,
                         "unknown assertion status 'sample-" + cur_.text + "'");
      advance();
      return AssertStatus::SampleCheck;
    }
    if (auto st = status_of(name)) return *st;
    throw ParseError(ParseError::Kind::UnknownStatus, where,
                     "unknown assertion status '" + name + "'");
  }

  Atom parse_assertion_head(const char* what) {
    SourceSpan where = cur_.span;
    Term h = parse_term(699);
    Atom head = term_to_atom(h, where);
    if (!head.is_normalized())
      throw ParseError(ParseError::Kind::Syntax, where,
                       std::string(what) + " head must be a normalized atom "
                                           "(distinct variables)");
    return head;
  }

  void check_formula_vars(const PropertyFormula& f, const Atom& head,
                          SourceSpan where, const char* what) {
    std::set<Var> hv;
    for (const Term& t : head.args) hv.insert(t.as_var());
    for (const Var& v : f.vars())
      if (!hv.contains(v))
        throw ParseError(ParseError::Kind::Syntax, where,
                         std::string(what) + " mentions variable " + v.name +
                             " not in the head");
  }

  EntryDecl parse_entry_body() {
    EntryDecl e;
    e.span = cur_.span;
    e.head = parse_assertion_head("entry");
    if (is_punct(":")) {
      advance();
      e.pre = PropertyFormula::conj(parse_prop_conj());
    }
    check_formula_vars(e.pre, e.head, e.span, "entry precondition");
    return e;
  }

  void parse_directive(Program& p) {
    SourceSpan start = cur_.span;
    expect_punct(":-");
    if (cur_.type != Tok::Ident) fail("expected directive keyword");
    if (is_ident("entry")) {
      advance();
      EntryDecl e = parse_entry_body();
      e.span = start;
      expect_punct(".");
      p.entries.push_back(std::move(e));
      return;
    }
    SourceAssertion a;
    a.span = start;
    if (is_ident("pred")) {
      a.status = AssertStatus::Check;  // default status
    } else {
      a.status = parse_status_keyword();
    }
    if (!is_ident("pred")) fail("expected 'pred'");
    advance();
    a.head = parse_assertion_head("assertion");
    if (is_punct(":")) {
      advance();
      a.pre = PropertyFormula::conj(parse_prop_conj());
    }
    if (is_punct("=>")) {
      advance();
      a.post = PropertyFormula::conj(parse_prop_conj());
    }
    check_formula_vars(a.pre, a.head, a.span, "assertion precondition");
    check_formula_vars(a.post, a.head, a.span, "assertion postcondition");
    expect_punct(".");
    p.assertions.push_back(std::move(a));
  }

  // Clauses of one predicate are kept contiguous, in first-appearance order
  // of the predicates; relative clause order within a predicate is preserved.
  void group_clauses(Program& p) {
    std::vector<PredId> order;
    std::map<PredId, std::vector<Clause>> groups;
    for (Clause& c : p.clauses) {
      PredId id = c.head.pred_id();
      if (!groups.contains(id)) order.push_back(id);
      groups[id].push_back(std::move(c));
    }
    p.clauses.clear();
    for (const PredId& id : order)
      for (Clause& c : groups[id]) p.clauses.push_back(std::move(c));
  }

  // Flags calls to predicates that are neither defined, builtin, nor covered
  // by an analyzer-usable (trust/check) assertion.
  void resolve_warnings(Program& p) {
    std::set<PredId> defined = p.defined_preds();
    std::set<PredId> asserted;
    for (const SourceAssertion& a : p.assertions)
      if (a.status != AssertStatus::SampleCheck)
        asserted.insert(a.head.pred_id());
    std::set<PredId> flagged;
    auto check_pred = [&](const PredId& id, const char* how) {
      if (defined.contains(id) || p.is_builtin(id) || asserted.contains(id))
        return;
      if (flagged.insert(id).second)
        p.warnings.push_back("predicate " + id.str() + " is " + how +
                             " but has no clauses, is not a builtin, and has "
                             "no trust/check assertion");
    };
    for (const Clause& c : p.clauses)
      for (const Literal& l : c.body)
        if (l.is_call()) check_pred(l.call_atom().pred_id(), "called");
    for (const EntryDecl& e : p.entries)
      check_pred(e.head.pred_id(), "declared as entry");
    for (const SourceAssertion& a : p.assertions)
      if (p.is_builtin(a.head.pred_id()))
        p.warnings.push_back("assertion on builtin " + a.head.pred_id().str() +
                             " is ignored during analysis");
  }

  Lexer lex_;
  Token cur_;
  int anon_counter_ = 0;
};

}  // namespace

Program parse_program(const std::string& text) {
  return Parser(text).parse();
}

Atom parse_goal_atom(const std::string& text) {
  return Parser(text).parse_single_atom();
}

EntryDecl parse_entry_spec(const std::string& text) {
  return Parser(text).parse_entry_tail();
}

}  // namespace hornbeam

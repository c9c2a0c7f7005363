#pragma once

#include <stdexcept>
#include <string>

#include "hornbeam/chc.hpp"

namespace hornbeam {

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnknownStatus };

  ParseError(Kind kind, SourceSpan where, const std::string& msg)
      : std::runtime_error("<" + std::to_string(where.line) + "," +
                           std::to_string(where.column) + ">: " + msg),
        kind(kind),
        where(where) {}

  Kind kind;
  SourceSpan where;
};

// Parses a whole program in the surface syntax. Unresolved predicates are
// recorded as warnings on the returned Program, not errors.
Program parse_program(const std::string& text);

// Helpers for CLI arguments.
Atom parse_goal_atom(const std::string& text);
EntryDecl parse_entry_spec(const std::string& text);

}  // namespace hornbeam

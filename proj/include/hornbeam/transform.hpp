#pragma once

#include "hornbeam/chc.hpp"

namespace hornbeam {

// Rewrites every non-builtin head and call atom to carry pairwise-distinct
// variables, inserting equality builtins to preserve semantics. Idempotent.
Program normalize(const Program& p);

// Replaces each program-point assertion with a call to a fresh always-true
// auxiliary predicate plus a generated pred assertion of the same status.
Program lower_pp_assertions(const Program& p);

}  // namespace hornbeam

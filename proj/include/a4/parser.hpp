#pragma once

#include <string>

#include "a4/ast.hpp"

namespace a4 {

// Tolerant parse of the supported Java-style subset. Never fails: anything
// outside the subset is captured as OpaqueExpr with a diagnostic, and
// unresolvable declared types are flagged as diagnostics. A parse is
// Partial exactly when at least one diagnostic was recorded.
ParseResult parse(std::string source);

}  // namespace a4

#pragma once

#include "hypersym/expr.hpp"

#include <string>

namespace hypersym {

/// Infix rendering in the input grammar; parse(render(e)) == e for canonical
/// forms when the same declarations are in scope.
std::string render(const Expr& e);

} // namespace hypersym

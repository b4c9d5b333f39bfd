#pragma once

#include "hypersym/context.hpp"
#include "hypersym/expr.hpp"

#include <json.hpp>

namespace hypersym {

/// Stable JSON tree encoding: {"kind": ..., "value"/"name"/"children": ...}.
nlohmann::json expr_to_json(const Expr& e);

/// Rebuild through the canonical builders; function symbols are registered in
/// (or looked up from) `ctx` by name.
Expr expr_from_json(const nlohmann::json& j, Context& ctx);

} // namespace hypersym

#pragma once

#include "hypersym/context.hpp"
#include "hypersym/expr.hpp"

#include <optional>
#include <string>

namespace hypersym {

struct ParseError : KernelError {
    size_t offset;
    ParseError(const std::string& msg, size_t off)
        : KernelError(msg + " at offset " + std::to_string(off)), offset(off) {}
};

/// Jet-aware identifier handling: `dep` with derivative suffixes over the two
/// independent variables parses to jet variables (u_x, u_xy, ...).
struct JetNames {
    std::string x = "x";
    std::string y = "y";
    std::string dep = "u";
    int max_order = 5;
};

/// Parse an expression, optionally preceded by declarations:
///   func F(u); func xi(x); param alpha; var t;  <expression>
/// Unknown identifiers become parameters; identifiers followed by `(` are
/// auto-declared as opaque function symbols.
Expr parse(const std::string& text, Context& ctx,
           const std::optional<JetNames>& jets = std::nullopt);

/// Convenience: parse in a throwaway context with default jet names (x, y, u).
Expr parse_jet(const std::string& text);

} // namespace hypersym

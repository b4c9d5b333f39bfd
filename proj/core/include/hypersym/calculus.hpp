#pragma once

#include "hypersym/expr.hpp"

#include <functional>
#include <map>
#include <string>

namespace hypersym {

/// Derivative of each symbol under the derivation being applied; anything not
/// in the map differentiates to zero. Chain rule is applied through function
/// applications, powers and the elementary wrappers.
using SymbolDerivs = std::function<Expr(const Node& symbol)>;

Expr derive_generic(const Expr& e, const SymbolDerivs& d);

/// Partial derivative with respect to variable `v` (other symbols constant).
Expr derive(const Expr& e, const std::string& v);

struct CircularBindingError : KernelError {
    using KernelError::KernelError;
};

/// Simultaneous substitution. Symbol bindings replace free symbols; function
/// bindings replace applications of the named opaque symbol by derivatives of
/// the bound closed form evaluated at the (substituted) arguments.
struct Bindings {
    std::map<std::string, Expr> symbols;
    std::map<std::string, FuncPtr> functions; // name -> symbol carrying a body
};

Expr substitute(const Expr& e, const Bindings& b);

} // namespace hypersym

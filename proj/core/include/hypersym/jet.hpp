#pragma once

#include "hypersym/calculus.hpp"
#include "hypersym/expr.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hypersym {

struct OrderBoundError : KernelError {
    using KernelError::KernelError;
};

/// Multi-index (i, j): d^{i+j} u / dx^i dy^j; (0,0) is u itself.
struct JetCoordinate {
    int i = 0;
    int j = 0;
    int order() const { return i + j; }
    auto operator<=>(const JetCoordinate&) const = default;
};

/// Names the jet bundle: two independent variables and one dependent variable.
/// Jet coordinates are variables named dep, dep_x, dep_xy, ... with all
/// x-suffixes before y-suffixes.
struct JetContext {
    std::string x = "x";
    std::string y = "y";
    std::string dep = "u";
    int max_order = 5;

    std::string jet_name(JetCoordinate c) const;
    Expr jet(JetCoordinate c) const;
    /// Parses a variable name; nullopt when it is not a jet of this bundle.
    std::optional<JetCoordinate> parse_jet(const std::string& name) const;
};

/// Total derivative along axis 0 (x) or 1 (y).
Expr total_derivative(const Expr& e, int axis, const JetContext& ctx);

struct PointVectorField {
    Expr xi;  // coefficient of d/dx
    Expr eta; // coefficient of d/dy
    Expr phi; // coefficient of d/du
};

struct ProlongedField {
    PointVectorField base;
    std::map<JetCoordinate, Expr> coeff; // phi^(i,j) for 1 <= i+j <= 2
};

/// Second prolongation by the characteristic formula
///   W = phi - xi u_x - eta u_y,
///   phi^(i,j) = D_x^i D_y^j W + xi u_{i+1,j} + eta u_{i,j+1}.
ProlongedField prolong2(const PointVectorField& v, const JetContext& ctx);

/// Apply the prolonged field as a derivation to a differential function of
/// order <= 2.
Expr apply_prolonged(const ProlongedField& pr, const Expr& e, const JetContext& ctx);

/// Variational derivative sum_(i,j) (-D_x)^i (-D_y)^j d/du_(i,j).
Expr euler_u(const Expr& e, const JetContext& ctx);

/// The equation u_{xy} = rhs (rhs free of mixed jets), plus optional side
/// relations on named opaque symbols: every mixed derivative of the symbol
/// rewrites via sym_{xy} = rhs.
struct EquationSpec {
    Expr rhs;
    JetContext ctx;
};

struct SideRelation {
    std::string fname;
    Expr rhs; // expression in the symbol's own applications
};

Expr reduce_mod_equation(const Expr& e, const EquationSpec& eq,
                         const std::vector<SideRelation>& siderels = {});

/// Residual of the infinitesimal symmetry criterion for u_{xy} = rhs:
/// pr^(2) v (u_xy - rhs), reduced modulo the equation.
Expr mixed_equation_symmetry_residual(const EquationSpec& eq, const PointVectorField& v,
                                      const std::vector<SideRelation>& siderels = {});

/// Post-order rebuild with a hook: when `hook` returns an expression for a
/// (rebuilt) subterm, that expression replaces it.
Expr rewrite_nodes(const Expr& e, const std::function<std::optional<Expr>(const Expr&)>& hook);

} // namespace hypersym

#pragma once

#include "hypersym/context.hpp"
#include "hypersym/jet.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace hypersym {

enum class FMode { OpaqueOfU, OpaqueOfUx, ClosedForm };

/// The labelling function of the family u_xy = F.
struct FSpec {
    FMode mode = FMode::OpaqueOfU;
    Expr body;   // closed form over (u, u_x)
    FuncPtr fsym; // opaque symbol when not closed-form

    static FSpec opaque_of_u(const std::string& name = "F");
    static FSpec opaque_of_ux(const std::string& name = "F");
    static FSpec closed_form(Expr body);

    /// Right-hand side expression F(u) / F(u_x) / body.
    Expr rhs(const JetContext& ctx) const;
    EquationSpec equation(const JetContext& ctx) const;
};

struct BasisIncompleteError : KernelError {
    using KernelError::KernelError;
};

/// Coefficients of `e` over monomials in the listed variables; keys are the
/// monomials, values the (variable-free) coefficients.
struct ExprCmp {
    bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};
std::map<Expr, Expr, ExprCmp> collect_monomials(const Expr& e,
                                                const std::vector<std::string>& basis);

/// pr^(2) v (u_xy - F) reduced modulo the equation; zero iff v is a symmetry.
Expr symmetry_residual(const FSpec& f, const PointVectorField& v, const JetContext& ctx,
                       const std::vector<SideRelation>& siderels = {});

struct DeterminingSystem {
    std::vector<std::string> unknowns; // rendered declarations
    std::vector<Expr> constraints;     // expressions required to vanish
    Expr residual;                     // the single remaining equation
    // stage symbols, exposed for round-trip testing
    FuncPtr xi, eta, g, h;
    Expr g_value; // constant A substituted for g in the F(u) family
};

/// Generate the determining equations for the generic point field, split them
/// over the jet monomial basis, and reduce to the single residual equation.
/// Mirrors the two-stage flow: generic components first, then the re-expressed
/// field xi(x), eta(y), phi = g u + h.
DeterminingSystem split_system(const FSpec& f, const JetContext& ctx);

/// The principal (arbitrary-F) symmetry family.
PointVectorField arbitrary_F_symmetries(const FSpec& f, const JetContext& ctx);

} // namespace hypersym

#pragma once

#include "hypersym/detsys.hpp"

#include <string>
#include <vector>

namespace hypersym {

struct FluxVector {
    Expr phi; // x-component
    Expr psi; // y-component
};

/// E_u(q * (u_xy - F)), unreduced; zero iff q is a conservation-law multiplier.
Expr multiplier_residual(const Expr& q, const FSpec& f, const JetContext& ctx);

enum class MultiplierAnsatz { QOfUx, QOfUy };

struct MultiplierSystem {
    FuncPtr qsym;              // the opaque Q(x, y, u, u_x) (or u_y)
    std::vector<Expr> pieces;  // jet-monomial split of E_u(Q Delta), normalized
};

/// Split E_u(Q Delta) over monomials in the jets Q does not depend on.
MultiplierSystem multiplier_determining_system(const FSpec& f, MultiplierAnsatz ansatz,
                                               const JetContext& ctx);

/// D_x Phi + D_y Psi - q (u_xy - F) as a jet-space identity.
Expr flux_residual(const FluxVector& th, const Expr& q, const FSpec& f,
                   const JetContext& ctx);

struct HomotopyError : KernelError {
    using KernelError::KernelError;
};

/// Invert q*Delta into a flux pair by structured integration by parts.
/// Supported shapes cover low-order multipliers whose monomials separate as
/// c(x,y,u) * f(u_x) or c(x,y,u) * g(u_y); anything else raises HomotopyError.
FluxVector homotopy_flux(const Expr& q, const FSpec& f, const JetContext& ctx);

/// True iff D_x Phi + D_y Psi vanishes identically (no use of the equation).
bool is_trivial_flux(const FluxVector& th, const JetContext& ctx);

/// Re-derive the flux from its multiplier, dropping any trivial part; returns
/// the input unchanged (flag false) when the inverter cannot handle it.
struct NormalizedFlux {
    FluxVector flux;
    bool normalized = false;
};
NormalizedFlux normalize_flux(const FluxVector& th, const Expr& q, const FSpec& f,
                              const JetContext& ctx);

/// Jet bundle of the multiplier equation for u_xy = u_x^2: coordinates (z, y),
/// dependent variable T.
JetContext t_equation_context();

/// 2T + 4 z T_z + z^2 T_zz + T_zy with the closed form t(z, y) substituted.
Expr t_equation_residual(const Expr& t);

/// Infinitesimal invariance of the T-equation under a point field on (z,y,T).
bool verify_t_symmetry(const PointVectorField& v);
Expr t_symmetry_residual(const PointVectorField& v);

/// Rule-based antiderivative in one variable (powers, ln from 1/v, exp of a
/// linear argument, opaque applications of the variable); HomotopyError when
/// a factor falls outside the rules.
Expr integrate_in_var(const Expr& e, const std::string& var, Context* antiderivs = nullptr);

} // namespace hypersym

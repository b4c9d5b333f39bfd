#include "hypersym/claws.hpp"

#include "hypersym/calculus.hpp"

#include <set>

namespace hypersym {

Expr multiplier_residual(const Expr& q, const FSpec& f, const JetContext& ctx) {
    Expr delta = ctx.jet({1, 1}) - f.rhs(ctx);
    return euler_u(q * delta, ctx);
}

namespace {

void collect_jets(const Expr& e, const JetContext& ctx, std::set<JetCoordinate>& out) {
    const Node& n = e.node();
    if (n.kind == Kind::Symbol) {
        if (auto c = ctx.parse_jet(n.name)) out.insert(*c);
    }
    for (const auto& k : n.kids) collect_jets(k, ctx, out);
}

Expr normalize_leading(const Expr& e) {
    if (e.is_zero()) return e;
    Factorization f = factorize_term(terms_of(e)[0]);
    if (f.coef.is_one()) return e;
    return make_rat(Rational(1) / f.coef) * e;
}

} // namespace

MultiplierSystem multiplier_determining_system(const FSpec& f, MultiplierAnsatz ansatz,
                                               const JetContext& ctx) {
    if (f.mode != FMode::OpaqueOfU)
        throw KernelError("multiplier determining system is set up for opaque F(u)");
    MultiplierSystem sys;
    auto q = std::make_shared<FunctionSymbol>();
    q->name = "Q";
    q->params = {ctx.x, ctx.y, ctx.dep, "v"};
    sys.qsym = q;
    JetCoordinate qjet = ansatz == MultiplierAnsatz::QOfUx ? JetCoordinate{1, 0}
                                                           : JetCoordinate{0, 1};
    Expr qapp = make_app0(q, {make_var(ctx.x), make_var(ctx.y), ctx.jet({0, 0}), ctx.jet(qjet)});
    Expr E = multiplier_residual(qapp, f, ctx);

    std::set<JetCoordinate> jets;
    collect_jets(E, ctx, jets);
    std::vector<std::string> basis;
    for (const auto& c : jets)
        if (c.order() >= 1 && !(c == qjet)) basis.push_back(ctx.jet_name(c));
    for (const auto& [key, coeff] : collect_monomials(E, basis)) {
        for (const auto& b : basis)
            if (depends_on(coeff, b))
                throw BasisIncompleteError("coefficient still contains " + b);
        sys.pieces.push_back(normalize_leading(coeff));
    }
    return sys;
}

Expr flux_residual(const FluxVector& th, const Expr& q, const FSpec& f,
                   const JetContext& ctx) {
    Expr delta = ctx.jet({1, 1}) - f.rhs(ctx);
    return total_derivative(th.phi, 0, ctx) + total_derivative(th.psi, 1, ctx) - q * delta;
}

bool is_trivial_flux(const FluxVector& th, const JetContext& ctx) {
    return (total_derivative(th.phi, 0, ctx) + total_derivative(th.psi, 1, ctx)).is_zero();
}

// ---------------------------------------------------------------------
// rule-based antiderivative
// ---------------------------------------------------------------------

Expr integrate_in_var(const Expr& e, const std::string& var, Context* antiderivs) {
    std::vector<Expr> parts;
    for (const auto& t : terms_of(e)) {
        Factorization fz = factorize_term(t);
        Rational pow_acc(0);
        bool has_pow = false;
        Expr exp_arg;     // argument of an exp factor depending on var
        Expr app_factor;  // opaque application of var
        std::vector<Expr> rest;
        for (const auto& fac : fz.factors) {
            if (!depends_on(fac, var)) {
                rest.push_back(fac);
                continue;
            }
            if (fac.kind() == Kind::Symbol) {
                pow_acc += Rational(1);
                has_pow = true;
            } else if (fac.kind() == Kind::Pow && fac.kids()[0].kind() == Kind::Symbol &&
                       fac.kids()[0].sym_name() == var &&
                       fac.kids()[1].kind() == Kind::Rational) {
                pow_acc += fac.kids()[1].rat();
                has_pow = true;
            } else if (fac.kind() == Kind::Exp) {
                Expr a = derive(fac.kids()[0], var);
                if (a.is_zero() || depends_on(a, var) || !exp_arg.is_null())
                    throw HomotopyError("exp factor outside the integration rules");
                exp_arg = fac.kids()[0];
            } else if (fac.kind() == Kind::FuncApp) {
                bool ok = app_factor.is_null();
                int var_slot = -1;
                for (size_t i = 0; i < fac.kids().size(); ++i) {
                    const Expr& a = fac.kids()[i];
                    if (a.kind() == Kind::Symbol && a.sym_name() == var) {
                        ok = ok && var_slot < 0;
                        var_slot = static_cast<int>(i);
                    } else if (depends_on(a, var)) {
                        ok = false;
                    }
                }
                if (!ok || var_slot < 0)
                    throw HomotopyError("opaque application outside the integration rules");
                // store with the slot encoded: antiderivative handled below
                app_factor = fac;
            } else {
                throw HomotopyError("factor outside the integration rules: cannot integrate");
            }
        }
        int var_kinds = (has_pow && !pow_acc.is_zero() ? 1 : 0) + (exp_arg.is_null() ? 0 : 1) +
                        (app_factor.is_null() ? 0 : 1);
        if (var_kinds > 1)
            throw HomotopyError("mixed factor shapes in one term: cannot integrate");
        Expr restm = assemble_term(fz.coef, rest);
        if (!exp_arg.is_null()) {
            Expr a = derive(exp_arg, var);
            parts.push_back(restm * make_exp(exp_arg) / a);
        } else if (!app_factor.is_null()) {
            const Node& an = app_factor.node();
            int slot = -1;
            for (size_t i = 0; i < an.kids.size(); ++i)
                if (an.kids[i].kind() == Kind::Symbol && an.kids[i].sym_name() == var)
                    slot = static_cast<int>(i);
            std::vector<int> idx = an.idx;
            if (idx[slot] >= 1) {
                idx[slot] -= 1;
                parts.push_back(restm * make_app(an.fn, std::move(idx), an.kids));
            } else {
                if (!antiderivs)
                    throw HomotopyError("needs an antiderivative symbol for " + an.fn->name);
                std::string iname = an.fn->name + "int";
                FuncPtr fint = antiderivs->find_func(iname);
                if (!fint) fint = antiderivs->declare_antideriv(iname, an.fn, slot);
                parts.push_back(restm * make_app(fint, std::move(idx), an.kids));
            }
        } else if (has_pow && pow_acc == Rational(-1)) {
            parts.push_back(restm * make_ln(make_var(var)));
        } else {
            // power rule; pow_acc may be 0 (plain c dv -> c v)
            Rational k1 = pow_acc + Rational(1);
            parts.push_back(restm * make_pow(make_var(var), make_rat(pow_acc + Rational(1))) /
                            make_rat(k1));
        }
    }
    return make_add(std::move(parts));
}

// ---------------------------------------------------------------------
// divergence inversion
// ---------------------------------------------------------------------

FluxVector homotopy_flux(const Expr& q, const FSpec& f, const JetContext& ctx) {
    Context antiderivs;
    const std::string ux = ctx.jet_name({1, 0});
    const std::string uy = ctx.jet_name({0, 1});
    const std::string uxy = ctx.jet_name({1, 1});

    Expr R = q * (ctx.jet({1, 1}) - f.rhs(ctx));
    Expr Phi = make_int(0), Psi = make_int(0);

    // mixed-derivative terms: c(...,u_x) u_xy -> Psi, c(...,u_y) u_xy -> Phi
    std::vector<Expr> mixed, plain;
    for (const auto& t : terms_of(R))
        (depends_on(t, uxy) ? mixed : plain).push_back(t);
    for (const auto& t : mixed) {
        Factorization fz = factorize_term(t);
        std::vector<Expr> cf;
        int deg = 0;
        for (const auto& fac : fz.factors) {
            if (fac.kind() == Kind::Symbol && fac.sym_name() == uxy) deg++;
            else if (depends_on(fac, uxy))
                throw HomotopyError("nonlinear mixed-derivative dependence");
            else cf.push_back(fac);
        }
        if (deg != 1) throw HomotopyError("nonlinear mixed-derivative dependence");
        Expr c = assemble_term(fz.coef, cf);
        bool on_ux = depends_on(c, ux), on_uy = depends_on(c, uy);
        if (on_ux && on_uy)
            throw HomotopyError("multiplier mixes u_x and u_y in one monomial");
        if (on_uy) Phi = Phi + integrate_in_var(c, uy, &antiderivs);
        else Psi = Psi + integrate_in_var(c, ux, &antiderivs);
    }
    R = R - total_derivative(Phi, 0, ctx) - total_derivative(Psi, 1, ctx);

    std::set<JetCoordinate> jets;
    collect_jets(R, ctx, jets);
    for (const auto& c : jets)
        if (c.order() >= 2)
            throw HomotopyError("second-order jets survive the first inversion step");

    // first-order terms: c(x,y,u) u_x -> d/dx of an antiderivative in u
    for (int pass = 0; pass < 32 && !R.is_zero(); ++pass) {
        Expr target;
        bool along_x = true;
        for (const auto& t : terms_of(R)) {
            if (depends_on(t, ux)) { target = t; along_x = true; break; }
            if (depends_on(t, uy)) { target = t; along_x = false; break; }
        }
        if (target.is_null()) break;
        Factorization fz = factorize_term(target);
        std::vector<Expr> cf;
        int deg = 0;
        const std::string& jv = along_x ? ux : uy;
        for (const auto& fac : fz.factors) {
            if (fac.kind() == Kind::Symbol && fac.sym_name() == jv) deg++;
            else if (depends_on(fac, jv))
                throw HomotopyError("nonlinear first-order jet dependence");
            else cf.push_back(fac);
        }
        Expr c = assemble_term(fz.coef, cf);
        if (deg != 1 || depends_on(c, along_x ? uy : ux))
            throw HomotopyError("first-order term outside the inverter's shapes");
        Expr C = integrate_in_var(c, ctx.dep, &antiderivs);
        if (along_x) {
            Phi = Phi + C;
            R = R - total_derivative(C, 0, ctx);
        } else {
            Psi = Psi + C;
            R = R - total_derivative(C, 1, ctx);
        }
    }

    if (!R.is_zero()) {
        // explicit remainder c(x,y)
        if (depends_on(R, ctx.dep))
            throw HomotopyError("u-dependent remainder is not a divergence the rules cover");
        try {
            Expr C = integrate_in_var(R, ctx.x, &antiderivs);
            Phi = Phi + C;
            R = R - total_derivative(C, 0, ctx);
        } catch (const HomotopyError&) {
            Expr C = integrate_in_var(R, ctx.y, &antiderivs);
            Psi = Psi + C;
            R = R - total_derivative(C, 1, ctx);
        }
    }
    if (!R.is_zero()) throw HomotopyError("remainder did not vanish");
    return {Phi, Psi};
}

NormalizedFlux normalize_flux(const FluxVector& th, const Expr& q, const FSpec& f,
                              const JetContext& ctx) {
    try {
        FluxVector pure = homotopy_flux(q, f, ctx);
        return {pure, true};
    } catch (const HomotopyError&) {
        return {th, false};
    }
}

// ---------------------------------------------------------------------
// the multiplier equation of u_xy = u_x^2
// ---------------------------------------------------------------------

JetContext t_equation_context() {
    JetContext t;
    t.x = "z";
    t.y = "y";
    t.dep = "T";
    return t;
}

Expr t_equation_residual(const Expr& t) {
    Expr z = make_var("z");
    Expr tz = derive(t, "z");
    return make_int(2) * t + make_int(4) * z * tz + z * z * derive(tz, "z") +
           derive(tz, "y");
}

Expr t_symmetry_residual(const PointVectorField& v) {
    JetContext ctx = t_equation_context();
    Expr z = make_var("z");
    Expr T = ctx.jet({0, 0});
    Expr rhs = -(make_int(2) * T + make_int(4) * z * ctx.jet({1, 0}) +
                 z * z * ctx.jet({2, 0}));
    return mixed_equation_symmetry_residual({rhs, ctx}, v);
}

bool verify_t_symmetry(const PointVectorField& v) { return t_symmetry_residual(v).is_zero(); }

} // namespace hypersym

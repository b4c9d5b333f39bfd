#include "hypersym/detsys.hpp"

namespace hypersym {

FSpec FSpec::opaque_of_u(const std::string& name) {
    FSpec f;
    f.mode = FMode::OpaqueOfU;
    auto s = std::make_shared<FunctionSymbol>();
    s->name = name;
    s->params = {"u"};
    f.fsym = std::move(s);
    return f;
}

FSpec FSpec::opaque_of_ux(const std::string& name) {
    FSpec f;
    f.mode = FMode::OpaqueOfUx;
    auto s = std::make_shared<FunctionSymbol>();
    s->name = name;
    s->params = {"v"}; // single formal slot; applied to u_x
    f.fsym = std::move(s);
    return f;
}

FSpec FSpec::closed_form(Expr body) {
    FSpec f;
    f.mode = FMode::ClosedForm;
    f.body = std::move(body);
    return f;
}

Expr FSpec::rhs(const JetContext& ctx) const {
    switch (mode) {
    case FMode::OpaqueOfU: return make_app(fsym, {0}, {ctx.jet({0, 0})});
    case FMode::OpaqueOfUx: return make_app(fsym, {0}, {ctx.jet({1, 0})});
    case FMode::ClosedForm: return body;
    }
    throw KernelError("unreachable");
}

EquationSpec FSpec::equation(const JetContext& ctx) const { return {rhs(ctx), ctx}; }

Expr symmetry_residual(const FSpec& f, const PointVectorField& v, const JetContext& ctx,
                       const std::vector<SideRelation>& siderels) {
    return mixed_equation_symmetry_residual(f.equation(ctx), v, siderels);
}

std::map<Expr, Expr, ExprCmp> collect_monomials(const Expr& e,
                                                const std::vector<std::string>& basis) {
    auto is_basis_sym = [&](const Expr& x) {
        return x.kind() == Kind::Symbol &&
               std::find(basis.begin(), basis.end(), x.sym_name()) != basis.end();
    };
    std::map<Expr, std::vector<Expr>, ExprCmp> groups;
    for (const auto& t : terms_of(e)) {
        if (t.is_zero()) continue;
        Factorization fz = factorize_term(t);
        std::vector<Expr> key_factors, coeff_factors;
        for (const auto& f : fz.factors) {
            bool basisf = is_basis_sym(f) ||
                          (f.kind() == Kind::Pow && is_basis_sym(f.kids()[0]));
            (basisf ? key_factors : coeff_factors).push_back(f);
        }
        Expr key = assemble_term(Rational(1), key_factors);
        groups[key].push_back(assemble_term(fz.coef, coeff_factors));
    }
    std::map<Expr, Expr, ExprCmp> out;
    for (auto& [k, parts] : groups) {
        Expr c = make_add(std::move(parts));
        if (!c.is_zero()) out.emplace(k, std::move(c));
    }
    return out;
}

namespace {

struct DerivFact {
    std::string fname;
    std::vector<int> idx;
};

bool idx_geq(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] < b[i]) return false;
    return true;
}

std::optional<DerivFact> as_single_deriv_fact(const Expr& piece,
                                              const std::set<std::string>& unknowns) {
    auto ts = terms_of(piece);
    if (ts.size() != 1) return std::nullopt;
    Factorization f = factorize_term(ts[0]);
    if (f.factors.size() != 1) return std::nullopt;
    const Expr& a = f.factors[0];
    if (a.kind() != Kind::FuncApp) return std::nullopt;
    if (!unknowns.count(a.fn()->name)) return std::nullopt;
    bool nonzero = false;
    for (int i : a.deriv_index()) nonzero = nonzero || i > 0;
    if (!nonzero) return std::nullopt;
    return DerivFact{a.fn()->name, a.deriv_index()};
}

Expr apply_facts(const Expr& e, const std::vector<DerivFact>& facts) {
    if (facts.empty()) return e;
    return rewrite_nodes(e, [&](const Expr& sub) -> std::optional<Expr> {
        if (sub.kind() != Kind::FuncApp) return std::nullopt;
        for (const auto& f : facts)
            if (sub.fn()->name == f.fname && idx_geq(sub.deriv_index(), f.idx))
                return make_int(0);
        return std::nullopt;
    });
}

void insert_fact(std::vector<DerivFact>& facts, DerivFact f) {
    for (const auto& g : facts)
        if (g.fname == f.fname && idx_geq(f.idx, g.idx)) return; // subsumed
    std::erase_if(facts, [&](const DerivFact& g) {
        return g.fname == f.fname && idx_geq(g.idx, f.idx);
    });
    facts.push_back(std::move(f));
}

/// Split pieces for the detection loop. For the F(u_x) family, coefficients
/// free of the labelling function are further split by powers of u_x.
std::vector<Expr> split_pieces(const Expr& residual, FMode mode, const JetContext& ctx,
                               const std::string& fname) {
    std::vector<std::string> basis;
    if (mode == FMode::OpaqueOfU)
        basis = {ctx.jet_name({1, 0}), ctx.jet_name({0, 1}), ctx.jet_name({2, 0}),
                 ctx.jet_name({0, 2})};
    else
        basis = {ctx.jet_name({0, 1}), ctx.jet_name({2, 0}), ctx.jet_name({0, 2})};

    auto coeffs = collect_monomials(residual, basis);
    std::vector<Expr> pieces;
    for (const auto& [key, coeff] : coeffs) {
        // no basis jet may survive inside a coefficient
        for (const auto& b : basis)
            if (depends_on(coeff, b))
                throw BasisIncompleteError("coefficient of " + std::to_string(coeffs.size()) +
                                           " still contains jet coordinate " + b);
        if (mode == FMode::OpaqueOfUx && !contains_app(coeff, fname)) {
            for (const auto& [k2, c2] : collect_monomials(coeff, {ctx.jet_name({1, 0})}))
                pieces.push_back(c2);
        } else {
            pieces.push_back(coeff);
        }
    }
    return pieces;
}

} // namespace

DeterminingSystem split_system(const FSpec& f, const JetContext& ctx) {
    if (f.mode == FMode::ClosedForm)
        throw KernelError("split_system needs an opaque labelling function");

    // ---- stage 1: fully generic components xi(x,y,u), eta(x,y,u), phi(x,y,u)
    Context stage1;
    std::vector<std::string> xyu = {ctx.x, ctx.y, ctx.dep};
    FuncPtr xi1 = stage1.declare_func("xi", xyu);
    FuncPtr eta1 = stage1.declare_func("eta", xyu);
    FuncPtr phi1 = stage1.declare_func("phi", xyu);
    auto app0 = [&](const FuncPtr& fn) {
        std::vector<Expr> args;
        for (const auto& p : fn->params) args.push_back(make_var(p));
        return make_app0(fn, std::move(args));
    };
    PointVectorField generic{app0(xi1), app0(eta1), app0(phi1)};
    Expr R = symmetry_residual(f, generic, ctx);

    std::set<std::string> unames = {"xi", "eta", "phi"};
    std::vector<DerivFact> facts;
    Expr prev;
    for (int round = 0; round < 16; ++round) {
        Expr Ra = apply_facts(R, facts);
        if (!prev.is_null() && Ra.same(prev)) break;
        prev = Ra;
        for (const auto& piece : split_pieces(Ra, f.mode, ctx, f.fsym->name))
            if (auto fact = as_single_deriv_fact(piece, unames))
                insert_fact(facts, *fact);
    }

    DeterminingSystem sys;
    std::map<std::string, FuncPtr> stage1_syms = {{"xi", xi1}, {"eta", eta1}, {"phi", phi1}};
    // mixed x/y-derivative facts on phi re-express through g after stage 2
    // (phi = g u + h turns phi_uy, phi_ux into g_y, g_x); report the stage-1
    // set in the dependency-pattern form
    std::sort(facts.begin(), facts.end(), [](const DerivFact& a, const DerivFact& b) {
        auto rank = [](const std::string& s) { return s == "xi" ? 0 : s == "eta" ? 1 : 2; };
        if (rank(a.fname) != rank(b.fname)) return rank(a.fname) < rank(b.fname);
        return a.idx > b.idx;
    });
    for (const auto& fact : facts) {
        if (fact.fname == "phi" && (fact.idx[0] > 0 || fact.idx[1] > 0)) continue;
        const FuncPtr& fn = stage1_syms[fact.fname];
        std::vector<Expr> args;
        for (const auto& p : fn->params) args.push_back(make_var(p));
        sys.constraints.push_back(make_app(fn, fact.idx, std::move(args)));
    }

    // ---- stage 2: re-express with xi(x), eta(y), phi = g u + h
    Context stage2;
    sys.xi = stage2.declare_func("xi", {ctx.x});
    sys.eta = stage2.declare_func("eta", {ctx.y});
    sys.h = stage2.declare_func("h", {ctx.x, ctx.y});
    sys.g = stage2.declare_func("g", {ctx.x, ctx.y});
    Expr u = ctx.jet({0, 0});
    PointVectorField staged{app0(sys.xi), app0(sys.eta),
                            make_app0(sys.g, {make_var(ctx.x), make_var(ctx.y)}) * u +
                                app0(sys.h)};
    Expr R2 = symmetry_residual(f, staged, ctx);

    std::set<std::string> gname = {"g"};
    std::vector<DerivFact> gfacts;
    for (const auto& piece : split_pieces(R2, f.mode, ctx, f.fsym->name)) {
        if (auto fact = as_single_deriv_fact(piece, gname)) insert_fact(gfacts, *fact);
    }
    for (const auto& fact : gfacts)
        sys.constraints.push_back(
            make_app(sys.g, fact.idx, {make_var(ctx.x), make_var(ctx.y)}));

    if (f.mode == FMode::OpaqueOfU) {
        // g is forced constant: replace it by the parameter A
        sys.g_value = make_param("A");
        Expr R3 = rewrite_nodes(R2, [&](const Expr& sub) -> std::optional<Expr> {
            if (sub.kind() == Kind::FuncApp && sub.fn()->name == "g") {
                bool derived = false;
                for (int i : sub.deriv_index()) derived = derived || i > 0;
                return derived ? make_int(0) : sys.g_value;
            }
            return std::nullopt;
        });
        sys.residual = R3;
        sys.unknowns = {"xi(" + ctx.x + ")", "eta(" + ctx.y + ")", "A (constant)",
                        "h(" + ctx.x + "," + ctx.y + ")"};
    } else {
        // g is forced to depend on y only
        Context stage3;
        FuncPtr g3 = stage3.declare_func("g", {ctx.y});
        Expr R3 = rewrite_nodes(R2, [&](const Expr& sub) -> std::optional<Expr> {
            if (sub.kind() == Kind::FuncApp && sub.fn()->name == "g") {
                if (sub.deriv_index()[0] > 0) return make_int(0); // g_x = 0
                return make_app(g3, {sub.deriv_index()[1]}, {make_var(ctx.y)});
            }
            return std::nullopt;
        });
        sys.g = g3;
        sys.residual = R3;
        sys.unknowns = {"xi(" + ctx.x + ")", "eta(" + ctx.y + ")", "g(" + ctx.y + ")",
                        "h(" + ctx.x + "," + ctx.y + ")"};
    }
    return sys;
}

PointVectorField arbitrary_F_symmetries(const FSpec& f, const JetContext& ctx) {
    Expr x = make_var(ctx.x), y = make_var(ctx.y), u = ctx.jet({0, 0});
    Expr k1 = make_param("k1"), k2 = make_param("k2"), k3 = make_param("k3");
    if (f.mode == FMode::OpaqueOfU)
        return {k1 * x + k2, k3 - k1 * y, make_int(0)};
    if (f.mode == FMode::OpaqueOfUx) {
        auto P = std::make_shared<FunctionSymbol>();
        P->name = "P";
        P->params = {ctx.y};
        return {k1 * x + k2, k3, k1 * u + make_app0(P, {y})};
    }
    throw KernelError("principal algebra is defined for opaque labelling functions");
}

} // namespace hypersym

#include "hypersym/jet.hpp"

#include <set>

namespace hypersym {

std::string JetContext::jet_name(JetCoordinate c) const {
    if (c.i == 0 && c.j == 0) return dep;
    std::string s = dep + "_";
    s.append(static_cast<size_t>(c.i), x[0]);
    s.append(static_cast<size_t>(c.j), y[0]);
    return s;
}

Expr JetContext::jet(JetCoordinate c) const {
    if (c.order() > max_order)
        throw OrderBoundError("jet order " + std::to_string(c.order()) +
                              " exceeds maximum " + std::to_string(max_order));
    return make_var(jet_name(c));
}

std::optional<JetCoordinate> JetContext::parse_jet(const std::string& name) const {
    if (name == dep) return JetCoordinate{0, 0};
    if (name.size() <= dep.size() + 1) return std::nullopt;
    if (name.compare(0, dep.size(), dep) != 0 || name[dep.size()] != '_') return std::nullopt;
    JetCoordinate c;
    bool seen_y = false;
    for (size_t k = dep.size() + 1; k < name.size(); ++k) {
        if (x.size() == 1 && name[k] == x[0] && !seen_y) ++c.i;
        else if (y.size() == 1 && name[k] == y[0]) { ++c.j; seen_y = true; }
        else return std::nullopt;
    }
    return c;
}

Expr total_derivative(const Expr& e, int axis, const JetContext& ctx) {
    return derive_generic(e, [&](const Node& s) -> Expr {
        if (s.name == (axis == 0 ? ctx.x : ctx.y)) return make_int(1);
        if (s.name == (axis == 0 ? ctx.y : ctx.x)) return make_int(0);
        if (auto c = ctx.parse_jet(s.name)) {
            JetCoordinate up = axis == 0 ? JetCoordinate{c->i + 1, c->j}
                                         : JetCoordinate{c->i, c->j + 1};
            return ctx.jet(up);
        }
        return make_int(0);
    });
}

ProlongedField prolong2(const PointVectorField& v, const JetContext& ctx) {
    ProlongedField pr;
    pr.base = v;
    Expr W = v.phi - v.xi * ctx.jet({1, 0}) - v.eta * ctx.jet({0, 1});
    std::map<JetCoordinate, Expr> dW;
    dW[{0, 0}] = W;
    dW[{1, 0}] = total_derivative(W, 0, ctx);
    dW[{0, 1}] = total_derivative(W, 1, ctx);
    dW[{2, 0}] = total_derivative(dW[{1, 0}], 0, ctx);
    dW[{1, 1}] = total_derivative(dW[{1, 0}], 1, ctx);
    dW[{0, 2}] = total_derivative(dW[{0, 1}], 1, ctx);
    for (auto [i, j] : {std::pair{1, 0}, std::pair{0, 1}, std::pair{2, 0},
                        std::pair{1, 1}, std::pair{0, 2}}) {
        JetCoordinate c{i, j};
        pr.coeff[c] = dW[c] + v.xi * ctx.jet({i + 1, j}) + v.eta * ctx.jet({i, j + 1});
    }
    return pr;
}

Expr apply_prolonged(const ProlongedField& pr, const Expr& e, const JetContext& ctx) {
    std::vector<Expr> parts;
    auto push = [&](const Expr& coeff, const std::string& wrt) {
        if (coeff.is_zero()) return;
        Expr d = derive(e, wrt);
        if (!d.is_zero()) parts.push_back(coeff * d);
    };
    push(pr.base.xi, ctx.x);
    push(pr.base.eta, ctx.y);
    push(pr.base.phi, ctx.dep);
    for (const auto& [c, coeff] : pr.coeff) push(coeff, ctx.jet_name(c));
    return make_add(std::move(parts));
}

namespace {

void collect_jets(const Expr& e, const JetContext& ctx, std::set<JetCoordinate>& out) {
    const Node& n = e.node();
    if (n.kind == Kind::Symbol) {
        if (auto c = ctx.parse_jet(n.name)) out.insert(*c);
    }
    for (const auto& k : n.kids) collect_jets(k, ctx, out);
}

} // namespace

Expr euler_u(const Expr& e, const JetContext& ctx) {
    std::set<JetCoordinate> jets;
    collect_jets(e, ctx, jets);
    std::vector<Expr> parts;
    for (const auto& c : jets) {
        Expr d = derive(e, ctx.jet_name(c));
        if (d.is_zero()) continue;
        for (int k = 0; k < c.i; ++k) d = total_derivative(d, 0, ctx);
        for (int k = 0; k < c.j; ++k) d = total_derivative(d, 1, ctx);
        if ((c.i + c.j) % 2 == 1) d = -d;
        parts.push_back(d);
    }
    return make_add(std::move(parts));
}

Expr reduce_mod_equation(const Expr& e, const EquationSpec& eq,
                         const std::vector<SideRelation>& siderels) {
    const JetContext& ctx = eq.ctx;
    // expansions D_x^{i-1} D_y^{j-1} rhs, not themselves reduced; the outer
    // fixpoint loop finishes the job
    std::map<JetCoordinate, Expr> repl;
    auto replacement = [&](JetCoordinate c) {
        auto it = repl.find(c);
        if (it != repl.end()) return it->second;
        Expr r = eq.rhs;
        for (int k = 1; k < c.i; ++k) r = total_derivative(r, 0, ctx);
        for (int k = 1; k < c.j; ++k) r = total_derivative(r, 1, ctx);
        repl.emplace(c, r);
        return r;
    };
    std::map<std::string, std::map<std::pair<int, int>, Expr>> side_repl;
    auto side_replacement = [&](const SideRelation& rel, int i, int j) {
        auto& memo = side_repl[rel.fname];
        auto it = memo.find({i, j});
        if (it != memo.end()) return it->second;
        Expr r = rel.rhs;
        for (int k = 1; k < i; ++k) r = total_derivative(r, 0, ctx);
        for (int k = 1; k < j; ++k) r = total_derivative(r, 1, ctx);
        memo.emplace(std::pair{i, j}, r);
        return r;
    };

    Expr cur = e;
    for (int pass = 0; pass < 64; ++pass) {
        bool changed = false;
        Expr next = rewrite_nodes(cur, [&](const Expr& sub) -> std::optional<Expr> {
            const Node& n = sub.node();
            if (n.kind == Kind::Symbol) {
                if (auto c = ctx.parse_jet(n.name); c && c->i >= 1 && c->j >= 1) {
                    changed = true;
                    return replacement(*c);
                }
            }
            if (n.kind == Kind::FuncApp && n.idx.size() == 2) {
                for (const auto& rel : siderels) {
                    if (n.fn->name == rel.fname && n.idx[0] >= 1 && n.idx[1] >= 1) {
                        changed = true;
                        return side_replacement(rel, n.idx[0], n.idx[1]);
                    }
                }
            }
            return std::nullopt;
        });
        cur = next;
        if (!changed) return cur;
    }
    throw KernelError("reduction modulo the equation did not terminate");
}

Expr mixed_equation_symmetry_residual(const EquationSpec& eq, const PointVectorField& v,
                                      const std::vector<SideRelation>& siderels) {
    const JetContext& ctx = eq.ctx;
    Expr delta = ctx.jet({1, 1}) - eq.rhs;
    ProlongedField pr = prolong2(v, ctx);
    Expr r = apply_prolonged(pr, delta, ctx);
    return reduce_mod_equation(r, eq, siderels);
}

Expr rewrite_nodes(const Expr& e, const std::function<std::optional<Expr>(const Expr&)>& hook) {
    const Node& n = e.node();
    Expr rebuilt;
    switch (n.kind) {
    case Kind::Rational:
    case Kind::Symbol:
        rebuilt = e;
        break;
    case Kind::FuncApp: {
        std::vector<Expr> args;
        args.reserve(n.kids.size());
        for (const auto& k : n.kids) args.push_back(rewrite_nodes(k, hook));
        rebuilt = make_app(n.fn, n.idx, std::move(args));
        break;
    }
    case Kind::Exp: rebuilt = make_exp(rewrite_nodes(n.kids[0], hook)); break;
    case Kind::Ln: rebuilt = make_ln(rewrite_nodes(n.kids[0], hook)); break;
    case Kind::Sin: rebuilt = make_sin(rewrite_nodes(n.kids[0], hook)); break;
    case Kind::Cos: rebuilt = make_cos(rewrite_nodes(n.kids[0], hook)); break;
    case Kind::Pow:
        rebuilt = make_pow(rewrite_nodes(n.kids[0], hook), rewrite_nodes(n.kids[1], hook));
        break;
    case Kind::Mul: {
        std::vector<Expr> kids;
        kids.reserve(n.kids.size());
        for (const auto& k : n.kids) kids.push_back(rewrite_nodes(k, hook));
        rebuilt = make_mul(std::move(kids));
        break;
    }
    case Kind::Add: {
        std::vector<Expr> kids;
        kids.reserve(n.kids.size());
        for (const auto& k : n.kids) kids.push_back(rewrite_nodes(k, hook));
        rebuilt = make_add(std::move(kids));
        break;
    }
    }
    if (auto r = hook(rebuilt)) return *r;
    return rebuilt;
}

} // namespace hypersym

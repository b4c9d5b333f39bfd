#include "hypersym/calculus.hpp"

#include <set>

namespace hypersym {

Expr derive_generic(const Expr& e, const SymbolDerivs& d) {
    const Node& n = e.node();
    switch (n.kind) {
    case Kind::Rational:
        return make_int(0);
    case Kind::Symbol:
        return d(n);
    case Kind::FuncApp: {
        // chain rule: sum over argument slots
        std::vector<Expr> parts;
        for (size_t i = 0; i < n.kids.size(); ++i) {
            Expr da = derive_generic(n.kids[i], d);
            if (da.is_zero()) continue;
            std::vector<int> idx = n.idx;
            idx[i] += 1;
            parts.push_back(make_mul({make_app(n.fn, std::move(idx), n.kids), da}));
        }
        return make_add(std::move(parts));
    }
    case Kind::Exp: {
        Expr dt = derive_generic(n.kids[0], d);
        return dt.is_zero() ? dt : make_mul({e, dt});
    }
    case Kind::Ln: {
        Expr dt = derive_generic(n.kids[0], d);
        return dt.is_zero() ? dt : make_mul({dt, make_pow(n.kids[0], make_int(-1))});
    }
    case Kind::Sin: {
        Expr dt = derive_generic(n.kids[0], d);
        return dt.is_zero() ? dt : make_mul({make_cos(n.kids[0]), dt});
    }
    case Kind::Cos: {
        Expr dt = derive_generic(n.kids[0], d);
        return dt.is_zero() ? dt : make_mul({make_int(-1), make_sin(n.kids[0]), dt});
    }
    case Kind::Pow: {
        const Expr& b = n.kids[0];
        const Expr& x = n.kids[1];
        Expr db = derive_generic(b, d);
        Expr dx = derive_generic(x, d);
        std::vector<Expr> parts;
        if (!db.is_zero())
            parts.push_back(make_mul({x, make_pow(b, x - make_int(1)), db}));
        if (!dx.is_zero())
            parts.push_back(make_mul({e, make_ln(b), dx}));
        return make_add(std::move(parts));
    }
    case Kind::Mul: {
        std::vector<Expr> parts;
        for (size_t i = 0; i < n.kids.size(); ++i) {
            Expr di = derive_generic(n.kids[i], d);
            if (di.is_zero()) continue;
            std::vector<Expr> fs;
            fs.reserve(n.kids.size());
            for (size_t j = 0; j < n.kids.size(); ++j) fs.push_back(i == j ? di : n.kids[j]);
            parts.push_back(make_mul(std::move(fs)));
        }
        return make_add(std::move(parts));
    }
    case Kind::Add: {
        std::vector<Expr> parts;
        for (const auto& k : n.kids) {
            Expr dk = derive_generic(k, d);
            if (!dk.is_zero()) parts.push_back(dk);
        }
        return make_add(std::move(parts));
    }
    }
    throw KernelError("unreachable");
}

Expr derive(const Expr& e, const std::string& v) {
    return derive_generic(e, [&v](const Node& s) {
        return s.name == v ? make_int(1) : make_int(0);
    });
}

namespace {

Expr subst_rec(const Expr& e, const Bindings& b, std::set<std::string>& active);

/// d^idx body / d(formals)^idx, then formals -> substituted actual args.
Expr expand_body(const FuncPtr& fn, const std::vector<int>& idx,
                 const std::vector<Expr>& args, const Bindings& b,
                 std::set<std::string>& active) {
    if (active.count(fn->name))
        throw CircularBindingError("circular binding through function '" + fn->name + "'");
    active.insert(fn->name);
    Expr body = fn->body;
    for (size_t slot = 0; slot < idx.size(); ++slot)
        for (int k = 0; k < idx[slot]; ++k) body = derive(body, fn->params[slot]);
    // substitute formal parameters by actual (already substituted) arguments
    Bindings formal;
    for (size_t slot = 0; slot < fn->params.size(); ++slot) {
        Expr a = subst_rec(args[slot], b, active);
        formal.symbols[fn->params[slot]] = a;
    }
    // the body may itself reference bound symbols/functions
    Expr r = subst_rec(body, b, active);
    r = substitute(r, formal);
    active.erase(fn->name);
    return r;
}

Expr subst_rec(const Expr& e, const Bindings& b, std::set<std::string>& active) {
    const Node& n = e.node();
    switch (n.kind) {
    case Kind::Rational:
        return e;
    case Kind::Symbol: {
        auto it = b.symbols.find(n.name);
        return it == b.symbols.end() ? e : it->second;
    }
    case Kind::FuncApp: {
        auto it = b.functions.find(n.fn->name);
        if (it != b.functions.end() && !it->second->body.is_null())
            return expand_body(it->second, n.idx, n.kids, b, active);
        std::vector<Expr> args;
        args.reserve(n.kids.size());
        for (const auto& k : n.kids) args.push_back(subst_rec(k, b, active));
        return make_app(n.fn, n.idx, std::move(args));
    }
    case Kind::Exp: return make_exp(subst_rec(n.kids[0], b, active));
    case Kind::Ln: return make_ln(subst_rec(n.kids[0], b, active));
    case Kind::Sin: return make_sin(subst_rec(n.kids[0], b, active));
    case Kind::Cos: return make_cos(subst_rec(n.kids[0], b, active));
    case Kind::Pow:
        return make_pow(subst_rec(n.kids[0], b, active), subst_rec(n.kids[1], b, active));
    case Kind::Mul: {
        std::vector<Expr> kids;
        kids.reserve(n.kids.size());
        for (const auto& k : n.kids) kids.push_back(subst_rec(k, b, active));
        return make_mul(std::move(kids));
    }
    case Kind::Add: {
        std::vector<Expr> kids;
        kids.reserve(n.kids.size());
        for (const auto& k : n.kids) kids.push_back(subst_rec(k, b, active));
        return make_add(std::move(kids));
    }
    }
    throw KernelError("unreachable");
}

} // namespace

Expr substitute(const Expr& e, const Bindings& b) {
    std::set<std::string> active;
    return subst_rec(e, b, active);
}

} // namespace hypersym

#include "hypersym/printer.hpp"

namespace hypersym {

namespace {

bool all_formal_args(const Node& n) {
    for (size_t i = 0; i < n.kids.size(); ++i) {
        const Node& a = n.kids[i].node();
        if (a.kind != Kind::Symbol || a.name != n.fn->params[i]) return false;
    }
    return true;
}

bool single_char_params(const FunctionSymbol& f) {
    for (const auto& p : f.params)
        if (p.size() != 1) return false;
    return true;
}

std::string render_app(const Node& n) {
    std::string s = n.fn->name;
    bool has_deriv = false;
    for (int i : n.idx)
        if (i > 0) has_deriv = true;
    if (has_deriv) {
        if (!single_char_params(*n.fn)) throw KernelError("cannot render derivative suffix");
        s += "_";
        for (size_t k = 0; k < n.idx.size(); ++k)
            for (int i = 0; i < n.idx[k]; ++i) s += n.fn->params[k];
    }
    if (!all_formal_args(n)) {
        s += "(";
        for (size_t i = 0; i < n.kids.size(); ++i) {
            if (i) s += ", ";
            s += render(n.kids[i]);
        }
        s += ")";
    }
    return s;
}

std::string render_exponent(const Expr& e) {
    const Node& n = e.node();
    if (n.kind == Kind::Rational && n.rat.is_integer() && !n.rat.is_negative())
        return n.rat.str();
    if (n.kind == Kind::Symbol) return n.name;
    return "(" + render(e) + ")";
}

std::string render_base(const Expr& e) {
    switch (e.kind()) {
    case Kind::Add:
    case Kind::Mul:
    case Kind::Pow:
        return "(" + render(e) + ")";
    case Kind::Rational:
        if (e.rat().is_negative() || !e.rat().is_integer()) return "(" + render(e) + ")";
        return render(e);
    default:
        return render(e);
    }
}

std::string render_factor(const Expr& e) {
    if (e.kind() == Kind::Add) return "(" + render(e) + ")";
    return render(e);
}

} // namespace

std::string render(const Expr& e) {
    const Node& n = e.node();
    switch (n.kind) {
    case Kind::Rational:
        return n.rat.str();
    case Kind::Symbol:
        return n.name;
    case Kind::FuncApp:
        return render_app(n);
    case Kind::Exp:
        return "exp(" + render(n.kids[0]) + ")";
    case Kind::Ln:
        return "ln(" + render(n.kids[0]) + ")";
    case Kind::Sin:
        return "sin(" + render(n.kids[0]) + ")";
    case Kind::Cos:
        return "cos(" + render(n.kids[0]) + ")";
    case Kind::Pow:
        return render_base(n.kids[0]) + "^" + render_exponent(n.kids[1]);
    case Kind::Mul: {
        Rational coef(1);
        std::vector<std::string> parts;
        for (const auto& k : n.kids) {
            if (k.kind() == Kind::Rational) coef = k.rat();
            else parts.push_back(render_factor(k));
        }
        std::string s;
        if (coef == Rational(-1)) s = "-";
        else if (!coef.is_one()) s = coef.str() + "*";
        for (size_t i = 0; i < parts.size(); ++i) {
            if (i) s += "*";
            s += parts[i];
        }
        return s;
    }
    case Kind::Add: {
        std::string s;
        bool first = true;
        for (const auto& k : n.kids) {
            Factorization f = factorize_term(k);
            bool neg = f.coef.is_negative();
            Expr mag = neg ? make_mul({make_int(-1), k}) : k;
            if (first) {
                s += (neg ? "-" : "") + render(mag);
                first = false;
            } else {
                s += neg ? " - " : " + ";
                s += render(mag);
            }
        }
        return s;
    }
    }
    throw KernelError("unreachable");
}

} // namespace hypersym

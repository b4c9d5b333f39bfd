#include "hypersym/classify.hpp"

#include "hypersym/calculus.hpp"

#include <algorithm>

namespace hypersym {

IndeterminateSet extract_indeterminates(const Expr& residual, const std::string& var,
                                        const FuncPtr& fsym) {
    IndeterminateSet out;
    out.var = var;
    out.fsym = fsym;
    if (residual.is_zero()) return out;
    bool constant_member = false;
    std::vector<Expr> seen;
    for (const auto& t : terms_of(residual)) {
        Factorization f = factorize_term(t);
        std::vector<Expr> dep;
        for (const auto& fac : f.factors)
            if (depends_on(fac, var)) dep.push_back(fac);
        if (dep.empty()) {
            constant_member = true;
            continue;
        }
        Expr elem = assemble_term(Rational(1), dep);
        bool dup = false;
        for (const auto& s : seen) dup = dup || s.same(elem);
        if (!dup) seen.push_back(elem);
    }
    std::sort(seen.begin(), seen.end(),
              [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
    out.elements = std::move(seen);
    if (constant_member) out.elements.push_back(make_int(1));
    return out;
}

namespace {
Expr det(const std::vector<std::vector<Expr>>& m, std::vector<int> cols) {
    size_t row = m.size() - cols.size();
    if (cols.size() == 1) return m[row][cols[0]];
    std::vector<Expr> parts;
    for (size_t k = 0; k < cols.size(); ++k) {
        std::vector<int> rest;
        for (size_t i = 0; i < cols.size(); ++i)
            if (i != k) rest.push_back(cols[i]);
        Expr minor = det(m, std::move(rest));
        Expr term = m[row][cols[k]] * minor;
        parts.push_back(k % 2 == 0 ? term : -term);
    }
    return make_add(std::move(parts));
}
} // namespace

Expr wronskian(const std::vector<Expr>& fs, const std::string& var) {
    if (fs.empty()) throw KernelError("wronskian of an empty list");
    size_t n = fs.size();
    std::vector<std::vector<Expr>> m(n, std::vector<Expr>(n));
    for (size_t j = 0; j < n; ++j) {
        m[0][j] = fs[j];
        for (size_t i = 1; i < n; ++i) m[i][j] = derive(m[i - 1][j], var);
    }
    std::vector<int> cols(n);
    for (size_t j = 0; j < n; ++j) cols[j] = static_cast<int>(j);
    return det(m, std::move(cols));
}

std::vector<CaseCondition> enumerate_case_conditions(const IndeterminateSet& s, int m) {
    int n = static_cast<int>(s.elements.size());
    if (m < 2 || m > n) throw KernelError("subset size out of range");
    std::vector<CaseCondition> out;
    std::vector<int> idx(m);
    for (int i = 0; i < m; ++i) idx[i] = i;
    for (;;) {
        CaseCondition c;
        c.m = m;
        c.subset = idx;
        for (int i : idx) c.elements.push_back(s.elements[i]);
        c.ode = wronskian(c.elements, s.var);
        c.var = s.var;
        c.fsym = s.fsym;
        c.identically_zero = c.ode.is_zero();
        for (size_t k = 0; k < out.size(); ++k) {
            if (out[k].identically_zero) continue;
            if (proportional_ratio(c.ode, out[k].ode)) {
                c.duplicate_of = static_cast<int>(k);
                break;
            }
        }
        out.push_back(std::move(c));
        // next combination
        int i = m - 1;
        while (i >= 0 && idx[i] == n - m + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int k = i + 1; k < m; ++k) idx[k] = idx[k - 1] + 1;
    }
    return out;
}

CaseCondition linear_combination_condition(const IndeterminateSet& s,
                                           const std::vector<int>& subset,
                                           const std::vector<Expr>& coeffs) {
    if (subset.size() != coeffs.size())
        throw KernelError("one coefficient per chosen indeterminate");
    CaseCondition c;
    c.m = static_cast<int>(subset.size());
    c.subset = subset;
    c.var = s.var;
    c.fsym = s.fsym;
    std::vector<Expr> parts;
    for (size_t k = 0; k < subset.size(); ++k) {
        c.elements.push_back(s.elements[subset[k]]);
        parts.push_back(coeffs[k] * s.elements[subset[k]]);
    }
    c.ode = make_add(std::move(parts));
    c.identically_zero = c.ode.is_zero();
    return c;
}

std::optional<Rational> proportional_ratio(const Expr& a, const Expr& b) {
    if (a.is_zero() && b.is_zero()) return Rational(1);
    if (a.is_zero() || b.is_zero()) return std::nullopt;
    Factorization fa = factorize_term(terms_of(a)[0]);
    Factorization fb = factorize_term(terms_of(b)[0]);
    Rational c = fa.coef / fb.coef;
    if ((a - make_rat(c) * b).is_zero()) return c;
    return std::nullopt;
}

CheckOutcome check_condition_solution(const Expr& f_closed, const CaseCondition& c) {
    if (!c.fsym) throw KernelError("condition carries no labelling symbol");
    // rewrite the closed form over the symbol's formal argument
    Bindings to_formal;
    to_formal.symbols[c.var] = make_var(c.fsym->params[0]);
    auto bodyfn = std::make_shared<FunctionSymbol>(*c.fsym);
    bodyfn->body = substitute(f_closed, to_formal);
    Bindings b;
    b.functions[c.fsym->name] = bodyfn;
    Expr r = substitute(c.ode, b);
    if (r.is_zero()) return CheckOutcome::True;
    switch (probe_compare(r, make_int(0))) {
    case ProbeOutcome::Equal: return CheckOutcome::True;
    case ProbeOutcome::NotEqual: return CheckOutcome::False;
    default: return CheckOutcome::Undecided;
    }
}

Expr equivalence_transform(const Expr& f, FMode family, const EquivalenceParams& p) {
    for (const Expr& scale : {p.a, p.c, p.r})
        if (!scale.is_null() && scale.is_zero())
            throw KernelError("equivalence transformation needs nonzero scales a, c, r");
    Expr scale = p.a * p.c / p.r;
    Bindings b;
    if (family == FMode::OpaqueOfU) {
        b.symbols["u"] = p.r * make_var("u") + p.s;
    } else if (family == FMode::OpaqueOfUx) {
        b.symbols["u_x"] = (p.r / p.a) * make_var("u_x");
    } else {
        throw KernelError("equivalence transformation needs a family");
    }
    return scale * substitute(f, b);
}

} // namespace hypersym

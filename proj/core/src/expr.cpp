#include "hypersym/expr.hpp"

#include <algorithm>

namespace hypersym {

Kind Expr::kind() const { return p_->kind; }

bool Expr::is_zero() const { return p_ && p_->kind == Kind::Rational && p_->rat.is_zero(); }
bool Expr::is_one() const { return p_ && p_->kind == Kind::Rational && p_->rat.is_one(); }
const Rational& Expr::rat() const { return p_->rat; }
const std::string& Expr::sym_name() const { return p_->name; }
SymRole Expr::sym_role() const { return p_->role; }
const std::vector<Expr>& Expr::kids() const { return p_->kids; }
const FuncPtr& Expr::fn() const { return p_->fn; }
const std::vector<int>& Expr::deriv_index() const { return p_->idx; }

bool Expr::same(const Expr& o) const {
    if (p_ == o.p_) return true;
    if (!p_ || !o.p_) return false;
    return compare(*this, o) == 0;
}

static int kind_rank(Kind k) { return static_cast<int>(k); }

int compare(const Expr& a, const Expr& b) {
    if (a.ptr() == b.ptr()) return 0;
    const Node& na = a.node();
    const Node& nb = b.node();
    if (na.kind != nb.kind) return kind_rank(na.kind) < kind_rank(nb.kind) ? -1 : 1;
    size_t ha = hash_of(a), hb = hash_of(b);
    switch (na.kind) {
    case Kind::Rational: {
        auto c = na.rat <=> nb.rat;
        return c == 0 ? 0 : (c < 0 ? -1 : 1);
    }
    case Kind::Symbol: {
        int c = na.name.compare(nb.name);
        if (c) return c < 0 ? -1 : 1;
        if (na.role != nb.role) return na.role == SymRole::Var ? -1 : 1;
        return 0;
    }
    case Kind::FuncApp: {
        int c = na.fn->name.compare(nb.fn->name);
        if (c) return c < 0 ? -1 : 1;
        if (na.idx != nb.idx) return na.idx < nb.idx ? -1 : 1;
        break; // fall through to children
    }
    default:
        break;
    }
    if (ha != hb) {
        // children comparison below is the tie-breaker; hashes give a cheap
        // first pass but must not decide order (hash collisions), so only the
        // structural walk below is authoritative.
    }
    const auto& ka = na.kids;
    const auto& kb = nb.kids;
    if (ka.size() != kb.size()) return ka.size() < kb.size() ? -1 : 1;
    for (size_t i = 0; i < ka.size(); ++i) {
        int c = compare(ka[i], kb[i]);
        if (c) return c;
    }
    return 0;
}

size_t hash_of(const Expr& e) {
    const Node& n = e.node();
    if (n.hash_cache) return n.hash_cache;
    size_t h = 0x9e3779b97f4a7c15ull ^ static_cast<size_t>(n.kind);
    auto mix = [&h](size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
    switch (n.kind) {
    case Kind::Rational: mix(n.rat.hash()); break;
    case Kind::Symbol: mix(std::hash<std::string>{}(n.name)); mix(static_cast<size_t>(n.role)); break;
    case Kind::FuncApp: {
        mix(std::hash<std::string>{}(n.fn->name));
        for (int i : n.idx) mix(static_cast<size_t>(i) + 17);
        break;
    }
    default: break;
    }
    for (const auto& k : n.kids) mix(hash_of(k));
    if (h == 0) h = 1;
    n.hash_cache = h;
    return h;
}

std::vector<Expr> terms_of(const Expr& e) {
    if (e.kind() == Kind::Add) return e.kids();
    return {e};
}

Factorization factorize_term(const Expr& term) {
    Factorization f;
    f.coef = Rational(1);
    if (term.kind() == Kind::Rational) {
        f.coef = term.rat();
        return f;
    }
    if (term.kind() == Kind::Mul) {
        for (const auto& k : term.kids()) {
            if (k.kind() == Kind::Rational) f.coef *= k.rat();
            else f.factors.push_back(k);
        }
        return f;
    }
    f.factors.push_back(term);
    return f;
}

bool depends_on(const Expr& e, const std::string& name) {
    const Node& n = e.node();
    if (n.kind == Kind::Symbol) return n.name == name;
    for (const auto& k : n.kids)
        if (depends_on(k, name)) return true;
    return false;
}

bool contains_app(const Expr& e, const std::string& fname) {
    const Node& n = e.node();
    if (n.kind == Kind::FuncApp && n.fn->name == fname) return true;
    for (const auto& k : n.kids)
        if (contains_app(k, fname)) return true;
    return false;
}

void collect_symbols(const Expr& e, SymRole role, std::vector<std::string>& out) {
    const Node& n = e.node();
    if (n.kind == Kind::Symbol && n.role == role) {
        if (std::find(out.begin(), out.end(), n.name) == out.end()) out.push_back(n.name);
    }
    for (const auto& k : n.kids) collect_symbols(k, role, out);
}

} // namespace hypersym

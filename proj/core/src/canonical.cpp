#include "hypersym/expr.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace hypersym {

namespace {

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

Expr mk(Node&& n) { return Expr(std::make_shared<Node>(std::move(n))); }

thread_local int g_depth = 0;
struct DepthGuard {
    DepthGuard() {
        if (++g_depth > 512) throw KernelError("canonicalization recursion limit exceeded");
    }
    ~DepthGuard() { --g_depth; }
};

const Expr& zero() { static Expr e = make_rat(Rational(0)); return e; }
const Expr& one() { static Expr e = make_rat(Rational(1)); return e; }

/// exponent -> (symbolic part, rational part)
std::pair<Expr, Rational> split_rational_part(const Expr& e) {
    if (e.kind() == Kind::Rational) return {zero(), e.rat()};
    if (e.kind() == Kind::Add) {
        Rational r(0);
        std::vector<Expr> rest;
        for (const auto& k : e.kids()) {
            if (k.kind() == Kind::Rational) r += k.rat();
            else rest.push_back(k);
        }
        if (r.is_zero()) return {e, r};
        return {make_add(std::move(rest)), r};
    }
    return {e, Rational(0)};
}

Expr assemble_monomial(std::vector<Expr> factors) {
    if (factors.empty()) return one();
    if (factors.size() == 1) return factors[0];
    std::sort(factors.begin(), factors.end(), ExprLess{});
    Node n;
    n.kind = Kind::Mul;
    n.kids = std::move(factors);
    return mk(std::move(n));
}

bool is_neg_int_pow_of_sum(const Expr& f, Expr* base, long long* k) {
    if (f.kind() != Kind::Pow) return false;
    const auto& b = f.kids()[0];
    const auto& e = f.kids()[1];
    if (b.kind() != Kind::Add) return false;
    if (e.kind() != Kind::Rational || !e.rat().is_integer() || !e.rat().is_negative()) return false;
    auto v = e.rat().to_int();
    if (!v) return false;
    if (base) *base = b;
    if (k) *k = -*v;
    return true;
}

Expr add_impl(std::vector<Expr> ops, bool combine);

} // namespace

Expr make_rat(Rational r) {
    Node n;
    n.kind = Kind::Rational;
    n.rat = std::move(r);
    return mk(std::move(n));
}

Expr make_int(long long v) { return make_rat(Rational(v)); }

Expr make_sym(std::string name, SymRole role) {
    Node n;
    n.kind = Kind::Symbol;
    n.name = std::move(name);
    n.role = role;
    return mk(std::move(n));
}

Expr assemble_term(const Rational& coef, const std::vector<Expr>& factors) {
    if (coef.is_zero()) return zero();
    if (factors.empty()) return make_rat(coef);
    if (coef.is_one()) return assemble_monomial(factors);
    std::vector<Expr> kids = factors;
    std::sort(kids.begin(), kids.end(), ExprLess{});
    kids.insert(kids.begin(), make_rat(coef));
    Node n;
    n.kind = Kind::Mul;
    n.kids = std::move(kids);
    return mk(std::move(n));
}

Expr make_exp(const Expr& arg) {
    if (arg.is_zero()) return one();
    if (arg.kind() == Kind::Ln) return arg.kids()[0];
    Node n;
    n.kind = Kind::Exp;
    n.kids = {arg};
    return mk(std::move(n));
}

Expr make_ln(const Expr& arg) {
    if (arg.is_one()) return zero();
    if (arg.kind() == Kind::Rational && arg.rat().is_zero())
        throw KernelError("ln(0)");
    Node n;
    n.kind = Kind::Ln;
    n.kids = {arg};
    return mk(std::move(n));
}

namespace {
/// Leading-sign test used to normalize odd/even wrappers.
bool leading_negative(const Expr& e) {
    switch (e.kind()) {
    case Kind::Rational: return e.rat().is_negative();
    case Kind::Mul: return e.kids()[0].kind() == Kind::Rational && e.kids()[0].rat().is_negative();
    case Kind::Add: return leading_negative(e.kids()[0]);
    default: return false;
    }
}
} // namespace

Expr make_sin(const Expr& arg) {
    if (arg.is_zero()) return zero();
    if (leading_negative(arg)) return -make_sin(-arg);
    Node n;
    n.kind = Kind::Sin;
    n.kids = {arg};
    return mk(std::move(n));
}

Expr make_cos(const Expr& arg) {
    if (arg.is_zero()) return one();
    if (leading_negative(arg)) return make_cos(-arg);
    Node n;
    n.kind = Kind::Cos;
    n.kids = {arg};
    return mk(std::move(n));
}

Expr make_app(FuncPtr fn, std::vector<int> idx, std::vector<Expr> args) {
    if (!fn) throw KernelError("null function symbol");
    if (idx.size() != fn->arity() || args.size() != fn->arity())
        throw KernelError("arity mismatch for function symbol '" + fn->name + "'");
    for (int i : idx)
        if (i < 0) throw KernelError("negative derivative index");
    // declared antiderivative: one derivative in the marked slot yields the
    // underlying function
    if (fn->antideriv_of && fn->antideriv_slot >= 0 && idx[fn->antideriv_slot] >= 1) {
        idx[fn->antideriv_slot] -= 1;
        return make_app(fn->antideriv_of, std::move(idx), std::move(args));
    }
    Node n;
    n.kind = Kind::FuncApp;
    n.fn = std::move(fn);
    n.idx = std::move(idx);
    n.kids = std::move(args);
    return mk(std::move(n));
}

Expr make_app0(FuncPtr fn, std::vector<Expr> args) {
    std::vector<int> idx(fn->arity(), 0);
    return make_app(std::move(fn), std::move(idx), std::move(args));
}

namespace {
Expr raw_pow(const Expr& b, const Expr& e) {
    Node n;
    n.kind = Kind::Pow;
    n.kids = {b, e};
    return mk(std::move(n));
}

Expr expand_sum_power(const Expr& sum, long long n) {
    if (n > 64) throw KernelError("sum power exponent too large to expand");
    // direct term-wise distribution (must not route back through the factor
    // buckets, which would rebuild the power being expanded)
    std::vector<Expr> acc = {make_rat(Rational(1))};
    for (long long i = 0; i < n; ++i) {
        std::vector<Expr> next;
        next.reserve(acc.size() * sum.kids().size());
        for (const auto& t : acc)
            for (const auto& k : sum.kids())
                for (const auto& r : terms_of(make_mul({t, k}))) next.push_back(r);
        acc = std::move(next);
    }
    return make_add(std::move(acc));
}
} // namespace

Expr make_pow(const Expr& base, const Expr& exponent) {
    DepthGuard guard;
    if (exponent.is_zero()) return one();
    if (exponent.is_one()) return base;

    if (base.kind() == Kind::Rational) {
        const Rational& b = base.rat();
        if (exponent.kind() == Kind::Rational) {
            const Rational& e = exponent.rat();
            if (e.is_integer()) {
                auto n = e.to_int();
                if (n) {
                    if (b.is_zero() && *n < 0) throw KernelError("zero to negative power");
                    return make_rat(b.pow_int(*n));
                }
            } else if (!b.is_negative()) {
                if (b.is_zero()) return e.is_negative() ? throw KernelError("zero to negative power") : zero();
                auto q = e.den().convert_to<long long>();
                auto p = e.num().convert_to<long long>();
                if (auto r = b.root(q)) return make_rat(r->pow_int(p));
            }
        }
        if (b.is_one()) return one();
    }

    if (base.kind() == Kind::Exp)
        return make_exp(make_mul({base.kids()[0], exponent}));

    if (base.kind() == Kind::Pow && exponent.kind() == Kind::Rational &&
        exponent.rat().is_integer())
        return make_pow(base.kids()[0], make_mul({base.kids()[1], exponent}));

    if (base.kind() == Kind::Mul && exponent.kind() == Kind::Rational &&
        exponent.rat().is_integer()) {
        std::vector<Expr> parts;
        for (const auto& k : base.kids()) parts.push_back(make_pow(k, exponent));
        return make_mul(std::move(parts));
    }

    if (base.kind() == Kind::Add) {
        auto [sym, ratpart] = split_rational_part(exponent);
        BigInt nfloor = ratpart.floor();
        Rational frac = ratpart - Rational(nfloor);
        long long n = nfloor.convert_to<long long>();
        std::vector<Expr> parts;
        if (!sym.is_zero()) parts.push_back(raw_pow(base, sym));
        if (!frac.is_zero()) parts.push_back(raw_pow(base, make_rat(frac)));
        if (n > 0) parts.push_back(expand_sum_power(base, n));
        else if (n < 0) parts.push_back(raw_pow(base, make_int(n)));
        if (parts.empty()) return one();
        if (parts.size() == 1) return parts[0];
        return make_mul(std::move(parts));
    }

    return raw_pow(base, exponent);
}

// ---------------------------------------------------------------------
// multiplication
// ---------------------------------------------------------------------

Expr make_mul(std::vector<Expr> ops) {
    DepthGuard guard;
    if (ops.size() == 1) return ops[0];

    Rational coef(1);
    std::vector<Expr> pending_sums; // plain Add factors to distribute at the end
    std::vector<Expr> final_factors;

    // Each round buckets all current factors per base and rewrites them; if a
    // rewrite produced anything non-atomic the whole factor set is re-fed, so
    // merges across rounds are never missed.
    for (int round = 0;; ++round) {
        if (round > 64) throw KernelError("mul normalization did not stabilize");

        // Sum bases keep symbolic and rational exponent parts separate so that
        // s^(beta+1) lands as s * s^beta and cancels term-wise.
        struct Bucket {
            bool is_sum = false;
            std::vector<Expr> sym_exps;
            Rational rat_exp = Rational(0);
        };
        std::map<Expr, Bucket, ExprLess> buckets;
        std::vector<Expr> exp_args;

        auto bucket_add = [&](const Expr& b, const Expr& e) {
            auto& bk = buckets[b];
            if (b.kind() == Kind::Add) {
                bk.is_sum = true;
                auto [sym, ratpart] = split_rational_part(e);
                if (!sym.is_zero()) bk.sym_exps.push_back(sym);
                bk.rat_exp += ratpart;
            } else {
                bk.sym_exps.push_back(e);
            }
        };

        std::vector<Expr> work = std::move(ops);
        ops.clear();
        while (!work.empty()) {
            Expr e = std::move(work.back());
            work.pop_back();
            switch (e.kind()) {
            case Kind::Rational:
                coef *= e.rat();
                break;
            case Kind::Mul:
                for (const auto& k : e.kids()) work.push_back(k);
                break;
            case Kind::Add:
                bucket_add(e, one());
                break;
            case Kind::Exp:
                exp_args.push_back(e.kids()[0]);
                break;
            case Kind::Pow: {
                const Expr& b = e.kids()[0];
                const Expr& x = e.kids()[1];
                if (b.kind() == Kind::Exp)
                    exp_args.push_back(make_mul({b.kids()[0], x}));
                else
                    bucket_add(b, x);
                break;
            }
            default:
                bucket_add(e, one());
            }
            if (coef.is_zero()) return zero();
        }

        std::vector<Expr> atoms;   // stable outputs of this round
        std::vector<Expr> rewrites; // outputs needing another round
        for (auto& [b, bk] : buckets) {
            if (bk.is_sum) {
                Expr stot = make_add(std::move(bk.sym_exps));
                if (!stot.is_zero()) atoms.push_back(raw_pow(b, stot));
                BigInt nfloor = bk.rat_exp.floor();
                Rational frac = bk.rat_exp - Rational(nfloor);
                long long n = nfloor.convert_to<long long>();
                if (!frac.is_zero()) atoms.push_back(raw_pow(b, make_rat(frac)));
                if (n == 1) pending_sums.push_back(b);
                else if (n > 1) rewrites.push_back(expand_sum_power(b, n));
                else if (n < 0) atoms.push_back(raw_pow(b, make_int(n)));
            } else {
                Expr etot = make_add(std::move(bk.sym_exps));
                if (etot.is_zero()) continue;
                Expr p = make_pow(b, etot);
                if (p.kind() == Kind::Rational) coef *= p.rat();
                else if (p.kind() == Kind::Pow && p.kids()[0].kind() != Kind::Exp &&
                         compare(p.kids()[0], b) == 0)
                    atoms.push_back(p);
                else if (p.kind() == Kind::Symbol || p.kind() == Kind::FuncApp ||
                         p.kind() == Kind::Ln || p.kind() == Kind::Sin || p.kind() == Kind::Cos)
                    atoms.push_back(p);
                else
                    rewrites.push_back(p);
            }
        }
        if (!exp_args.empty()) {
            Expr a = make_add(std::move(exp_args));
            if (!a.is_zero()) {
                Expr ee = make_exp(a);
                if (ee.kind() == Kind::Exp) atoms.push_back(ee);
                else rewrites.push_back(ee);
            }
        }

        if (rewrites.empty()) {
            final_factors = std::move(atoms);
            break;
        }
        ops = std::move(atoms);
        for (auto& r : rewrites) ops.push_back(std::move(r));
        if (coef.is_zero()) return zero();
    }

    if (!pending_sums.empty()) {
        std::vector<Expr> termlist = {assemble_term(coef, final_factors)};
        for (const auto& s : pending_sums) {
            std::vector<Expr> next;
            next.reserve(termlist.size() * s.kids().size());
            for (const auto& t : termlist)
                for (const auto& k : s.kids()) next.push_back(make_mul({t, k}));
            termlist = std::move(next);
        }
        return make_add(std::move(termlist));
    }
    return assemble_term(coef, final_factors);
}

// ---------------------------------------------------------------------
// addition
// ---------------------------------------------------------------------

namespace {

Expr add_impl(std::vector<Expr> ops, bool combine) {
    DepthGuard guard;
    if (ops.size() == 1) return ops[0];

    Rational racc(0);
    struct TermInfo {
        Rational coef;
        std::vector<Expr> factors;
    };
    std::map<Expr, TermInfo, ExprLess> terms;

    std::vector<Expr> work = std::move(ops);
    while (!work.empty()) {
        Expr e = std::move(work.back());
        work.pop_back();
        if (e.kind() == Kind::Rational) {
            racc += e.rat();
            continue;
        }
        if (e.kind() == Kind::Add) {
            for (const auto& k : e.kids()) work.push_back(k);
            continue;
        }
        Factorization f = factorize_term(e);
        Expr key = assemble_monomial(f.factors);
        auto it = terms.find(key);
        if (it == terms.end()) terms.emplace(std::move(key), TermInfo{f.coef, std::move(f.factors)});
        else it->second.coef += f.coef;
    }

    for (auto it = terms.begin(); it != terms.end();) {
        if (it->second.coef.is_zero()) it = terms.erase(it);
        else ++it;
    }

    if (combine && !terms.empty()) {
        // collect polynomial denominators: negative integer powers of sums
        std::map<Expr, long long, ExprLess> denoms;
        for (const auto& [key, ti] : terms) {
            for (const auto& f : ti.factors) {
                Expr b;
                long long k = 0;
                if (is_neg_int_pow_of_sum(f, &b, &k)) {
                    auto& cur = denoms[b];
                    cur = std::max(cur, k);
                }
            }
        }
        if (!denoms.empty()) {
            // multiply through by raw (unexpanded) positive powers so the
            // factor buckets cancel them against the denominators before any
            // expansion happens
            std::vector<Expr> dpos, dneg;
            for (const auto& [b, k] : denoms) {
                dpos.push_back(raw_pow(b, make_int(k)));
                dneg.push_back(make_pow(b, make_int(-k)));
            }
            std::vector<Expr> numerator_terms;
            for (const auto& [key, ti] : terms) {
                std::vector<Expr> prod = {assemble_term(ti.coef, ti.factors)};
                for (const auto& d : dpos) prod.push_back(d);
                numerator_terms.push_back(make_mul(std::move(prod)));
            }
            if (!racc.is_zero()) {
                std::vector<Expr> prod = {make_rat(racc)};
                for (const auto& d : dpos) prod.push_back(d);
                numerator_terms.push_back(make_mul(std::move(prod)));
            }
            Expr N = add_impl(std::move(numerator_terms), false);
            if (N.is_zero()) return N;
            std::vector<Expr> out;
            for (const auto& t : terms_of(N)) {
                std::vector<Expr> prod = {t};
                for (const auto& d : dneg) prod.push_back(d);
                out.push_back(make_mul(std::move(prod)));
            }
            return add_impl(std::move(out), false);
        }
    }

    std::vector<Expr> kids;
    kids.reserve(terms.size() + 1);
    if (!racc.is_zero()) kids.push_back(make_rat(racc));
    for (const auto& [key, ti] : terms) kids.push_back(assemble_term(ti.coef, ti.factors));
    if (kids.empty()) return zero();
    if (kids.size() == 1) return kids[0];
    std::sort(kids.begin(), kids.end(), ExprLess{});
    Node n;
    n.kind = Kind::Add;
    n.kids = std::move(kids);
    return mk(std::move(n));
}

} // namespace

Expr make_add(std::vector<Expr> ops) { return add_impl(std::move(ops), true); }

Expr canonicalize(const Expr& e) {
    const Node& n = e.node();
    switch (n.kind) {
    case Kind::Rational: return make_rat(n.rat);
    case Kind::Symbol: return make_sym(n.name, n.role);
    case Kind::FuncApp: {
        std::vector<Expr> args;
        for (const auto& k : n.kids) args.push_back(canonicalize(k));
        return make_app(n.fn, n.idx, std::move(args));
    }
    case Kind::Exp: return make_exp(canonicalize(n.kids[0]));
    case Kind::Ln: return make_ln(canonicalize(n.kids[0]));
    case Kind::Sin: return make_sin(canonicalize(n.kids[0]));
    case Kind::Cos: return make_cos(canonicalize(n.kids[0]));
    case Kind::Pow: return make_pow(canonicalize(n.kids[0]), canonicalize(n.kids[1]));
    case Kind::Mul: {
        std::vector<Expr> kids;
        for (const auto& k : n.kids) kids.push_back(canonicalize(k));
        return make_mul(std::move(kids));
    }
    case Kind::Add: {
        std::vector<Expr> kids;
        for (const auto& k : n.kids) kids.push_back(canonicalize(k));
        return make_add(std::move(kids));
    }
    }
    throw KernelError("unreachable");
}

} // namespace hypersym

#include "hypersym/probe.hpp"

#include <map>
#include <random>
#include <set>
#include <vector>

namespace hypersym {

namespace {

struct SingularDraw {};

/// dense-ish multivariate polynomial: exponent vector -> coefficient
struct Poly {
    size_t nvars = 0;
    std::map<std::vector<int>, Rational> coeffs;

    Rational eval(const std::vector<Rational>& at) const {
        Rational acc(0);
        for (const auto& [mono, c] : coeffs) {
            Rational t = c;
            for (size_t i = 0; i < nvars; ++i)
                for (int k = 0; k < mono[i]; ++k) t *= at[i];
            acc += t;
        }
        return acc;
    }

    Poly derivative(size_t slot) const {
        Poly d;
        d.nvars = nvars;
        for (const auto& [mono, c] : coeffs) {
            if (mono[slot] == 0) continue;
            auto m2 = mono;
            m2[slot] -= 1;
            d.coeffs[m2] = d.coeffs.count(m2) ? d.coeffs[m2] + c * Rational(mono[slot])
                                              : c * Rational(mono[slot]);
        }
        return d;
    }

    Poly antiderivative(size_t slot) const {
        Poly a;
        a.nvars = nvars;
        for (const auto& [mono, c] : coeffs) {
            auto m2 = mono;
            m2[slot] += 1;
            a.coeffs[m2] = c / Rational(m2[slot]);
        }
        return a;
    }
};

struct Evaluator {
    std::mt19937_64 rng;
    int poly_degree;
    std::map<std::string, Rational> symvals;
    std::set<std::string> int_symbols; // symbols occurring in exponents
    std::map<std::string, Poly> fnpolys;
    std::map<std::string, std::vector<std::pair<std::vector<int>, Poly>>> deriv_cache;
    // transcendental atoms: (tag, evaluated args) -> value
    std::map<std::pair<std::string, std::vector<Rational>>, Rational> atom_vals;

    Rational small_rational() {
        std::uniform_int_distribution<int> num(-9, 9);
        std::uniform_int_distribution<int> den(1, 4);
        return Rational(num(rng), den(rng));
    }

    Rational nonzero_rational() {
        for (;;) {
            Rational r = small_rational();
            if (!r.is_zero()) return r;
        }
    }

    Rational sym_value(const std::string& name) {
        auto it = symvals.find(name);
        if (it != symvals.end()) return it->second;
        Rational v;
        if (int_symbols.count(name)) {
            std::uniform_int_distribution<int> d(2, 4);
            v = Rational(d(rng));
        } else {
            v = nonzero_rational();
        }
        symvals.emplace(name, v);
        return v;
    }

    const Poly& fn_poly(const FuncPtr& f) {
        auto it = fnpolys.find(f->name);
        if (it != fnpolys.end()) return it->second;
        if (f->antideriv_of && f->antideriv_slot >= 0) {
            Poly base = fn_poly(f->antideriv_of);
            return fnpolys.emplace(f->name, base.antiderivative(f->antideriv_slot))
                .first->second;
        }
        Poly p;
        p.nvars = f->arity();
        std::vector<int> mono(p.nvars, 0);
        // all monomials of total degree <= poly_degree
        std::vector<std::vector<int>> monos;
        std::function<void(size_t, int)> gen = [&](size_t i, int rem) {
            if (i == p.nvars) {
                monos.push_back(mono);
                return;
            }
            for (int k = 0; k <= rem; ++k) {
                mono[i] = k;
                gen(i + 1, rem - k);
            }
            mono[i] = 0;
        };
        gen(0, poly_degree);
        for (const auto& m : monos) p.coeffs[m] = small_rational();
        return fnpolys.emplace(f->name, std::move(p)).first->second;
    }

    const Poly& fn_deriv(const FuncPtr& f, const std::vector<int>& idx) {
        auto& entries = deriv_cache[f->name];
        for (const auto& [i, p] : entries)
            if (i == idx) return p;
        Poly p = fn_poly(f);
        for (size_t slot = 0; slot < idx.size(); ++slot)
            for (int k = 0; k < idx[slot]; ++k) p = p.derivative(slot);
        entries.emplace_back(idx, std::move(p));
        return entries.back().second;
    }

    Rational atom_value(const std::string& tag, std::vector<Rational> args) {
        auto key = std::make_pair(tag, std::move(args));
        auto it = atom_vals.find(key);
        if (it != atom_vals.end()) return it->second;
        Rational v = nonzero_rational();
        atom_vals.emplace(std::move(key), v);
        return v;
    }

    Rational eval(const Expr& e) {
        const Node& n = e.node();
        switch (n.kind) {
        case Kind::Rational:
            return n.rat;
        case Kind::Symbol:
            return sym_value(n.name);
        case Kind::FuncApp: {
            std::vector<Rational> at;
            at.reserve(n.kids.size());
            for (const auto& k : n.kids) at.push_back(eval(k));
            return fn_deriv(n.fn, n.idx).eval(at);
        }
        case Kind::Exp: {
            Rational t = eval(n.kids[0]);
            if (t.is_zero()) return Rational(1);
            return atom_value("exp", {t});
        }
        case Kind::Ln: {
            Rational t = eval(n.kids[0]);
            if (t <= Rational(0)) throw SingularDraw{};
            if (t.is_one()) return Rational(0);
            return atom_value("ln", {t});
        }
        case Kind::Sin: {
            Rational t = eval(n.kids[0]);
            if (t.is_zero()) return Rational(0);
            return atom_value("sin", {t});
        }
        case Kind::Cos: {
            Rational t = eval(n.kids[0]);
            if (t.is_zero()) return Rational(1);
            return atom_value("cos", {t});
        }
        case Kind::Pow: {
            Rational b = eval(n.kids[0]);
            Rational x = eval(n.kids[1]);
            if (x.is_integer()) {
                auto k = x.to_int();
                if (!k) throw SingularDraw{};
                if (b.is_zero() && *k < 0) throw SingularDraw{};
                return b.pow_int(*k);
            }
            if (b.is_zero()) {
                if (x > Rational(0)) return Rational(0);
                throw SingularDraw{};
            }
            if (b < Rational(0)) throw SingularDraw{}; // stay in the real domain
            // exact root if available, else an opaque positive atom
            if (auto num = x.num().convert_to<long long>(); true) {
                auto den = x.den().convert_to<long long>();
                if (auto r = b.root(den)) return r->pow_int(num);
            }
            return atom_value("pow", {b, x});
        }
        case Kind::Mul: {
            Rational acc(1);
            for (const auto& k : n.kids) acc *= eval(k);
            return acc;
        }
        case Kind::Add: {
            Rational acc(0);
            for (const auto& k : n.kids) acc += eval(k);
            return acc;
        }
        }
        throw KernelError("unreachable");
    }
};

void collect_exponent_symbols(const Expr& e, bool in_exponent, std::set<std::string>& out) {
    const Node& n = e.node();
    if (n.kind == Kind::Symbol && in_exponent) out.insert(n.name);
    if (n.kind == Kind::Pow) {
        collect_exponent_symbols(n.kids[0], in_exponent, out);
        collect_exponent_symbols(n.kids[1], true, out);
        return;
    }
    for (const auto& k : n.kids) collect_exponent_symbols(k, in_exponent, out);
}

} // namespace

ProbeOutcome probe_compare(const Expr& a, const Expr& b, const ProbeOptions& opt) {
    Expr d = a - b;
    if (d.is_zero()) return ProbeOutcome::Equal;

    std::set<std::string> expsyms;
    collect_exponent_symbols(d, false, expsyms);

    std::mt19937_64 rng(opt.seed);
    int redraws = 0;
    int completed = 0;
    while (completed < opt.trials) {
        if (redraws > opt.redraw_budget) return ProbeOutcome::Undecided;
        Evaluator ev;
        ev.rng.seed(rng());
        ev.poly_degree = opt.poly_degree;
        ev.int_symbols = expsyms;
        try {
            Rational v = ev.eval(d);
            if (!v.is_zero()) return ProbeOutcome::NotEqual;
            ++completed;
        } catch (const SingularDraw&) {
            ++redraws;
        }
    }
    return ProbeOutcome::Equal;
}

bool probe_equal(const Expr& a, const Expr& b, int trials) {
    ProbeOptions opt;
    opt.trials = trials;
    return probe_compare(a, b, opt) == ProbeOutcome::Equal;
}

} // namespace hypersym

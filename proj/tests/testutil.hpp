#pragma once

#include "hypersym/context.hpp"
#include "hypersym/jet.hpp"
#include "hypersym/parser.hpp"

#include <random>
#include <vector>

namespace hypersym::testutil {

/// Random canonical expressions over the given leaf pool.
class ExprGen {
public:
    ExprGen(std::uint64_t seed, std::vector<Expr> leaves)
        : rng_(seed), leaves_(std::move(leaves)) {}

    Expr gen(int depth) {
        if (depth <= 0) return leaf();
        switch (pick(0, 9)) {
        case 0:
        case 1:
            return leaf();
        case 2:
        case 3: {
            std::vector<Expr> kids;
            int n = pick(2, 3);
            for (int i = 0; i < n; ++i) kids.push_back(gen(depth - 1));
            return make_add(std::move(kids));
        }
        case 4:
        case 5: {
            std::vector<Expr> kids;
            int n = pick(2, 3);
            for (int i = 0; i < n; ++i) kids.push_back(gen(depth - 1));
            return make_mul(std::move(kids));
        }
        case 6:
            return make_pow(gen(depth - 1), make_int(pick(1, 3)));
        case 7:
            return make_exp(gen(depth - 2));
        case 8:
            return make_sin(gen(depth - 2));
        default:
            return make_cos(gen(depth - 2));
        }
    }

    /// Differential function of order <= 1 over (x, y, u, u_x, u_y).
    Expr gen_order1(int depth) { return gen(depth); }

    Rational rational() { return Rational(pick(-6, 6), pick(1, 3)); }

    int pick(int lo, int hi) {
        std::uniform_int_distribution<int> d(lo, hi);
        return d(rng_);
    }

private:
    Expr leaf() {
        int k = pick(0, static_cast<int>(leaves_.size()) + 1);
        if (k < static_cast<int>(leaves_.size())) return leaves_[k];
        return make_rat(rational());
    }

    std::mt19937_64 rng_;
    std::vector<Expr> leaves_;
};

inline std::vector<Expr> jet_leaves_order1() {
    return {make_var("x"), make_var("y"), make_var("u"), make_var("u_x"), make_var("u_y")};
}

inline Expr parse_with(const std::string& text, Context& ctx) {
    return parse(text, ctx, JetNames{});
}

} // namespace hypersym::testutil

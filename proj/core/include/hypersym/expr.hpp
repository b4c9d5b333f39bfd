#pragma once

#include "hypersym/rational.hpp"

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypersym {

enum class Kind : unsigned char {
    Rational,
    Symbol,
    FuncApp,
    Exp,
    Ln,
    Sin,
    Cos,
    Pow,
    Mul,
    Add,
};

enum class SymRole : unsigned char { Var, Param };

struct Node;
struct FunctionSymbol;
using FuncPtr = std::shared_ptr<const FunctionSymbol>;

class KernelError : public std::runtime_error {
public:
    explicit KernelError(const std::string& what) : std::runtime_error(what) {}
};

/// Immutable handle to a canonical expression tree node.
class Expr {
public:
    Expr() = default;
    explicit Expr(std::shared_ptr<const Node> p) : p_(std::move(p)) {}

    bool is_null() const { return !p_; }
    const Node& node() const { return *p_; }
    const std::shared_ptr<const Node>& ptr() const { return p_; }

    Kind kind() const;
    bool is_rational() const { return kind() == Kind::Rational; }
    bool is_zero() const;
    bool is_one() const;
    const Rational& rat() const;
    const std::string& sym_name() const;
    SymRole sym_role() const;
    const std::vector<Expr>& kids() const;
    const FuncPtr& fn() const;
    const std::vector<int>& deriv_index() const;

    /// Structural equality (canonical forms are unique per rewrite system).
    bool same(const Expr& o) const;

private:
    std::shared_ptr<const Node> p_;
};

/// Declared function symbol: opaque unless a body is attached.
/// If `antideriv_of` is set, this symbol is a declared antiderivative:
/// differentiating it once in argument slot `antideriv_slot` yields
/// `antideriv_of` applied to the same arguments.
struct FunctionSymbol {
    std::string name;
    std::vector<std::string> params;
    Expr body;
    FuncPtr antideriv_of;
    int antideriv_slot = -1;

    bool opaque() const { return body.is_null(); }
    size_t arity() const { return params.size(); }
};

struct Node {
    Kind kind;
    SymRole role = SymRole::Param;
    Rational rat;
    std::string name;
    FuncPtr fn;
    std::vector<int> idx;
    std::vector<Expr> kids;
    mutable size_t hash_cache = 0;
};

// ---- canonical builders ------------------------------------------------
// Every Expr in the system is produced by these; the results are always in
// canonical form (flattened sorted sums of monomials over atomic factors,
// rational constants folded, like terms collected, integer powers of sums
// expanded, exp factors merged, sums with polynomial denominators combined
// over the common denominator).

Expr make_rat(Rational r);
Expr make_int(long long v);
Expr make_sym(std::string name, SymRole role);
inline Expr make_var(std::string name) { return make_sym(std::move(name), SymRole::Var); }
inline Expr make_param(std::string name) { return make_sym(std::move(name), SymRole::Param); }
Expr make_add(std::vector<Expr> ops);
Expr make_mul(std::vector<Expr> ops);
Expr make_pow(const Expr& base, const Expr& exponent);
Expr make_exp(const Expr& arg);
Expr make_ln(const Expr& arg);
Expr make_sin(const Expr& arg);
Expr make_cos(const Expr& arg);
Expr make_app(FuncPtr fn, std::vector<int> idx, std::vector<Expr> args);
/// Application with zero derivative multi-index.
Expr make_app0(FuncPtr fn, std::vector<Expr> args);

/// Rebuild through the canonical builders (identity on canonical trees).
Expr canonicalize(const Expr& e);

// ---- ordering / hashing -------------------------------------------------

int compare(const Expr& a, const Expr& b);
size_t hash_of(const Expr& e);

// ---- operators ----------------------------------------------------------

inline Expr operator+(const Expr& a, const Expr& b) { return make_add({a, b}); }
inline Expr operator-(const Expr& a, const Expr& b) { return make_add({a, make_mul({make_int(-1), b})}); }
inline Expr operator*(const Expr& a, const Expr& b) { return make_mul({a, b}); }
inline Expr operator/(const Expr& a, const Expr& b) { return make_mul({a, make_pow(b, make_int(-1))}); }
inline Expr operator-(const Expr& a) { return make_mul({make_int(-1), a}); }

// ---- structure helpers --------------------------------------------------

/// Additive terms of a canonical expression (the expression itself if not a sum).
std::vector<Expr> terms_of(const Expr& e);
/// Multiplicative factors (rational coefficient split off).
struct Factorization {
    Rational coef;
    std::vector<Expr> factors; // each an atom or a Pow atom, base-sorted
};
Factorization factorize_term(const Expr& term);
/// Recompose a factorization (used by collectors; result is canonical).
Expr assemble_term(const Rational& coef, const std::vector<Expr>& factors);

/// Does `e` reference symbol `name` anywhere (including through FuncApp args)?
bool depends_on(const Expr& e, const std::string& name);
/// Does `e` contain an application of function symbol `fname`?
bool contains_app(const Expr& e, const std::string& fname);
/// Collect names of all symbols with the given role.
void collect_symbols(const Expr& e, SymRole role, std::vector<std::string>& out);

} // namespace hypersym

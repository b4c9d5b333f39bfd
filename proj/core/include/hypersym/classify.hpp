#pragma once

#include "hypersym/detsys.hpp"
#include "hypersym/probe.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hypersym {

/// Ordered list of the u- (or u_x-) dependent factors of a reduced residual.
struct IndeterminateSet {
    std::vector<Expr> elements;
    std::string var;  // "u" or "u_x" (jet variable name)
    FuncPtr fsym;     // the opaque labelling symbol appearing in the elements
};

/// Distinct var-dependent factors of the residual's terms, with 1 included
/// when a var-free term exists.
IndeterminateSet extract_indeterminates(const Expr& residual, const std::string& var,
                                        const FuncPtr& fsym);

/// Determinant of the derivative matrix (row k holds k-th derivatives).
Expr wronskian(const std::vector<Expr>& fs, const std::string& var);

struct CaseCondition {
    int m = 0;
    std::vector<int> subset;    // indices into the indeterminate set
    std::vector<Expr> elements; // the chosen indeterminates
    Expr ode;                   // Wronskian (or linear combination), canonical
    bool identically_zero = false;
    int duplicate_of = -1; // index of an earlier proportional condition
    std::string var;
    FuncPtr fsym;
};

/// One condition per m-subset, enumerated in lexicographic index order.
/// Identically-zero and proportional-duplicate conditions are flagged, never
/// dropped.
std::vector<CaseCondition> enumerate_case_conditions(const IndeterminateSet& s, int m);

/// First-order alternative: sum coeff_i * element_i over the subset.
CaseCondition linear_combination_condition(const IndeterminateSet& s,
                                           const std::vector<int>& subset,
                                           const std::vector<Expr>& coeffs);

/// a == c*b for a nonzero rational c?
std::optional<Rational> proportional_ratio(const Expr& a, const Expr& b);

enum class CheckOutcome { True, False, Undecided };

/// Substitute the closed form into the condition's ODE and decide whether it
/// vanishes identically (in the classification variable and all parameters).
CheckOutcome check_condition_solution(const Expr& f_closed, const CaseCondition& c);

/// Equivalence transformations of the family (linear changes of variables).
/// For F = F(u):   H(u) = (a c / r) F(r u + s).
/// For F = F(u_x): H(u_x) = (a c / r) F((r/a) u_x).
struct EquivalenceParams {
    Expr a, b, c, d, r, s; // b, d (and s for the u_x family) do not enter H
};
Expr equivalence_transform(const Expr& f, FMode family, const EquivalenceParams& p);

} // namespace hypersym

#pragma once

#include "hypersym/expr.hpp"

#include <cstdint>

namespace hypersym {

enum class ProbeOutcome { Equal, NotEqual, Undecided };

struct ProbeOptions {
    int trials = 20;
    std::uint64_t seed = 0x5EEDED;
    int poly_degree = 2;   // degree of the stand-in polynomials for opaque symbols
    int redraw_budget = 200;
};

/// Canonicalization-first equality with an exact random-evaluation fallback:
/// opaque function symbols become random low-degree polynomials, parameters
/// random rationals (integers when they occur in exponents), and
/// transcendental atoms independent random values keyed by their evaluated
/// argument. All arithmetic is exact; no floating point. Singular draws
/// (division by zero, ln of a non-positive value) are redrawn against a
/// bounded budget; running out yields Undecided, never Equal.
ProbeOutcome probe_compare(const Expr& a, const Expr& b, const ProbeOptions& opt = {});

/// True iff probe_compare says Equal. Undecided maps to false.
bool probe_equal(const Expr& a, const Expr& b, int trials = 20);

} // namespace hypersym

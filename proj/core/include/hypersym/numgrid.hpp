#pragma once

#include "hypersym/expr.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace hypersym {

struct EvalSingular : KernelError {
    using KernelError::KernelError;
};
struct DivergenceError : KernelError {
    using KernelError::KernelError;
};

/// Double-precision evaluation of a closed-form expression (no opaque
/// function applications). Throws EvalSingular on ln of a non-positive value,
/// division by zero or a non-finite result.
double eval_double(const Expr& e, const std::map<std::string, double>& env);

/// Characteristic boundary-value problem for u_xy = F(u, u_x) on a rectangle:
/// u(x, y0) = f(x), u(x0, y) = g(y), compatible at the corner.
struct GoursatProblem {
    Expr F;  // closed form over u, u_x (x, y allowed)
    Expr fx; // boundary data on y = y0, expression in x
    Expr gy; // boundary data on x = x0, expression in y
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    int nx = 32, ny = 32;
};

/// Parse {"F": text, "f": text, "g": text, "rect": [x0,x1,y0,y1],
///        "grids": [n, ...] (optional)} in the expression grammar.
GoursatProblem problem_from_json(const nlohmann::json& j, std::vector<int>* grids = nullptr);

struct GridSolution {
    int nx = 0, ny = 0;
    double x0 = 0, y0 = 0, hx = 0, hy = 0;
    std::vector<double> u; // (nx+1) x (ny+1), row index j, column index i

    double at(int i, int j) const { return u[static_cast<size_t>(j) * (nx + 1) + i]; }
    double& at(int i, int j) { return u[static_cast<size_t>(j) * (nx + 1) + i]; }
    double x_of(int i) const { return x0 + i * hx; }
    double y_of(int j) const { return y0 + j * hy; }
};

/// March the characteristic rectangle scheme
///   u_ij = u_{i-1,j} + u_{i,j-1} - u_{i-1,j-1} + hx hy F(args at cell center)
/// with midpoint-averaged arguments and one fixed-point correction per cell.
GridSolution solve_goursat(const GoursatProblem& p);

/// Max-norm of the central-difference divergence D_x Phi + D_y Psi over
/// interior nodes; singular nodes are masked and reported.
struct FluxExprs {
    Expr phi;
    Expr psi;
};
struct ResidualNorm {
    double norm = 0;
    double masked_fraction = 0;
};
ResidualNorm conservation_residual_norm(const GridSolution& s, const FluxExprs& theta);

struct ConvergenceResult {
    std::vector<int> grids;
    std::vector<double> residual_norms;
    std::vector<double> orders; // log2 ratios between consecutive grids
    double masked_fraction = 0;
};

/// Run the problem on each grid size and estimate the convergence order of
/// the conservation residual.
ConvergenceResult conservation_convergence(const GoursatProblem& p, const FluxExprs& theta,
                                           const std::vector<int>& grids);

/// Max-error convergence against a closed-form exact solution.
ConvergenceResult solution_convergence(const GoursatProblem& p, const Expr& exact,
                                       const std::vector<int>& grids);

void write_grid_csv(const GridSolution& s, const std::string& path);

} // namespace hypersym

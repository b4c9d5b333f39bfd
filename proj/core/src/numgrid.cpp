#include "hypersym/numgrid.hpp"

#include "hypersym/parser.hpp"

#include <cmath>
#include <fstream>

namespace hypersym {

double eval_double(const Expr& e, const std::map<std::string, double>& env) {
    const Node& n = e.node();
    switch (n.kind) {
    case Kind::Rational:
        return n.rat.to_double();
    case Kind::Symbol: {
        auto it = env.find(n.name);
        if (it == env.end()) throw EvalSingular("unbound symbol '" + n.name + "'");
        return it->second;
    }
    case Kind::FuncApp:
        throw EvalSingular("opaque function '" + n.fn->name + "' in numeric context");
    case Kind::Exp:
        return std::exp(eval_double(n.kids[0], env));
    case Kind::Ln: {
        double t = eval_double(n.kids[0], env);
        if (!(t > 0)) throw EvalSingular("ln of a non-positive value");
        return std::log(t);
    }
    case Kind::Sin:
        return std::sin(eval_double(n.kids[0], env));
    case Kind::Cos:
        return std::cos(eval_double(n.kids[0], env));
    case Kind::Pow: {
        double b = eval_double(n.kids[0], env);
        double x = eval_double(n.kids[1], env);
        double r = std::pow(b, x);
        if (!std::isfinite(r)) throw EvalSingular("non-finite power");
        return r;
    }
    case Kind::Mul: {
        double acc = 1;
        for (const auto& k : n.kids) acc *= eval_double(k, env);
        if (!std::isfinite(acc)) throw EvalSingular("non-finite product");
        return acc;
    }
    case Kind::Add: {
        double acc = 0;
        for (const auto& k : n.kids) acc += eval_double(k, env);
        return acc;
    }
    }
    throw KernelError("unreachable");
}

GoursatProblem problem_from_json(const nlohmann::json& j, std::vector<int>* grids) {
    GoursatProblem p;
    Context ctx;
    JetNames jets{};
    p.F = parse(j.at("F").get<std::string>(), ctx, jets);
    p.fx = parse(j.at("f").get<std::string>(), ctx, jets);
    p.gy = parse(j.at("g").get<std::string>(), ctx, jets);
    auto rect = j.at("rect");
    p.x0 = rect.at(0).get<double>();
    p.x1 = rect.at(1).get<double>();
    p.y0 = rect.at(2).get<double>();
    p.y1 = rect.at(3).get<double>();
    if (grids && j.contains("grids"))
        *grids = j.at("grids").get<std::vector<int>>();
    return p;
}

GridSolution solve_goursat(const GoursatProblem& p) {
    if (p.nx < 4 || p.ny < 4) throw KernelError("grid sizes must be at least 4");
    GridSolution s;
    s.nx = p.nx;
    s.ny = p.ny;
    s.x0 = p.x0;
    s.y0 = p.y0;
    s.hx = (p.x1 - p.x0) / p.nx;
    s.hy = (p.y1 - p.y0) / p.ny;
    s.u.assign(static_cast<size_t>(p.nx + 1) * (p.ny + 1), 0.0);

    std::map<std::string, double> env;
    for (int i = 0; i <= p.nx; ++i) {
        env.clear();
        env["x"] = s.x_of(i);
        s.at(i, 0) = eval_double(p.fx, env);
    }
    for (int j = 0; j <= p.ny; ++j) {
        env.clear();
        env["y"] = s.y_of(j);
        s.at(0, j) = eval_double(p.gy, env);
    }
    double corner_gap = std::abs(s.at(0, 0) - [&] {
        std::map<std::string, double> e2{{"y", p.y0}};
        return eval_double(p.gy, e2);
    }());
    if (corner_gap > 1e-12) throw KernelError("incompatible Goursat corner data");

    const double guard = 1e100;
    for (int j = 1; j <= p.ny; ++j) {
        for (int i = 1; i <= p.nx; ++i) {
            double uw = s.at(i - 1, j);     // west
            double us_ = s.at(i, j - 1);    // south
            double usw = s.at(i - 1, j - 1);
            double a = uw + us_ - usw;
            double xm = s.x_of(i) - 0.5 * s.hx;
            double ym = s.y_of(j) - 0.5 * s.hy;
            auto fval = [&](double ucand) {
                std::map<std::string, double> fe;
                fe["x"] = xm;
                fe["y"] = ym;
                fe["u"] = 0.25 * (uw + us_ + usw + ucand);
                fe["u_x"] = 0.5 * ((ucand - uw) + (us_ - usw)) / s.hx;
                return eval_double(p.F, fe);
            };
            double pred = a + s.hx * s.hy * fval(a);
            double val = a + s.hx * s.hy * fval(pred); // one fixed-point correction
            if (!std::isfinite(val) || std::abs(val) > guard)
                throw DivergenceError("solution blew up at cell (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")");
            s.at(i, j) = val;
        }
    }
    return s;
}

ResidualNorm conservation_residual_norm(const GridSolution& s, const FluxExprs& theta) {
    const int nx = s.nx, ny = s.ny;
    // node-wise flux values on the interior (first derivatives by central
    // differences), NaN marks a masked node
    std::vector<double> P(static_cast<size_t>(nx + 1) * (ny + 1),
                          std::numeric_limits<double>::quiet_NaN());
    std::vector<double> Q = P;
    size_t masked = 0, total = 0;
    for (int j = 1; j < ny; ++j) {
        for (int i = 1; i < nx; ++i) {
            std::map<std::string, double> env;
            env["x"] = s.x_of(i);
            env["y"] = s.y_of(j);
            env["u"] = s.at(i, j);
            env["u_x"] = (s.at(i + 1, j) - s.at(i - 1, j)) / (2 * s.hx);
            env["u_y"] = (s.at(i, j + 1) - s.at(i, j - 1)) / (2 * s.hy);
            ++total;
            try {
                P[static_cast<size_t>(j) * (nx + 1) + i] = eval_double(theta.phi, env);
                Q[static_cast<size_t>(j) * (nx + 1) + i] = eval_double(theta.psi, env);
            } catch (const EvalSingular&) {
                ++masked;
            }
        }
    }
    double norm = 0;
    for (int j = 2; j < ny - 1; ++j) {
        for (int i = 2; i < nx - 1; ++i) {
            auto idx = [&](int ii, int jj) { return static_cast<size_t>(jj) * (nx + 1) + ii; };
            double pe = P[idx(i + 1, j)], pw = P[idx(i - 1, j)];
            double qn = Q[idx(i, j + 1)], qs = Q[idx(i, j - 1)];
            if (std::isnan(pe) || std::isnan(pw) || std::isnan(qn) || std::isnan(qs)) continue;
            double div = (pe - pw) / (2 * s.hx) + (qn - qs) / (2 * s.hy);
            norm = std::max(norm, std::abs(div));
        }
    }
    ResidualNorm r;
    r.norm = norm;
    r.masked_fraction = total ? static_cast<double>(masked) / static_cast<double>(total) : 0.0;
    return r;
}

ConvergenceResult conservation_convergence(const GoursatProblem& p, const FluxExprs& theta,
                                           const std::vector<int>& grids) {
    ConvergenceResult out;
    out.grids = grids;
    for (int n : grids) {
        GoursatProblem pn = p;
        pn.nx = pn.ny = n;
        GridSolution s = solve_goursat(pn);
        ResidualNorm r = conservation_residual_norm(s, theta);
        out.residual_norms.push_back(r.norm);
        out.masked_fraction = std::max(out.masked_fraction, r.masked_fraction);
    }
    for (size_t k = 1; k < out.residual_norms.size(); ++k) {
        double r0 = out.residual_norms[k - 1], r1 = out.residual_norms[k];
        out.orders.push_back(r1 > 0 ? std::log2(r0 / r1) : std::numeric_limits<double>::infinity());
    }
    return out;
}

ConvergenceResult solution_convergence(const GoursatProblem& p, const Expr& exact,
                                       const std::vector<int>& grids) {
    ConvergenceResult out;
    out.grids = grids;
    for (int n : grids) {
        GoursatProblem pn = p;
        pn.nx = pn.ny = n;
        GridSolution s = solve_goursat(pn);
        double err = 0;
        for (int j = 0; j <= s.ny; ++j) {
            for (int i = 0; i <= s.nx; ++i) {
                std::map<std::string, double> env{{"x", s.x_of(i)}, {"y", s.y_of(j)}};
                err = std::max(err, std::abs(s.at(i, j) - eval_double(exact, env)));
            }
        }
        out.residual_norms.push_back(err);
    }
    for (size_t k = 1; k < out.residual_norms.size(); ++k) {
        double r0 = out.residual_norms[k - 1], r1 = out.residual_norms[k];
        out.orders.push_back(r1 > 0 ? std::log2(r0 / r1) : std::numeric_limits<double>::infinity());
    }
    return out;
}

void write_grid_csv(const GridSolution& s, const std::string& path) {
    std::ofstream out(path);
    out << "x,y,u\n";
    for (int j = 0; j <= s.ny; ++j)
        for (int i = 0; i <= s.nx; ++i)
            out << s.x_of(i) << "," << s.y_of(j) << "," << s.at(i, j) << "\n";
}

} // namespace hypersym

// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include "hypersym/catalog.hpp"
#include "hypersym/numgrid.hpp"
#include "hypersym/parser.hpp"
#include "hypersym/printer.hpp"

#include "testutil.hpp"

#include <chrono>
#include <cstdio>
#include <set>

using namespace hypersym;
using testutil::ExprGen;

namespace {

int g_failures = 0;

struct Criterion {
    const char* id;
    const char* what;
    double budget_s;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string note;

    void expect(bool cond, const std::string& msg) {
        if (!cond) {
            ok = false;
            if (!msg.empty()) note += (note.empty() ? "" : "; ") + msg;
        }
    }

    ~Criterion() {
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (budget_s > 0 && secs > budget_s) {
            ok = false;
            note += (note.empty() ? "" : "; ") + std::string("over time budget");
        }
        if (!ok) ++g_failures;
        std::printf("%s  [%s] %s  (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", id, what, secs,
                    note.empty() ? "" : " -- ", note.c_str());
        std::fflush(stdout);
    }
};

const JetContext kCtx{};

void a1_determining_system() {
    Criterion c{"A1", "determining-system reproduction (Eq. 2a constraints, Eq. 3 / Eq. 12 residuals)", 10.0};
    DeterminingSystem su = split_system(FSpec::opaque_of_u(), kCtx);
    std::set<std::string> got;
    for (const auto& e : su.constraints) got.insert(render(e));
    c.expect(got == std::set<std::string>{"xi_u", "xi_y", "eta_u", "eta_x", "phi_uu", "g_x",
                                          "g_y"},
             "F(u) constraint set differs");
    Context cu;
    Expr eq3 = parse("func xi(x); func eta(y); func h(x,y); func F(u); param A;"
                     "h_xy + F*(A - eta_y - xi_x) - F_u*h - A*u*F_u",
                     cu, JetNames{});
    c.expect((su.residual - eq3).is_zero(), "F(u) residual differs from the printed form");

    DeterminingSystem sx = split_system(FSpec::opaque_of_ux(), kCtx);
    std::set<std::string> gotx;
    for (const auto& e : sx.constraints) gotx.insert(render(e));
    c.expect(gotx == std::set<std::string>{"xi_u", "xi_y", "eta_u", "eta_x", "phi_uu", "g_x"},
             "F(u_x) constraint set differs");
    Context cx;
    Expr eq12 = parse("func xi(x); func eta(y); func h(x,y); func g(y); func F(v);"
                      "h_xy + u_x*g_y + F(u_x)*(g - eta_y - xi_x) + u_x*F_v(u_x)*(xi_x - g)"
                      " - F_v(u_x)*h_x",
                      cx, JetNames{});
    c.expect((sx.residual - eq12).is_zero(), "F(u_x) residual differs from the printed form");
}

void a2_case_conditions() {
    Criterion c{"A2", "case-condition reproduction (all printed Wronskian conditions)", 30.0};
    for (const std::string family : {"u", "ux"}) {
        const auto& cs = builtin_catalog().conditions.at(family);
        IndeterminateSet s = catalog_indeterminates(family);
        for (const auto& [m, texts] : cs.printed) {
            auto gen = enumerate_case_conditions(s, m);
            for (const auto& text : texts) {
                Expr printed = parse_condition_text(family, text, s);
                bool hit = false;
                for (const auto& cond : gen)
                    hit = hit || proportional_ratio(cond.ode, printed).has_value();
                c.expect(hit, family + " m=" + std::to_string(m) + " unmatched: " + text);
            }
        }
        // expected counts: C(n, m) conditions per m
        c.expect(enumerate_case_conditions(s, 2).size() ==
                     (family == "u" ? 6u : 10u),
                 "m=2 enumeration size");
    }
}

void a3_classification() {
    Criterion c{"A3", "classification verification (15 entries: Thm 2.2 + both tables)", 60.0};
    int passed = 0, total = 0;
    for (const std::string table : {"thm22", "table1", "table2"}) {
        Report r = verify_class_table(table);
        for (const auto& e : r.entries) {
            ++total;
            if (e.pass) ++passed;
            else c.expect(false, e.id + ": " + e.detail);
        }
    }
    c.expect(total == 15, "expected 15 entries");
    c.expect(passed == total, std::to_string(passed) + "/" + std::to_string(total));
}

void a4_condition_solutions() {
    Criterion c{"A4", "condition-solution checks (closed forms solve their case ODEs)", 0};
    IndeterminateSet su = catalog_indeterminates("u");
    auto m3 = enumerate_case_conditions(su, 3);
    {
        Context pc;
        Expr f = parse("a3*(u+a1)^a2", pc, JetNames{});
        c.expect(check_condition_solution(f, m3[0]) == CheckOutcome::True,
                 "a3 (u+a1)^a2 fails its third-order condition");
    }
    {
        // w = b2 ln(u+b1) + b3 solves 2 w_uu^2 - w_u w_uuu = 0
        Context pc;
        Expr weq = parse("func w(u); 2*w_uu^2 - w_u*w_uuu", pc, JetNames{});
        auto wf = std::make_shared<FunctionSymbol>(*pc.find_func("w"));
        wf->body = parse_jet("b2*ln(u+b1) + b3");
        Bindings b;
        b.functions["w"] = wf;
        c.expect(substitute(weq, b).is_zero(), "w = b2 ln(u+b1)+b3 fails the w-equation");
    }
    IndeterminateSet sx = catalog_indeterminates("ux");
    Expr alpha = make_param("alpha"), beta = make_param("beta"), sigma = make_param("sigma");
    {
        CaseCondition lc = linear_combination_condition(sx, {0, 1, 3}, {alpha, beta, sigma});
        Context pc;
        Expr f = parse("delta*exp(-beta*u_x/sigma) - alpha*(-sigma+beta*u_x)/beta^2", pc,
                       JetNames{});
        c.expect(check_condition_solution(f, lc) == CheckOutcome::True,
                 "exponential solution fails its linear-combination condition");
    }
    {
        CaseCondition lc = linear_combination_condition(sx, {0, 1, 2}, {alpha, beta, sigma});
        Context pc;
        Expr f = parse("delta*u_x^(-beta/sigma) - alpha*u_x/(beta+sigma)", pc, JetNames{});
        c.expect(check_condition_solution(f, lc) == CheckOutcome::True,
                 "power solution fails its linear-combination condition");
    }
    {
        // the order-5 condition: F'' = e^w with w = c3 + c2 ln(u_x + c1),
        // integrated twice in closed form
        auto m5 = enumerate_case_conditions(sx, 5);
        Context pc;
        Expr f = parse("exp(c3)*(u_x+c1)^(c2+2)/((c2+1)*(c2+2))", pc, JetNames{});
        c.expect(check_condition_solution(f, m5[0]) == CheckOutcome::True,
                 "double-antiderivative solution fails the order-5 condition");
    }
}

void a5_claw_catalog() {
    Criterion c{"A5", "conservation-law verification (catalog incl. expected Eq. 30a failure)", 0};
    Report r = verify_claw_catalog();
    for (const auto& e : r.entries)
        c.expect(e.pass, e.id + ": " + e.detail);
    // the printed arbitrary-F flux must be flagged as failing, with the
    // corrected antiderivative form passing
    bool has_printed = false, has_corrected = false;
    for (const auto& e : builtin_catalog().claws) {
        if (e.id == "arbF_Qux_printed") has_printed = e.expect_flux_fail;
        if (e.id == "arbF_Qux_corrected") has_corrected = !e.expect_flux_fail;
    }
    c.expect(has_printed && has_corrected, "printed/corrected pair missing from the catalog");
}

void a6_t_suite() {
    Criterion c{"A6", "T-equation suite (T1..T3 solve it; the four point symmetries hold)", 0};
    Report r = verify_t_suite();
    for (const auto& e : r.entries) c.expect(e.pass, e.id + ": " + e.detail);
}

void a7_property_suites() {
    Criterion c{"A7", "property suites (Euler/divergence, D_x D_y commutation, Wronskian, prolongation)", 0};
    {
        ExprGen gen(101, testutil::jet_leaves_order1());
        int bad = 0;
        for (int i = 0; i < 200; ++i) {
            Expr Phi = gen.gen(3), Psi = gen.gen(3);
            Expr div = total_derivative(Phi, 0, kCtx) + total_derivative(Psi, 1, kCtx);
            if (!euler_u(div, kCtx).is_zero()) ++bad;
        }
        c.expect(bad == 0, std::to_string(bad) + " Euler failures");
    }
    {
        std::vector<Expr> leaves = testutil::jet_leaves_order1();
        leaves.push_back(make_var("u_xx"));
        leaves.push_back(make_var("u_yy"));
        ExprGen gen(103, leaves);
        int bad = 0;
        for (int i = 0; i < 200; ++i) {
            Expr e = gen.gen(3);
            Expr xy = total_derivative(total_derivative(e, 0, kCtx), 1, kCtx);
            Expr yx = total_derivative(total_derivative(e, 1, kCtx), 0, kCtx);
            if (!(xy - yx).is_zero()) ++bad;
        }
        c.expect(bad == 0, std::to_string(bad) + " commutation failures");
    }
    {
        Context cc;
        Expr g1 = parse("func g1(u); g1", cc, JetNames{});
        Expr g2 = parse("func g2(u); g2", cc, JetNames{});
        Expr g3 = parse("func g3(u); g3", cc, JetNames{});
        ExprGen gen(107, {make_var("u")});
        int bad = 0;
        for (int i = 0; i < 100; ++i) {
            Expr a = gen.gen(2) + g1, b = gen.gen(2) + g2, e = gen.gen(2) + g3;
            if (!(wronskian({a, b, e}, "u") + wronskian({b, a, e}, "u")).is_zero()) ++bad;
            if (!wronskian({a, e, a}, "u").is_zero()) ++bad;
        }
        c.expect(bad == 0, std::to_string(bad) + " Wronskian failures");
    }
    {
        ExprGen gen(109, {make_var("x"), make_var("y"), make_var("u")});
        Expr a = make_param("a"), b = make_param("b");
        int bad = 0;
        for (int i = 0; i < 50; ++i) {
            PointVectorField v1{gen.gen(2), gen.gen(2), gen.gen(2)};
            PointVectorField v2{gen.gen(2), gen.gen(2), gen.gen(2)};
            PointVectorField lin{a * v1.xi + b * v2.xi, a * v1.eta + b * v2.eta,
                                 a * v1.phi + b * v2.phi};
            auto p1 = prolong2(v1, kCtx), p2 = prolong2(v2, kCtx), pl = prolong2(lin, kCtx);
            for (auto& [coord, e] : pl.coeff)
                if (!(e - (a * p1.coeff[coord] + b * p2.coeff[coord])).is_zero()) ++bad;
        }
        c.expect(bad == 0, std::to_string(bad) + " prolongation failures");
    }
}

void a8_numerics() {
    {
        Criterion c{"A8a", "Liouville Goursat run: solution and Eq. 33a (p=x) residual orders >= 1.8", 30.0};
        GoursatProblem p;
        Context cc;
        p.F = parse("exp(u)", cc, JetNames{});
        p.fx = parse("ln(2)-2*ln(x+1)", cc, JetNames{});
        p.gy = parse("ln(2)-2*ln(1+y)", cc, JetNames{});
        p.x0 = p.y0 = 1;
        p.x1 = p.y1 = 2;
        Expr exact = parse("ln(2/(x+y)^2)", cc, JetNames{});
        auto sol = solution_convergence(p, exact, {32, 64, 128});
        for (double o : sol.orders)
            c.expect(o >= 1.8, "solution order " + std::to_string(o));
        FluxExprs th{parse("-exp(u)*x + u_y", cc, JetNames{}),
                     parse("x*u_x^2/2", cc, JetNames{})};
        auto cons = conservation_convergence(p, th, {32, 64, 128});
        for (double o : cons.orders)
            c.expect(o >= 1.8, "claw residual order " + std::to_string(o));
        c.expect(cons.masked_fraction == 0.0, "masked nodes");
    }
    {
        Criterion c{"A8b", "u_xy = u_x^2 run: solution and Theta_1 (beta1=0, alpha1=-2) orders >= 1.8", 30.0};
        GoursatProblem p;
        Context cc;
        p.F = parse("u_x^2", cc, JetNames{});
        // exact solution -ln(5-x-y) keeps u_x > 0 so ln(u_x) in Psi is real
        p.fx = parse("-ln(4-x)", cc, JetNames{});
        p.gy = parse("-ln(4-y)", cc, JetNames{});
        p.x0 = p.y0 = 1;
        p.x1 = p.y1 = 2;
        Expr exact = parse("-ln(5-x-y)", cc, JetNames{});
        auto sol = solution_convergence(p, exact, {32, 64, 128});
        for (double o : sol.orders)
            c.expect(o >= 1.8, "solution order " + std::to_string(o));
        FluxExprs th{parse("-u", cc, JetNames{}), parse("ln(u_x)", cc, JetNames{})};
        auto cons = conservation_convergence(p, th, {32, 64, 128});
        for (double o : cons.orders)
            c.expect(o >= 1.8, "claw residual order " + std::to_string(o));
        c.expect(cons.masked_fraction == 0.0, "masked nodes");
    }
    {
        Criterion c{"A8c", "u_xy = u^2+1 run: Eq. 37a residual order >= 1.8", 30.0};
        GoursatProblem p;
        Context cc;
        p.F = parse("u^2+1", cc, JetNames{});
        p.fx = parse("x/8", cc, JetNames{});
        p.gy = parse("y^2/8", cc, JetNames{});
        p.x0 = p.y0 = 0;
        p.x1 = p.y1 = 1;
        FluxExprs th{parse("-u-u^3/3", cc, JetNames{}), parse("u_x^2/2", cc, JetNames{})};
        auto cons = conservation_convergence(p, th, {32, 64, 128});
        for (double o : cons.orders)
            c.expect(o >= 1.8, "claw residual order " + std::to_string(o));
    }
}

} // namespace

int main() {
    a1_determining_system();
    a2_case_conditions();
    a3_classification();
    a4_condition_solutions();
    a5_claw_catalog();
    a6_t_suite();
    a7_property_suites();
    a8_numerics();
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria pass\n");
    return 0;
}

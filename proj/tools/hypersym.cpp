#include "hypersym/catalog.hpp"
#include "hypersym/json_io.hpp"
#include "hypersym/numgrid.hpp"
#include "hypersym/parser.hpp"
#include "hypersym/printer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

using namespace hypersym;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct Output {
    bool as_json = false;

    void emit(const json& j, const std::string& text) const {
        if (as_json) {
            json out = j;
            out["schema_version"] = 1;
            std::cout << out.dump(2) << "\n";
        } else {
            std::cout << text;
        }
    }

    int error(const std::string& code, const std::string& msg) const {
        if (as_json)
            std::cout << json{{"schema_version", 1}, {"error", {{"code", code}, {"message", msg}}}}
                             .dump(2)
                      << "\n";
        else
            std::cerr << "error: " << msg << "\n";
        return kExitUsage;
    }
};

std::string report_text(const Report& r) {
    std::string s = r.title + "\n";
    for (const auto& e : r.entries) {
        s += (e.pass ? "  PASS  " : "  FAIL  ") + e.id;
        if (!e.detail.empty()) s += "  [" + e.detail + "]";
        s += "\n";
    }
    s += r.all_pass() ? "all entries pass\n" : "FAILURES present\n";
    return s;
}

int report_exit(const Report& r) { return r.all_pass() ? kExitOk : kExitVerifyFailed; }

FSpec fspec_from_text(const std::string& text, Context& ctx) {
    if (text == "F(u)" || text == "opaque-u") {
        FSpec f;
        f.mode = FMode::OpaqueOfU;
        f.fsym = ctx.find_func("F") ? ctx.find_func("F") : ctx.declare_func("F", {"u"});
        return f;
    }
    if (text == "F(u_x)" || text == "opaque-ux") {
        FSpec f;
        f.mode = FMode::OpaqueOfUx;
        f.fsym = ctx.find_func("F") ? ctx.find_func("F") : ctx.declare_func("F", {"v"});
        return f;
    }
    return FSpec::closed_form(parse(text, ctx, JetNames{}));
}

std::vector<int> parse_grid_list(const std::string& s) {
    std::vector<int> grids;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        grids.push_back(std::stoi(s.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return grids;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lie symmetry classification and conservation laws of u_xy = F(u, u_x)"};
    app.require_subcommand(1);
    Output out;
    app.add_flag("--json", out.as_json, "emit JSON instead of text");

    std::string parse_expr;
    auto* cmd_parse = app.add_subcommand("parse", "parse and canonicalize an expression");
    cmd_parse->add_option("expr", parse_expr, "expression (may start with declarations)")
        ->required();

    std::string family = "u";
    auto* cmd_detsys = app.add_subcommand("detsys", "determining system of the family");
    cmd_detsys->add_option("--family", family, "u | ux")->required();

    int subset_m = 2;
    auto* cmd_cases = app.add_subcommand("cases", "Wronskian case conditions");
    cmd_cases->add_option("--family", family, "u | ux")->required();
    cmd_cases->add_option("--m", subset_m, "number of linearly dependent indeterminates")
        ->required();

    std::string f_text, q_text, phi_text, psi_text;
    int cond_index = 0;
    auto* cmd_checkf = app.add_subcommand("check-f", "check a closed form against a condition");
    cmd_checkf->add_option("--family", family, "u | ux")->required();
    cmd_checkf->add_option("--f", f_text, "closed form for F")->required();
    cmd_checkf->add_option("--m", subset_m, "subset size (default 2)");
    cmd_checkf->add_option("--condition", cond_index, "condition index within the enumeration")
        ->required();

    std::string table = "thm22";
    int entry_index = -1;
    auto* cmd_vclass = app.add_subcommand("verify-class", "verify a classification table");
    cmd_vclass->add_option("--table", table, "thm22 | table1 | table2 | extra | all")->required();
    cmd_vclass->add_option("--entry", entry_index, "verify a single entry (0-based)");

    auto* cmd_vclaw = app.add_subcommand("verify-claws", "verify the conservation-law catalog");
    (void)cmd_vclaw;

    auto* cmd_claw = app.add_subcommand("claw", "conservation-law operations");
    cmd_claw->require_subcommand(1);
    auto* claw_verify = cmd_claw->add_subcommand("verify", "verify a multiplier/flux pair");
    claw_verify->add_option("--f", f_text, "F: closed form, or F(u) / F(u_x) for opaque")
        ->required();
    claw_verify->add_option("--q", q_text, "multiplier Q")->required();
    claw_verify->add_option("--phi", phi_text, "flux x-component");
    claw_verify->add_option("--psi", psi_text, "flux y-component");
    auto* claw_derive = cmd_claw->add_subcommand("derive", "derive a flux from a multiplier");
    claw_derive->add_option("--f", f_text, "F")->required();
    claw_derive->add_option("--q", q_text, "multiplier Q")->required();

    std::string t_text;
    auto* cmd_teq = app.add_subcommand("t-eq", "residual of the multiplier T-equation");
    cmd_teq->add_option("--t", t_text, "T(z, y) closed form")->required();

    std::string problem_path, grids_text = "32,64,128", exact_text;
    double min_order = 1.8;
    auto* cmd_num = app.add_subcommand("numcheck", "finite-difference conservation check");
    cmd_num->add_option("--problem", problem_path, "Goursat problem JSON file")->required();
    cmd_num->add_option("--phi", phi_text, "flux x-component")->required();
    cmd_num->add_option("--psi", psi_text, "flux y-component")->required();
    cmd_num->add_option("--grids", grids_text, "comma-separated grid sizes");
    cmd_num->add_option("--exact", exact_text, "closed-form exact solution (optional)");
    cmd_num->add_option("--min-order", min_order, "passing convergence order (default 1.8)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*cmd_parse) {
            Context ctx;
            Expr e = parse(parse_expr, ctx, JetNames{});
            out.emit({{"expr", expr_to_json(e)}, {"text", render(e)}}, render(e) + "\n");
            return kExitOk;
        }

        if (*cmd_detsys) {
            if (family != "u" && family != "ux")
                return out.error("bad-family", "--family must be u or ux");
            JetContext ctx;
            FSpec f = family == "u" ? FSpec::opaque_of_u() : FSpec::opaque_of_ux();
            DeterminingSystem sys = split_system(f, ctx);
            json jc = json::array();
            std::string text;
            for (const auto& c : sys.constraints) {
                jc.push_back({{"text", render(c)}, {"expr", expr_to_json(c)}});
                text += render(c) + " = 0\n";
            }
            text += "residual: " + render(sys.residual) + " = 0\n";
            json ju = json::array();
            for (const auto& u : sys.unknowns) ju.push_back(u);
            out.emit({{"unknowns", ju},
                      {"constraints", jc},
                      {"residual",
                       {{"text", render(sys.residual)}, {"expr", expr_to_json(sys.residual)}}}},
                     text);
            return kExitOk;
        }

        if (*cmd_cases) {
            if (family != "u" && family != "ux")
                return out.error("bad-family", "--family must be u or ux");
            IndeterminateSet s = catalog_indeterminates(family);
            auto conds = enumerate_case_conditions(s, subset_m);
            json jl = json::array();
            std::string text = "indeterminates:";
            for (const auto& e : s.elements) text += " " + render(e);
            text += "\n" + std::to_string(conds.size()) + " conditions for m = " +
                    std::to_string(subset_m) + ":\n";
            for (size_t i = 0; i < conds.size(); ++i) {
                const auto& c = conds[i];
                std::string flags;
                if (c.identically_zero) flags += " [identically zero]";
                if (c.duplicate_of >= 0)
                    flags += " [proportional to #" + std::to_string(c.duplicate_of) + "]";
                text += "  #" + std::to_string(i) + ": " + render(c.ode) + flags + "\n";
                jl.push_back({{"index", i},
                              {"subset", c.subset},
                              {"ode", {{"text", render(c.ode)}, {"expr", expr_to_json(c.ode)}}},
                              {"identically_zero", c.identically_zero},
                              {"duplicate_of", c.duplicate_of}});
            }
            out.emit({{"family", family}, {"m", subset_m}, {"conditions", jl}}, text);
            return kExitOk;
        }

        if (*cmd_checkf) {
            if (family != "u" && family != "ux")
                return out.error("bad-family", "--family must be u or ux");
            IndeterminateSet s = catalog_indeterminates(family);
            auto conds = enumerate_case_conditions(s, subset_m);
            if (cond_index < 0 || cond_index >= static_cast<int>(conds.size()))
                return out.error("bad-condition", "condition index out of range");
            Context ctx;
            Expr f = parse(f_text, ctx, JetNames{});
            CheckOutcome oc = check_condition_solution(f, conds[cond_index]);
            std::string word = oc == CheckOutcome::True    ? "true"
                               : oc == CheckOutcome::False ? "false"
                                                           : "undecided";
            out.emit({{"outcome", word}, {"condition", render(conds[cond_index].ode)}},
                     word + "\n");
            return oc == CheckOutcome::True ? kExitOk : kExitVerifyFailed;
        }

        if (*cmd_vclass) {
            Report rep = verify_class_table(table);
            if (rep.entries.empty()) return out.error("bad-table", "unknown table " + table);
            if (entry_index >= 0) {
                if (entry_index >= static_cast<int>(rep.entries.size()))
                    return out.error("bad-entry", "entry index out of range");
                Report one;
                one.title = rep.title;
                one.entries = {rep.entries[entry_index]};
                rep = one;
            }
            out.emit(report_to_json(rep), report_text(rep));
            return report_exit(rep);
        }

        if (*cmd_vclaw) {
            Report rep = verify_claw_catalog();
            out.emit(report_to_json(rep), report_text(rep));
            return report_exit(rep);
        }

        if (*claw_verify || *claw_derive) {
            JetContext jctx;
            Context ctx;
            FuncPtr F = ctx.declare_func("F", f_text == "F(u_x)" || f_text == "opaque-ux"
                                                  ? std::vector<std::string>{"v"}
                                                  : std::vector<std::string>{"u"});
            ctx.declare_antideriv("Fint", F, 0);
            FuncPtr V = ctx.declare_func("V", {"x", "p"});
            ctx.declare_antideriv("W", V, 1);
            FSpec f = fspec_from_text(f_text, ctx);
            Expr q = parse(q_text, ctx, JetNames{});
            if (*claw_derive) {
                FluxVector th = homotopy_flux(q, f, jctx);
                Expr fr = flux_residual(th, q, f, jctx);
                std::string text = "Phi = " + render(th.phi) + "\nPsi = " + render(th.psi) +
                                   "\nresidual: " + render(fr) + "\n";
                out.emit({{"phi", {{"text", render(th.phi)}, {"expr", expr_to_json(th.phi)}}},
                          {"psi", {{"text", render(th.psi)}, {"expr", expr_to_json(th.psi)}}},
                          {"residual", render(fr)}},
                         text);
                return fr.is_zero() ? kExitOk : kExitVerifyFailed;
            }
            Expr mr = multiplier_residual(q, f, jctx);
            json j{{"multiplier_residual", render(mr)}, {"multiplier_ok", mr.is_zero()}};
            std::string text = "multiplier residual: " + render(mr) + "\n";
            bool pass = mr.is_zero();
            if (!phi_text.empty() || !psi_text.empty()) {
                FluxVector th{parse(phi_text.empty() ? "0" : phi_text, ctx, JetNames{}),
                              parse(psi_text.empty() ? "0" : psi_text, ctx, JetNames{})};
                Expr fr = flux_residual(th, q, f, jctx);
                j["flux_residual"] = render(fr);
                j["flux_ok"] = fr.is_zero();
                text += "flux residual: " + render(fr) + "\n";
                pass = pass && fr.is_zero();
            }
            out.emit(j, text + (pass ? "pass\n" : "FAIL\n"));
            return pass ? kExitOk : kExitVerifyFailed;
        }

        if (*cmd_teq) {
            Context ctx;
            ctx.declare_var("z");
            ctx.declare_var("y");
            Expr T = parse(t_text, ctx);
            Expr r = t_equation_residual(T);
            out.emit({{"residual", render(r)}, {"zero", r.is_zero()}},
                     "residual: " + render(r) + "\n");
            return r.is_zero() ? kExitOk : kExitVerifyFailed;
        }

        if (*cmd_num) {
            std::ifstream in(problem_path);
            if (!in) return out.error("no-file", "cannot open " + problem_path);
            std::vector<int> grids = parse_grid_list(grids_text);
            std::vector<int> from_file;
            GoursatProblem p = problem_from_json(json::parse(in), &from_file);
            if (!from_file.empty() && grids_text == "32,64,128") grids = from_file;
            Context ctx;
            FluxExprs th{parse(phi_text, ctx, JetNames{}), parse(psi_text, ctx, JetNames{})};
            ConvergenceResult r = conservation_convergence(p, th, grids);
            bool pass = !r.orders.empty();
            for (double o : r.orders) pass = pass && o >= min_order;
            json jr{{"grids", r.grids},
                    {"residual_norms", r.residual_norms},
                    {"orders", r.orders},
                    {"masked_fraction", r.masked_fraction},
                    {"pass", pass}};
            std::string text = "residual norms:";
            for (double v : r.residual_norms) text += " " + std::to_string(v);
            text += "\norders:";
            for (double o : r.orders) text += " " + std::to_string(o);
            text += "\nmasked fraction: " + std::to_string(r.masked_fraction) + "\n";
            if (!exact_text.empty()) {
                Expr exact = parse(exact_text, ctx, JetNames{});
                ConvergenceResult se = solution_convergence(p, exact, grids);
                jr["solution_errors"] = se.residual_norms;
                jr["solution_orders"] = se.orders;
                text += "solution max errors:";
                for (double v : se.residual_norms) text += " " + std::to_string(v);
                text += "\nsolution orders:";
                for (double o : se.orders) text += " " + std::to_string(o);
                text += "\n";
                for (double o : se.orders) pass = pass && o >= min_order;
                jr["pass"] = pass;
            }
            text += pass ? "pass\n" : "FAIL\n";
            out.emit(jr, text);
            return pass ? kExitOk : kExitVerifyFailed;
        }
    } catch (const ParseError& e) {
        return out.error("syntax", e.what());
    } catch (const KernelError& e) {
        return out.error("kernel", e.what());
    } catch (const std::exception& e) {
        return out.error("internal", e.what());
    }
    return kExitUsage;
}

#include "hypersym/catalog.hpp"

#include "hypersym/parser.hpp"
#include "hypersym/printer.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>

namespace hypersym {

using nlohmann::json;

Catalog catalog_from_json(const json& j) {
    Catalog c;
    c.schema_version = j.at("schema_version").get<int>();
    for (const auto& e : j.at("classes")) {
        ClassEntry ce;
        ce.id = e.at("id");
        ce.table = e.at("table");
        ce.family = e.at("family");
        ce.label = e.at("label");
        ce.decls = e.at("decls");
        ce.F = e.at("F");
        ce.constraints = e.value("constraints", "");
        ce.xi = e.at("xi");
        ce.eta = e.at("eta");
        ce.phi = e.at("phi");
        for (const auto& s : e.at("siderels"))
            ce.siderels.emplace_back(s.at(0).get<std::string>(), s.at(1).get<std::string>());
        ce.notes = e.value("notes", "");
        c.classes.push_back(std::move(ce));
    }
    for (const auto& e : j.at("claws")) {
        ClawEntry ce;
        ce.id = e.at("id");
        ce.family = e.at("family");
        ce.F = e.at("F");
        ce.decls = e.value("decls", "");
        ce.Q = e.at("Q");
        ce.Phi = e.value("Phi", "");
        ce.Psi = e.value("Psi", "");
        ce.expect_flux_fail = e.value("expect_flux_fail", false);
        ce.uses_Fint = e.value("uses_Fint", false);
        ce.uses_VW = e.value("uses_VW", false);
        ce.notes = e.value("notes", "");
        c.claws.push_back(std::move(ce));
    }
    for (const auto& t : j.at("t_solutions")) c.t_solutions.push_back(t.get<std::string>());
    for (const auto& e : j.at("t_symmetries")) {
        TSymEntry te;
        te.id = e.at("id");
        te.xi = e.at("xi");
        te.eta = e.at("eta");
        te.phi = e.at("phi");
        te.expect = e.value("expect", true);
        te.notes = e.value("notes", "");
        c.t_symmetries.push_back(std::move(te));
    }
    for (const auto& [fam, cs] : j.at("conditions").items()) {
        ConditionSet set;
        for (const auto& el : cs.at("elements")) set.elements.push_back(el.get<std::string>());
        for (const auto& [m, lst] : cs.at("printed").items()) {
            std::vector<std::string> texts;
            for (const auto& t : lst) texts.push_back(t.get<std::string>());
            set.printed[std::stoi(m)] = std::move(texts);
        }
        if (cs.contains("notes"))
            for (const auto& n : cs.at("notes")) set.notes.push_back(n.get<std::string>());
        c.conditions[fam] = std::move(set);
    }
    return c;
}

const Catalog& builtin_catalog() {
    static Catalog cat = [] {
        if (const char* dir = std::getenv("HYPERSYM_DATA_DIR")) {
            std::string path = std::string(dir) + "/catalog.json";
            std::ifstream in(path);
            if (in) return catalog_from_json(json::parse(in));
        }
        return catalog_from_json(json::parse(embedded_catalog_json()));
    }();
    return cat;
}

json report_to_json(const Report& r) {
    json entries = json::array();
    for (const auto& e : r.entries) {
        entries.push_back({{"id", e.id},
                           {"label", e.label},
                           {"pass", e.pass},
                           {"detail", e.detail},
                           {"time_ms", e.ms}});
    }
    return {{"schema_version", 1},
            {"title", r.title},
            {"all_pass", r.all_pass()},
            {"entries", entries}};
}

// ---------------------------------------------------------------------

namespace {

Expr parse_component(const std::string& decls, const std::string& text, Context& ctx) {
    static const JetNames jets{};
    std::string s = decls.empty() ? text : decls + " " + text;
    return parse(s, ctx, jets);
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

} // namespace

ParsedClass instantiate_class(const ClassEntry& e) {
    ParsedClass out;
    Context ctx;
    // declarations ride along with the first component
    Expr xi = parse_component(e.decls, e.xi, ctx);
    Expr eta = parse_component("", e.eta, ctx);
    Expr phi = parse_component("", e.phi, ctx);
    out.v = {xi, eta, phi};
    if (e.F == "arbitrary") {
        out.f = e.family == "u" ? FSpec::opaque_of_u() : FSpec::opaque_of_ux();
    } else {
        out.f = FSpec::closed_form(parse_component("", e.F, ctx));
    }
    for (const auto& [sym, rhs] : e.siderels)
        out.siderels.push_back({sym, parse_component("", rhs, ctx)});
    return out;
}

Report verify_class_table(const std::string& table) {
    Report rep;
    rep.title = "classification table " + table;
    JetContext jctx;
    for (const auto& e : builtin_catalog().classes) {
        if (table != "all" && e.table != table) continue;
        Timer t;
        EntryResult res;
        res.id = e.id;
        res.label = e.label;
        try {
            ParsedClass pc = instantiate_class(e);
            Expr r = symmetry_residual(pc.f, pc.v, jctx, pc.siderels);
            res.pass = r.is_zero();
            if (!res.pass) res.detail = "residual: " + render(r);
        } catch (const std::exception& ex) {
            res.pass = false;
            res.detail = ex.what();
        }
        res.ms = t.ms();
        rep.entries.push_back(std::move(res));
    }
    return rep;
}

ParsedClaw instantiate_claw(const ClawEntry& e) {
    ParsedClaw out;
    Context ctx;
    if (e.F == "opaque-u" || e.uses_Fint) {
        FuncPtr F = ctx.declare_func("F", {"u"});
        ctx.declare_antideriv("Fint", F, 0);
        if (e.F == "opaque-u") {
            out.f.mode = FMode::OpaqueOfU;
            out.f.fsym = F;
        }
    }
    if (e.uses_VW) {
        FuncPtr V = ctx.declare_func("V", {"x", "p"});
        ctx.declare_antideriv("W", V, 1);
    }
    if (e.F == "opaque-ux") {
        out.f = FSpec::opaque_of_ux();
        FuncPtr F = ctx.declare_func("F", {"v"});
        out.f.fsym = F;
    } else if (e.F != "opaque-u") {
        out.f = FSpec::closed_form(parse_component(e.decls, e.F, ctx));
    }
    out.q = parse_component(e.decls, e.Q, ctx);
    out.has_flux = !e.Phi.empty() || !e.Psi.empty();
    if (out.has_flux) {
        out.flux.phi = parse_component("", e.Phi.empty() ? "0" : e.Phi, ctx);
        out.flux.psi = parse_component("", e.Psi.empty() ? "0" : e.Psi, ctx);
    }
    return out;
}

Report verify_claw_catalog() {
    Report rep;
    rep.title = "conservation-law catalog";
    JetContext jctx;
    for (const auto& e : builtin_catalog().claws) {
        Timer t;
        EntryResult res;
        res.id = e.id;
        res.label = e.Q;
        try {
            ParsedClaw pc = instantiate_claw(e);
            Expr mr = multiplier_residual(pc.q, pc.f, jctx);
            bool mult_ok = mr.is_zero();
            bool flux_ok = true;
            std::string detail;
            if (!mult_ok) detail = "multiplier residual: " + render(mr);
            if (pc.has_flux) {
                Expr fr = flux_residual(pc.flux, pc.q, pc.f, jctx);
                if (e.expect_flux_fail) {
                    flux_ok = !fr.is_zero();
                    detail = flux_ok ? "fails as expected; residual: " + render(fr)
                                     : "unexpectedly exact";
                } else {
                    flux_ok = fr.is_zero();
                    if (!flux_ok) detail += " flux residual: " + render(fr);
                }
            }
            res.pass = mult_ok && flux_ok;
            res.detail = detail;
        } catch (const std::exception& ex) {
            res.pass = false;
            res.detail = ex.what();
        }
        res.ms = t.ms();
        rep.entries.push_back(std::move(res));
    }
    return rep;
}

Report verify_t_suite() {
    Report rep;
    rep.title = "multiplier equation of u_xy = u_x^2";
    const Catalog& cat = builtin_catalog();
    int idx = 0;
    for (const auto& text : cat.t_solutions) {
        Timer t;
        EntryResult res;
        res.id = "T" + std::to_string(++idx);
        res.label = text;
        try {
            Context ctx;
            ctx.declare_var("z");
            ctx.declare_var("y");
            Expr T = parse(text, ctx);
            Expr r = t_equation_residual(T);
            res.pass = r.is_zero();
            if (!res.pass) res.detail = "residual: " + render(r);
        } catch (const std::exception& ex) {
            res.pass = false;
            res.detail = ex.what();
        }
        res.ms = t.ms();
        rep.entries.push_back(std::move(res));
    }
    for (const auto& e : cat.t_symmetries) {
        Timer t;
        EntryResult res;
        res.id = e.id;
        res.label = e.xi + " d/dz + " + e.eta + " d/dy + " + e.phi + " d/dT";
        try {
            Context ctx;
            ctx.declare_var("z");
            ctx.declare_var("y");
            JetNames jn{"z", "y", "T", 5};
            PointVectorField v{parse(e.xi, ctx, jn), parse(e.eta, ctx, jn),
                               parse(e.phi, ctx, jn)};
            bool sym = verify_t_symmetry(v);
            res.pass = sym == e.expect;
            if (!res.pass)
                res.detail = sym ? "unexpectedly a symmetry" : "not a symmetry";
            else if (!e.expect)
                res.detail = "fails as expected";
        } catch (const std::exception& ex) {
            res.pass = false;
            res.detail = ex.what();
        }
        res.ms = t.ms();
        rep.entries.push_back(std::move(res));
    }
    return rep;
}

IndeterminateSet catalog_indeterminates(const std::string& family) {
    const auto& cs = builtin_catalog().conditions.at(family);
    IndeterminateSet s;
    Context ctx;
    FuncPtr F = family == "u" ? ctx.declare_func("F", {"u"}) : ctx.declare_func("F", {"v"});
    s.fsym = F;
    s.var = family == "u" ? "u" : "u_x";
    for (const auto& text : cs.elements)
        s.elements.push_back(parse_condition_text(family, text, s));
    return s;
}

Expr parse_condition_text(const std::string& family, const std::string& text,
                          const IndeterminateSet& s) {
    Context ctx;
    if (family == "u") {
        // reuse the set's F symbol so comparisons are name-and-structure exact
        ctx.declare_func("F", {"u"});
    } else {
        ctx.declare_func("F", {"v"});
    }
    Expr e = parse(text, ctx, JetNames{});
    // bind the catalog's F application to the set's symbol and v to u_x
    Bindings b;
    if (family == "ux") b.symbols["v"] = make_var("u_x");
    Expr r = substitute(e, b);
    // rename the parsed F applications onto s.fsym
    return rewrite_nodes(r, [&](const Expr& sub) -> std::optional<Expr> {
        if (sub.kind() == Kind::FuncApp && sub.fn()->name == "F" && sub.fn() != s.fsym)
            return make_app(s.fsym, sub.deriv_index(), sub.kids());
        return std::nullopt;
    });
}

} // namespace hypersym

#pragma once

#include "hypersym/claws.hpp"
#include "hypersym/classify.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace hypersym {

/// One classified symmetry class: the labelling function F, the generic
/// symmetry vector, parameter constraints carried as annotation text.
struct ClassEntry {
    std::string id;
    std::string table;  // thm22 | table1 | table2 | extra
    std::string family; // u | ux
    std::string label;
    std::string decls;
    std::string F;      // expression text or "arbitrary"
    std::string constraints;
    std::string xi, eta, phi;
    std::vector<std::pair<std::string, std::string>> siderels; // symbol, rhs
    std::string notes;
};

struct ClawEntry {
    std::string id;
    std::string family;  // u | ux
    std::string F;       // "opaque-u" | "opaque-ux" | expression text
    std::string decls;
    std::string Q;
    std::string Phi, Psi; // empty: multiplier-only entry
    bool expect_flux_fail = false;
    bool uses_Fint = false;
    bool uses_VW = false;
    std::string notes;
};

struct TSymEntry {
    std::string id;
    std::string xi;  // d/dz coefficient
    std::string eta; // d/dy coefficient
    std::string phi; // d/dT coefficient
    bool expect = true;
    std::string notes;
};

struct ConditionSet {
    std::vector<std::string> elements;              // indeterminates, in paper order
    std::map<int, std::vector<std::string>> printed; // m -> condition texts
    std::vector<std::string> notes;
};

struct Catalog {
    int schema_version = 0;
    std::vector<ClassEntry> classes;
    std::vector<ClawEntry> claws;
    std::vector<std::string> t_solutions;
    std::vector<TSymEntry> t_symmetries;
    std::map<std::string, ConditionSet> conditions; // keys "u", "ux"
};

/// Built-in catalog (embedded in the binary); HYPERSYM_DATA_DIR/catalog.json
/// overrides it when set.
const Catalog& builtin_catalog();
Catalog catalog_from_json(const nlohmann::json& j);
const char* embedded_catalog_json();

// ---- verification drivers --------------------------------------------

struct EntryResult {
    std::string id;
    std::string label;
    bool pass = false;
    std::string detail;
    double ms = 0.0;
};

struct Report {
    std::string title;
    std::vector<EntryResult> entries;
    bool all_pass() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }
};

nlohmann::json report_to_json(const Report& r);

/// Verify every entry of a class table: the symmetry residual must vanish
/// identically in all parameters and arbitrary-function symbols.
Report verify_class_table(const std::string& table);

/// Verify the conservation-law catalog: multiplier and flux residuals, with
/// printed-but-failing entries passing exactly when they fail as expected.
Report verify_claw_catalog();

/// T-equation solutions and the symmetries of the T-equation.
Report verify_t_suite();

/// Helpers shared by the drivers and the CLI.
struct ParsedClass {
    FSpec f;
    PointVectorField v;
    std::vector<SideRelation> siderels;
};
ParsedClass instantiate_class(const ClassEntry& e);

struct ParsedClaw {
    FSpec f;
    Expr q;
    FluxVector flux;
    bool has_flux = false;
};
ParsedClaw instantiate_claw(const ClawEntry& e);

/// Indeterminate set of a family ("u" or "ux") in the paper's order.
IndeterminateSet catalog_indeterminates(const std::string& family);
/// Parse a printed condition text of the family (in the catalog conventions:
/// v stands for u_x in the ux family).
Expr parse_condition_text(const std::string& family, const std::string& text,
                          const IndeterminateSet& s);

} // namespace hypersym

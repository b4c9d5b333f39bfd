#include "hypersym/json_io.hpp"

namespace hypersym {

using nlohmann::json;

namespace {
const char* kind_name(Kind k) {
    switch (k) {
    case Kind::Rational: return "rational";
    case Kind::Symbol: return "symbol";
    case Kind::FuncApp: return "app";
    case Kind::Exp: return "exp";
    case Kind::Ln: return "ln";
    case Kind::Sin: return "sin";
    case Kind::Cos: return "cos";
    case Kind::Pow: return "pow";
    case Kind::Mul: return "mul";
    case Kind::Add: return "add";
    }
    return "?";
}
} // namespace

json expr_to_json(const Expr& e) {
    const Node& n = e.node();
    json j;
    j["kind"] = kind_name(n.kind);
    switch (n.kind) {
    case Kind::Rational:
        j["value"] = n.rat.str();
        return j;
    case Kind::Symbol:
        j["name"] = n.name;
        j["role"] = n.role == SymRole::Var ? "var" : "param";
        return j;
    case Kind::FuncApp: {
        j["name"] = n.fn->name;
        j["params"] = n.fn->params;
        j["index"] = n.idx;
        if (n.fn->antideriv_of) {
            j["antideriv_of"] = n.fn->antideriv_of->name;
            j["antideriv_slot"] = n.fn->antideriv_slot;
        }
        break;
    }
    default:
        break;
    }
    json kids = json::array();
    for (const auto& k : n.kids) kids.push_back(expr_to_json(k));
    j["children"] = std::move(kids);
    return j;
}

Expr expr_from_json(const json& j, Context& ctx) {
    const std::string kind = j.at("kind").get<std::string>();
    auto children = [&]() {
        std::vector<Expr> kids;
        if (j.contains("children"))
            for (const auto& c : j.at("children")) kids.push_back(expr_from_json(c, ctx));
        return kids;
    };
    if (kind == "rational") {
        std::string v = j.at("value").get<std::string>();
        auto slash = v.find('/');
        if (slash == std::string::npos) return make_rat(Rational(BigInt(v)));
        return make_rat(Rational(BigInt(v.substr(0, slash)), BigInt(v.substr(slash + 1))));
    }
    if (kind == "symbol") {
        auto role = j.at("role").get<std::string>() == "var" ? SymRole::Var : SymRole::Param;
        return make_sym(j.at("name").get<std::string>(), role);
    }
    if (kind == "app") {
        std::string name = j.at("name").get<std::string>();
        FuncPtr f = ctx.find_func(name);
        if (!f) {
            auto params = j.at("params").get<std::vector<std::string>>();
            if (j.contains("antideriv_of")) {
                FuncPtr of = ctx.find_func(j.at("antideriv_of").get<std::string>());
                if (!of) throw KernelError("antiderivative base '" +
                                           j.at("antideriv_of").get<std::string>() +
                                           "' not declared before use");
                f = ctx.declare_antideriv(name, of, j.at("antideriv_slot").get<int>());
            } else {
                f = ctx.declare_func(name, params);
            }
        }
        return make_app(f, j.at("index").get<std::vector<int>>(), children());
    }
    auto kids = children();
    if (kind == "exp") return make_exp(kids.at(0));
    if (kind == "ln") return make_ln(kids.at(0));
    if (kind == "sin") return make_sin(kids.at(0));
    if (kind == "cos") return make_cos(kids.at(0));
    if (kind == "pow") return make_pow(kids.at(0), kids.at(1));
    if (kind == "mul") return make_mul(std::move(kids));
    if (kind == "add") return make_add(std::move(kids));
    throw KernelError("unknown expression kind '" + kind + "' in JSON");
}

} // namespace hypersym

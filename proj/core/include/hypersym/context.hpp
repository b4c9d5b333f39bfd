#pragma once

#include "hypersym/expr.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace hypersym {

/// Symbol table for a parsing/verification session: which identifiers are
/// variables, which are declared function symbols, everything else becomes a
/// parameter on first use.
class Context {
public:
    Context() = default;

    void declare_var(const std::string& name) { vars_.insert(name); }
    bool is_var(const std::string& name) const { return vars_.count(name) > 0; }

    void declare_param(const std::string& name) { params_.insert(name); }

    FuncPtr declare_func(const std::string& name, std::vector<std::string> args,
                         Expr body = Expr()) {
        auto f = std::make_shared<FunctionSymbol>();
        f->name = name;
        f->params = std::move(args);
        f->body = body;
        funcs_[name] = f;
        return f;
    }

    /// Declared antiderivative: derivative of `name` in `slot` is `of`.
    FuncPtr declare_antideriv(const std::string& name, FuncPtr of, int slot) {
        auto f = std::make_shared<FunctionSymbol>();
        f->name = name;
        f->params = of->params;
        f->antideriv_of = of;
        f->antideriv_slot = slot;
        funcs_[name] = f;
        return f;
    }

    FuncPtr find_func(const std::string& name) const {
        auto it = funcs_.find(name);
        return it == funcs_.end() ? nullptr : it->second;
    }

    /// Identifier resolution used by the parser.
    Expr resolve(const std::string& name) {
        if (is_var(name)) return make_var(name);
        params_.insert(name);
        return make_param(name);
    }

    const std::set<std::string>& vars() const { return vars_; }
    const std::set<std::string>& params() const { return params_; }
    const std::map<std::string, FuncPtr>& funcs() const { return funcs_; }

private:
    std::set<std::string> vars_;
    std::set<std::string> params_;
    std::map<std::string, FuncPtr> funcs_;
};

} // namespace hypersym

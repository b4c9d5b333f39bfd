#include "hypersym/parser.hpp"

#include <cctype>
#include <cstdlib>

namespace hypersym {

namespace {

struct Lexer {
    const std::string& s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) { ++pos; return true; }
        return false;
    }
    void expect(char c, const char* what) {
        skip_ws();
        if (pos >= s.size() || s[pos] != c)
            throw ParseError(std::string("expected '") + c + "' (" + what + ")", pos);
        ++pos;
    }
    std::string ident() {
        skip_ws();
        size_t start = pos;
        if (pos >= s.size() || !(std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            throw ParseError("expected identifier", pos);
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        return s.substr(start, pos - start);
    }
};

struct Parser {
    Lexer lex;
    Context& ctx;
    std::optional<JetNames> jets;

    Expr parse_expression() {
        Expr acc = parse_term();
        for (;;) {
            if (lex.accept('+')) acc = acc + parse_term();
            else if (lex.accept('-')) acc = acc - parse_term();
            else return acc;
        }
    }

    Expr parse_term() {
        Expr acc = parse_unary();
        for (;;) {
            if (lex.accept('*')) acc = acc * parse_unary();
            else if (lex.accept('/')) acc = acc / parse_unary();
            else return acc;
        }
    }

    Expr parse_unary() {
        int sign = 1;
        for (;;) {
            if (lex.accept('-')) sign = -sign;
            else if (lex.accept('+')) continue;
            else break;
        }
        Expr p = parse_power();
        return sign < 0 ? -p : p;
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (lex.accept('^')) {
            Expr e = parse_unary(); // right associative, supports u^-1, u^(k+1)
            return make_pow(base, e);
        }
        return base;
    }

    Expr parse_number() {
        lex.skip_ws();
        size_t start = lex.pos;
        while (lex.pos < lex.s.size() && std::isdigit(static_cast<unsigned char>(lex.s[lex.pos])))
            ++lex.pos;
        std::string intpart = lex.s.substr(start, lex.pos - start);
        if (lex.pos < lex.s.size() && lex.s[lex.pos] == '.') {
            ++lex.pos;
            size_t fstart = lex.pos;
            while (lex.pos < lex.s.size() && std::isdigit(static_cast<unsigned char>(lex.s[lex.pos])))
                ++lex.pos;
            std::string frac = lex.s.substr(fstart, lex.pos - fstart);
            if (frac.empty()) throw ParseError("malformed decimal literal", lex.pos);
            BigInt num(intpart + frac);
            BigInt den = 1;
            for (size_t i = 0; i < frac.size(); ++i) den *= 10;
            return make_rat(Rational(num, den));
        }
        return make_rat(Rational(BigInt(intpart)));
    }

    std::vector<Expr> parse_args() {
        std::vector<Expr> args;
        lex.expect('(', "function application");
        if (!lex.accept(')')) {
            args.push_back(parse_expression());
            while (lex.accept(',')) args.push_back(parse_expression());
            lex.expect(')', "function application");
        }
        return args;
    }

    Expr apply_func(const FuncPtr& f, std::vector<int> idx, size_t at) {
        std::vector<Expr> args;
        if (lex.peek() == '(') {
            args = parse_args();
        } else {
            // bare use: apply to the formal arguments
            for (const auto& p : f->params) {
                if (jets && p == jets->dep) args.push_back(make_var(p));
                else args.push_back(ctx.resolve(p));
            }
        }
        if (args.size() != f->arity())
            throw ParseError("arity mismatch for '" + f->name + "'", at);
        return make_app(f, std::move(idx), std::move(args));
    }

    Expr resolve_ident(const std::string& id, size_t at) {
        // builtins
        if (id == "exp" || id == "ln" || id == "sin" || id == "cos" || id == "sqrt") {
            if (lex.peek() != '(') throw ParseError("'" + id + "' needs an argument", at);
            auto args = parse_args();
            if (args.size() != 1) throw ParseError("'" + id + "' takes one argument", at);
            if (id == "exp") return make_exp(args[0]);
            if (id == "ln") return make_ln(args[0]);
            if (id == "sin") return make_sin(args[0]);
            if (id == "cos") return make_cos(args[0]);
            return make_pow(args[0], make_rat(Rational(1, 2)));
        }

        // declared function, possibly with derivative suffix
        auto resolve_func_suffix = [&](const FuncPtr& f,
                                       const std::string& suffix) -> std::optional<std::vector<int>> {
            std::vector<int> idx(f->arity(), 0);
            for (char c : suffix) {
                if (c == '_') continue;
                bool found = false;
                for (size_t k = 0; k < f->params.size(); ++k) {
                    if (f->params[k].size() == 1 && f->params[k][0] == c) {
                        idx[k] += 1;
                        found = true;
                        break;
                    }
                }
                if (!found) return std::nullopt;
            }
            return idx;
        };

        if (auto f = ctx.find_func(id))
            return apply_func(f, std::vector<int>(f->arity(), 0), at);

        auto us = id.find('_');
        if (us != std::string::npos) {
            std::string base = id.substr(0, us);
            std::string suffix = id.substr(us + 1);
            if (auto f = ctx.find_func(base)) {
                if (auto idx = resolve_func_suffix(f, suffix))
                    return apply_func(f, std::move(*idx), at);
                throw ParseError("unknown derivative suffix '" + suffix + "' on '" + base + "'", at);
            }
            if (jets && base == jets->dep) {
                int i = 0, j = 0;
                for (char c : suffix) {
                    if (c == '_') continue;
                    if (jets->x.size() == 1 && c == jets->x[0]) ++i;
                    else if (jets->y.size() == 1 && c == jets->y[0]) ++j;
                    else throw ParseError("unknown jet suffix '" + suffix + "'", at);
                }
                if (i + j > jets->max_order)
                    throw ParseError("jet order exceeds maximum", at);
                std::string name = jets->dep + "_" + std::string(i, jets->x[0]) + std::string(j, jets->y[0]);
                return make_var(name);
            }
        }

        if (jets && id == jets->dep) return make_var(id);

        if (lex.peek() == '(') {
            // application of an undeclared symbol: auto-declare opaque
            size_t save = lex.pos;
            auto args = parse_args();
            std::vector<std::string> formals;
            for (size_t k = 0; k < args.size(); ++k) {
                if (args[k].kind() == Kind::Symbol)
                    formals.push_back(args[k].sym_name());
                else
                    formals.push_back("a" + std::to_string(k + 1));
            }
            (void)save;
            auto f = ctx.declare_func(id, std::move(formals));
            return make_app(f, std::vector<int>(f->arity(), 0), std::move(args));
        }

        return ctx.resolve(id);
    }

    Expr parse_primary() {
        lex.skip_ws();
        size_t at = lex.pos;
        if (lex.pos >= lex.s.size())
            throw ParseError("unexpected end of input", lex.pos);
        char c = lex.s[lex.pos];
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (c == '(') {
            ++lex.pos;
            Expr e = parse_expression();
            lex.expect(')', "parenthesized expression");
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id = lex.ident();
            return resolve_ident(id, at);
        }
        throw ParseError(std::string("unexpected character '") + c + "'", lex.pos);
    }

    void parse_declarations() {
        for (;;) {
            lex.skip_ws();
            size_t save = lex.pos;
            if (lex.pos >= lex.s.size()) return;
            if (!std::isalpha(static_cast<unsigned char>(lex.s[lex.pos]))) return;
            std::string kw = lex.ident();
            if (kw == "func") {
                std::string name = lex.ident();
                lex.expect('(', "func declaration");
                std::vector<std::string> args;
                if (!lex.accept(')')) {
                    args.push_back(lex.ident());
                    while (lex.accept(',')) args.push_back(lex.ident());
                    lex.expect(')', "func declaration");
                }
                lex.expect(';', "func declaration");
                ctx.declare_func(name, std::move(args));
            } else if (kw == "param") {
                std::string name = lex.ident();
                lex.expect(';', "param declaration");
                ctx.declare_param(name);
            } else if (kw == "var") {
                std::string name = lex.ident();
                lex.expect(';', "var declaration");
                ctx.declare_var(name);
            } else {
                lex.pos = save; // not a declaration: start of the expression
                return;
            }
        }
    }

    Expr run() {
        parse_declarations();
        Expr e = parse_expression();
        lex.skip_ws();
        if (lex.pos != lex.s.size())
            throw ParseError("trailing input", lex.pos);
        return e;
    }
};

} // namespace

Expr parse(const std::string& text, Context& ctx, const std::optional<JetNames>& jets) {
    Parser p{Lexer{text}, ctx, jets};
    if (jets) {
        ctx.declare_var(jets->x);
        ctx.declare_var(jets->y);
    }
    return p.run();
}

Expr parse_jet(const std::string& text) {
    Context ctx;
    return parse(text, ctx, JetNames{});
}

} // namespace hypersym

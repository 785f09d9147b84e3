/* Copyright 2026 The pcore Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <set>
#include <string>

#include "pcore/errors.hpp"
#include "pcore/frontend.hpp"

namespace pcore {

namespace {

// Binary operator precedence, loosest first.
int precedence(BinOp op) {
    switch (op) {
        case BinOp::LOr: return 1;
        case BinOp::LAnd: return 2;
        case BinOp::BOr: return 3;
        case BinOp::BXor: return 4;
        case BinOp::BAnd: return 5;
        case BinOp::Eq:
        case BinOp::Neq: return 6;
        case BinOp::Lt:
        case BinOp::Le:
        case BinOp::Gt:
        case BinOp::Ge: return 7;
        case BinOp::Shl:
        case BinOp::Shr: return 8;
        case BinOp::Concat: return 9;
        case BinOp::Add:
        case BinOp::Sub: return 10;
        case BinOp::Mul:
        case BinOp::Div:
        case BinOp::Mod: return 11;
    }
    return 0;
}

constexpr int kWidthPrecedence = 10;

std::optional<BinOp> binop_of(const Token &t) {
    if (t.kind != TokenKind::Punct) return std::nullopt;
    static const std::pair<const char *, BinOp> table[] = {
        {"||", BinOp::LOr}, {"&&", BinOp::LAnd}, {"|", BinOp::BOr},   {"^", BinOp::BXor},  {"&", BinOp::BAnd},
        {"==", BinOp::Eq},  {"!=", BinOp::Neq},  {"<", BinOp::Lt},    {"<=", BinOp::Le},   {">", BinOp::Gt},
        {">=", BinOp::Ge},  {"<<", BinOp::Shl},  {">>", BinOp::Shr},  {"++", BinOp::Concat}, {"+", BinOp::Add},
        {"-", BinOp::Sub},  {"*", BinOp::Mul},   {"/", BinOp::Div},   {"%", BinOp::Mod},
    };
    for (const auto &[s, op] : table)
        if (t.text == s) return op;
    return std::nullopt;
}

class Parser {
 public:
    Parser(const std::vector<Token> &toks, std::set<std::string> typeNames)
        : toks_(toks), typeNames_(std::move(typeNames)) {}

    Program program() {
        Program p;
        while (!at_end()) p.decls.push_back(decl(true));
        return p;
    }

    ExprPtr expression_only() {
        auto e = expr();
        expect_end();
        return e;
    }

    StmtPtr statement_only() {
        auto s = stmt();
        expect_end();
        return s;
    }

    TypePtr type_only() {
        auto t = type();
        expect_end();
        return t;
    }

 private:
    const std::vector<Token> &toks_;
    size_t i_ = 0;
    std::set<std::string> typeNames_;

    const Token &peek(size_t k = 0) const {
        size_t j = i_ + k;
        return j < toks_.size() ? toks_[j] : toks_.back();
    }
    bool at_end() const { return peek().kind == TokenKind::End; }
    bool is(const char *text, size_t k = 0) const {
        const Token &t = peek(k);
        return (t.kind == TokenKind::Punct || t.kind == TokenKind::Keyword) && t.text == text;
    }
    bool is_ident(size_t k = 0) const { return peek(k).kind == TokenKind::Ident; }
    bool is_type_name(size_t k = 0) const { return is_ident(k) && typeNames_.count(peek(k).text); }

    [[noreturn]] void fail(const std::string &expected) const {
        const Token &t = peek();
        std::string got = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
        throw ParseError("parse", t.pos, "expected " + expected + ", got " + got);
    }

    void expect_end() const {
        if (!at_end()) fail("end of input");
    }

    Token take() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }

    Token expect(const char *text) {
        if (!is(text)) fail(std::string("'") + text + "'");
        return take();
    }

    bool accept(const char *text) {
        if (is(text)) {
            take();
            return true;
        }
        return false;
    }

    std::string ident() {
        if (!is_ident()) fail("identifier");
        return take().text;
    }

    // Contextual keyword, lexed as an identifier.
    void expect_word(const char *word) {
        if (!is_ident() || peek().text != word) fail(std::string("'") + word + "'");
        take();
    }

    std::vector<std::string> ident_list() {
        std::vector<std::string> out;
        expect("{");
        if (!is("}")) {
            out.push_back(ident());
            while (accept(",")) out.push_back(ident());
        }
        expect("}");
        return out;
    }

    // ---------------------------------------------------------------- types

    bool starts_type(size_t k = 0) const {
        const Token &t = peek(k);
        if (t.kind == TokenKind::Keyword) {
            static const std::set<std::string> kw = {"bool",   "int",    "bit",   "error",
                                                     "match_kind", "enum", "record", "header", "union"};
            return kw.count(t.text) > 0;
        }
        return t.kind == TokenKind::Ident && typeNames_.count(t.text);
    }

    std::vector<FieldType> field_list() {
        std::vector<FieldType> fs;
        expect("{");
        while (!is("}")) {
            auto t = type();
            auto n = ident();
            expect(";");
            fs.push_back({n, t});
        }
        expect("}");
        return fs;
    }

    TypePtr type() {
        TypePtr base;
        const Token &t = peek();
        if (is("bool")) {
            take();
            base = ty::boolean();
        } else if (is("int")) {
            take();
            base = ty::integer();
        } else if (is("bit")) {
            take();
            expect("<");
            if (peek().kind == TokenKind::IntLit && !peek().width && is(">", 1)) {
                base = ty::bit(static_cast<uint64_t>(take().value));
            } else {
                base = ty::bit_expr(binary(kWidthPrecedence));
            }
            expect(">");
        } else if (is("error")) {
            take();
            base = ty::error();
        } else if (is("match_kind")) {
            take();
            base = ty::match_kind();
        } else if (is("enum")) {
            take();
            auto n = ident();
            base = ty::enumeration(n, ident_list());
        } else if (is("record")) {
            take();
            base = ty::record(field_list());
        } else if (is("header")) {
            take();
            base = ty::header(field_list());
        } else if (is("union")) {
            take();
            auto n = ident();
            base = ty::union_(n, field_list());
        } else if (is("{") && is("}", 1)) {
            take();
            take();
            base = ty::unit();
        } else if (is_ident()) {
            base = ty::var(take().text);
        } else {
            (void)t;
            fail("type");
        }
        while (is("[")) {
            take();
            if (peek().kind != TokenKind::IntLit || peek().width) fail("stack size");
            auto n = take().value;
            expect("]");
            base = ty::stack(base, static_cast<uint64_t>(n));
        }
        return base;
    }

    // ---------------------------------------------------------- expressions

    ExprPtr expr() { return binary(1); }

    ExprPtr binary(int minPrec) {
        auto lhs = unary();
        for (;;) {
            auto op = binop_of(peek());
            if (!op || precedence(*op) < minPrec) return lhs;
            Pos p = take().pos;
            auto rhs = binary(precedence(*op) + 1);
            lhs = ex::binop(*op, lhs, rhs, p);
        }
    }

    bool starts_cast() const {
        if (!is("(")) return false;
        const Token &t = peek(1);
        if (t.kind == TokenKind::Keyword) {
            if (t.text == "error" || t.text == "match_kind") return is(")", 2) || is("[", 2);
            return starts_type(1);
        }
        if (is_type_name(1)) return !is(".", 2);
        return false;
    }

    ExprPtr unary() {
        Pos p = peek().pos;
        if (accept("!")) return ex::unop(UnOp::Not, unary(), p);
        if (accept("-")) return ex::unop(UnOp::Neg, unary(), p);
        if (accept("~")) return ex::unop(UnOp::BitNot, unary(), p);
        if (starts_cast()) {
            take();
            auto t = type();
            expect(")");
            return ex::cast(t, unary(), p);
        }
        return postfix();
    }

    std::vector<ExprPtr> call_args() {
        std::vector<ExprPtr> args;
        expect("(");
        if (!is(")")) {
            args.push_back(expr());
            while (accept(",")) args.push_back(expr());
        }
        expect(")");
        return args;
    }

    ExprPtr postfix() {
        auto e = primary();
        for (;;) {
            Pos p = peek().pos;
            if (accept("[")) {
                auto a = expr();
                if (accept(":")) {
                    auto b = expr();
                    expect("]");
                    e = ex::slice(e, a, b, p);
                } else {
                    expect("]");
                    e = ex::index(e, a, p);
                }
            } else if (accept(".")) {
                e = ex::member(e, ident(), p);
            } else if (is("<:")) {
                take();
                std::vector<TypePtr> targs;
                targs.push_back(type());
                while (accept(",")) targs.push_back(type());
                expect(":>");
                e = ex::call(e, targs, call_args(), p);
            } else if (is("(")) {
                e = ex::call(e, {}, call_args(), p);
            } else {
                return e;
            }
        }
    }

    ExprPtr primary() {
        const Token &t = peek();
        Pos p = t.pos;
        if (t.kind == TokenKind::IntLit) {
            Token lit = take();
            return ex::integer(lit.value, lit.width, p);
        }
        if (accept("true")) return ex::boolean(true, p);
        if (accept("false")) return ex::boolean(false, p);
        if (is("error") || is("match_kind")) {
            std::string tn = take().text;
            expect(".");
            return ex::type_member(tn, ident(), p);
        }
        if (is("init")) {
            take();
            expect("<:");
            auto ty = type();
            expect(":>");
            return ex::init(ty, p);
        }
        if (is_type_name() && is(".", 1)) {
            std::string tn = take().text;
            take();
            return ex::type_member(tn, ident(), p);
        }
        if (is_ident()) return ex::var(take().text, p);
        if (accept("(")) {
            auto e = expr();
            expect(")");
            return e;
        }
        if (accept("{")) {
            std::vector<FieldExpr> fs;
            if (!is("}")) {
                do {
                    auto n = ident();
                    expect("=");
                    fs.push_back({n, expr()});
                } while (accept(","));
            }
            expect("}");
            return ex::record(fs, p);
        }
        fail("expression");
    }

    // ----------------------------------------------------------- statements

    StmtPtr block() {
        Pos p = expect("{").pos;
        std::vector<StmtPtr> ss;
        while (!is("}")) {
            if (at_end()) fail("'}'");
            ss.push_back(stmt());
        }
        expect("}");
        return st::block(ss, p);
    }

    bool starts_var_decl() const {
        if (is("const")) return true;
        const Token &t = peek();
        if (t.kind == TokenKind::Keyword) {
            if (t.text == "error" || t.text == "match_kind") return is_ident(1) || is("[", 1);
            return starts_type();
        }
        return is_type_name();
    }

    StmtPtr stmt() {
        Pos p = peek().pos;
        if (is("{")) return block();
        if (accept("if")) {
            expect("(");
            auto c = expr();
            expect(")");
            auto t = stmt();
            StmtPtr e;
            if (accept("else")) e = stmt();
            return st::if_(c, t, e, p);
        }
        if (accept("exit")) {
            expect(";");
            return st::exit_(p);
        }
        if (accept("return")) {
            auto e = expr();
            expect(";");
            return st::return_(e, p);
        }
        if (accept("switch")) {
            expect("(");
            auto e = expr();
            expect(")");
            expect("{");
            std::vector<SwitchCase> cases;
            while (!is("}")) {
                SwitchCase c;
                if (accept("default")) {
                    c.label = std::nullopt;
                } else {
                    expect("case");
                    c.label = ident();
                }
                expect(":");
                c.body = block();
                cases.push_back(c);
            }
            expect("}");
            return st::switch_(e, cases, p);
        }
        if (starts_var_decl()) return st::decl(var_decl(), p);
        auto e = expr();
        if (accept(":=")) {
            auto rhs = expr();
            expect(";");
            return st::assign(e, rhs, p);
        }
        expect(";");
        if (e->kind != ExprKind::Call) throw ParseError("parse", p, "expression statement must be a call");
        return st::call(e, p);
    }

    // --------------------------------------------------------- declarations

    DeclPtr var_decl() {
        auto d = std::make_shared<Decl>();
        d->pos = peek().pos;
        if (accept("const")) {
            d->kind = DeclKind::Const;
            d->type = type();
            d->name = ident();
            expect("=");
            d->init = expr();
            expect(";");
            return d;
        }
        if (is_type_name() && is("(", 1)) {
            d->kind = DeclKind::Inst;
            d->typeName = take().text;
            d->args = call_args();
            d->name = ident();
            expect(";");
            return d;
        }
        d->type = type();
        d->name = ident();
        if (accept(":=")) {
            d->kind = DeclKind::VarInit;
            d->init = expr();
        } else {
            d->kind = DeclKind::VarUninit;
        }
        expect(";");
        return d;
    }

    std::vector<Param> params(bool withDirections) {
        std::vector<Param> ps;
        expect("(");
        if (!is(")")) {
            do {
                Param prm;
                if (withDirections) {
                    if (accept("in")) prm.dir = Direction::In;
                    else if (accept("out")) prm.dir = Direction::Out;
                    else if (accept("inout")) prm.dir = Direction::InOut;
                    else fail("direction");
                }
                prm.type = type();
                prm.name = ident();
                ps.push_back(prm);
            } while (accept(","));
        }
        expect(")");
        return ps;
    }

    ActionRef action_ref() {
        ActionRef a;
        a.pos = peek().pos;
        a.name = ident();
        expect("(");
        if (!is(")")) {
            do {
                if (is_ident() && is(":", 1)) {
                    CtrlParam cp;
                    cp.name = take().text;
                    take();
                    cp.type = type();
                    a.ctrlParams.push_back(cp);
                } else {
                    if (!a.ctrlParams.empty()) fail("control-plane parameter");
                    a.args.push_back(expr());
                }
            } while (accept(","));
        }
        expect(")");
        return a;
    }

    DeclPtr table_decl() {
        auto d = std::make_shared<Decl>();
        d->kind = DeclKind::Table;
        d->pos = expect("table").pos;
        d->name = ident();
        expect("{");
        expect_word("key");
        expect("=");
        expect("{");
        while (!is("}")) {
            KeyEntry k;
            k.expr = expr();
            expect(":");
            k.matchKind = ident();
            expect(";");
            d->keys.push_back(k);
        }
        expect("}");
        expect_word("actions");
        expect("=");
        expect("{");
        while (!is("}")) {
            d->actions.push_back(action_ref());
            expect(";");
        }
        expect("}");
        if (d->actions.empty()) throw ParseError("parse", d->pos, "table needs at least one action");
        if (is_ident() && peek().text == "default_action") {
            take();
            expect("=");
            ActionRef a;
            a.pos = peek().pos;
            a.name = ident();
            a.args = call_args();
            d->defaultAction = a;
            expect(";");
        }
        expect("}");
        return d;
    }

    DeclPtr decl(bool topLevel) {
        Pos p = peek().pos;
        if (is("typedef")) {
            take();
            auto d = std::make_shared<Decl>();
            d->kind = DeclKind::Typedef;
            d->pos = p;
            d->type = type();
            d->name = ident();
            expect(";");
            typeNames_.insert(d->name);
            return d;
        }
        if (is("enum") && is_ident(1) && is("{", 2)) {
            // `enum X {..} x;` declares a variable of an inline enum type.
            size_t save = i_;
            take();
            auto n = ident();
            auto ms = ident_list();
            if (!(is_ident() && (is(";", 1) || is(":=", 1)))) {
                auto d = std::make_shared<Decl>();
                d->kind = DeclKind::Enum;
                d->pos = p;
                d->name = n;
                d->members = ms;
                typeNames_.insert(n);
                return d;
            }
            i_ = save;
        }
        if ((is("error") || is("match_kind")) && is("{", 1)) {
            auto d = std::make_shared<Decl>();
            d->kind = is("error") ? DeclKind::Error : DeclKind::MatchKind;
            d->pos = p;
            take();
            d->members = ident_list();
            return d;
        }
        if (is("union") && is_ident(1) && is("{", 2)) {
            size_t save = i_;
            take();
            auto n = ident();
            auto fs = field_list();
            if (!(is_ident() && (is(";", 1) || is(":=", 1)))) {
                auto d = std::make_shared<Decl>();
                d->kind = DeclKind::Union;
                d->pos = p;
                d->name = n;
                d->fields = fs;
                typeNames_.insert(n);
                return d;
            }
            i_ = save;
        }
        if (is("table")) return table_decl();
        if (is("control")) {
            take();
            auto d = std::make_shared<Decl>();
            d->kind = DeclKind::Control;
            d->pos = p;
            d->name = ident();
            typeNames_.insert(d->name);
            d->params = params(true);
            if (is("(")) d->ctorParams = params(false);
            expect("{");
            auto saved = typeNames_;
            while (!is("apply")) {
                if (at_end()) fail("'apply'");
                d->locals.push_back(decl(false));
            }
            take();
            d->body = block();
            expect("}");
            typeNames_ = saved;
            typeNames_.insert(d->name);
            return d;
        }
        if (is("const") || (is_type_name() && is("(", 1))) return var_decl();
        // Function or variable: `type name` then `<:`/`(` or `;`/`:=`.
        size_t save = i_;
        auto t = type();
        auto n = ident();
        if (is("<:") || is("(")) {
            auto d = std::make_shared<Decl>();
            d->kind = DeclKind::Func;
            d->pos = p;
            d->type = t;
            d->name = n;
            auto saved = typeNames_;
            if (accept("<:")) {
                d->typeParams.push_back(ident());
                while (accept(",")) d->typeParams.push_back(ident());
                expect(":>");
                typeNames_.insert(d->typeParams.begin(), d->typeParams.end());
            }
            d->params = params(true);
            d->body = block();
            typeNames_ = saved;
            return d;
        }
        (void)topLevel;
        i_ = save;
        return var_decl();
    }
};

}  // namespace

Program parse_program(const std::vector<Token> &tokens) { return Parser(tokens, {}).program(); }

Program parse_program(std::string_view text, LexOptions opts) { return parse_program(lex(text, opts)); }

ExprPtr parse_expression(const std::vector<Token> &tokens, const std::set<std::string> &typeNames) {
    return Parser(tokens, typeNames).expression_only();
}

ExprPtr parse_expression(std::string_view text, const std::set<std::string> &typeNames) {
    auto toks = lex(text);
    return Parser(toks, typeNames).expression_only();
}

StmtPtr parse_statement(std::string_view text, const std::set<std::string> &typeNames) {
    auto toks = lex(text);
    return Parser(toks, typeNames).statement_only();
}

TypePtr parse_type(std::string_view text, const std::set<std::string> &typeNames) {
    auto toks = lex(text);
    return Parser(toks, typeNames).type_only();
}

}  // namespace pcore

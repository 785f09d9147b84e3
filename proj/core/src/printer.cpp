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

#include <sstream>
#include <string>

#include "pcore/frontend.hpp"

namespace pcore {

namespace {

int prec_of(BinOp op) {
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

constexpr int kUnaryPrec = 12;
constexpr int kPostfixPrec = 13;

int expr_prec(const Expr &e) {
    switch (e.kind) {
        case ExprKind::BinOp: return prec_of(e.bop);
        case ExprKind::UnOp:
        case ExprKind::Cast: return kUnaryPrec;
        default: return kPostfixPrec;
    }
}

class Printer {
 public:
    std::ostringstream out;

    void type(const Type &t) {
        switch (t.kind) {
            case TypeKind::Bool: out << "bool"; break;
            case TypeKind::Int: out << "int"; break;
            case TypeKind::Bit:
                out << "bit<";
                if (t.widthExpr) {
                    // A bare literal would come back as a literal width.
                    bool wrap = t.widthExpr->kind == ExprKind::Int || expr_prec(*t.widthExpr) < 10;
                    if (wrap) out << "(";
                    expr(*t.widthExpr, 0);
                    if (wrap) out << ")";
                } else {
                    out << t.width.value_or(0);
                }
                out << ">";
                break;
            case TypeKind::Error: out << "error"; break;
            case TypeKind::MatchKind: out << "match_kind"; break;
            case TypeKind::Enum:
                out << "enum " << t.name << " {";
                for (size_t i = 0; i < t.members.size(); ++i) out << (i ? ", " : "") << t.members[i];
                out << "}";
                break;
            case TypeKind::Record:
                out << "record ";
                fields(t.fields);
                break;
            case TypeKind::Header:
                out << "header ";
                fields(t.fields);
                break;
            case TypeKind::Union:
                out << "union " << t.name << " ";
                fields(t.fields);
                break;
            case TypeKind::Stack:
                type(*t.elem);
                out << "[" << t.size << "]";
                break;
            case TypeKind::Var: out << t.name; break;
            case TypeKind::Table: out << "table"; break;
            case TypeKind::Function:
                out << "fun";
                if (!t.typeParams.empty()) {
                    out << "<:";
                    for (size_t i = 0; i < t.typeParams.size(); ++i) out << (i ? ", " : "") << t.typeParams[i];
                    out << ":>";
                }
                params(t.params, true);
                out << " -> ";
                type(*t.ret);
                break;
            case TypeKind::Constructor:
                out << "ctor";
                params(t.params, false);
                out << " -> ";
                type(*t.ret);
                break;
        }
    }

    void fields(const std::vector<FieldType> &fs) {
        out << "{";
        for (const auto &f : fs) {
            out << " ";
            type(*f.type);
            out << " " << f.name << ";";
        }
        out << (fs.empty() ? "}" : " }");
    }

    void params(const std::vector<Param> &ps, bool withDirections) {
        out << "(";
        for (size_t i = 0; i < ps.size(); ++i) {
            if (i) out << ", ";
            if (withDirections) out << direction_name(ps[i].dir) << " ";
            type(*ps[i].type);
            out << " " << ps[i].name;
        }
        out << ")";
    }

    void args(const std::vector<ExprPtr> &as) {
        out << "(";
        for (size_t i = 0; i < as.size(); ++i) {
            if (i) out << ", ";
            expr(*as[i], 0);
        }
        out << ")";
    }

    void expr(const Expr &e, int minPrec) {
        int p = expr_prec(e);
        bool paren = p < minPrec;
        if (paren) out << "(";
        switch (e.kind) {
            case ExprKind::Bool: out << (e.boolVal ? "true" : "false"); break;
            case ExprKind::Int:
                out << e.intVal;
                if (e.width) out << "w'" << *e.width;
                break;
            case ExprKind::Var: out << e.name; break;
            case ExprKind::Index:
                expr(*e.sub[0], kPostfixPrec);
                out << "[";
                expr(*e.sub[1], 0);
                out << "]";
                break;
            case ExprKind::Slice:
                expr(*e.sub[0], kPostfixPrec);
                out << "[";
                expr(*e.sub[1], 0);
                out << ":";
                expr(*e.sub[2], 0);
                out << "]";
                break;
            case ExprKind::UnOp:
                out << unop_symbol(e.uop);
                expr(*e.sub[0], kUnaryPrec);
                break;
            case ExprKind::BinOp:
                expr(*e.sub[0], p);
                out << " " << binop_symbol(e.bop) << " ";
                expr(*e.sub[1], p + 1);
                break;
            case ExprKind::Cast:
                out << "(";
                type(*e.type);
                out << ") ";
                expr(*e.sub[0], kUnaryPrec);
                break;
            case ExprKind::Record:
                out << "{";
                for (size_t i = 0; i < e.fields.size(); ++i) {
                    out << (i ? ", " : "") << e.fields[i].name << " = ";
                    expr(*e.fields[i].expr, 0);
                }
                out << "}";
                break;
            case ExprKind::Member:
                expr(*e.sub[0], kPostfixPrec);
                out << "." << e.name;
                break;
            case ExprKind::TypeMember: out << e.typeName << "." << e.name; break;
            case ExprKind::Call:
                expr(*e.sub[0], kPostfixPrec);
                if (!e.typeArgs.empty()) {
                    out << "<:";
                    for (size_t i = 0; i < e.typeArgs.size(); ++i) {
                        if (i) out << ", ";
                        type(*e.typeArgs[i]);
                    }
                    out << ":>";
                }
                args(e.args);
                break;
            case ExprKind::Init:
                out << "init<:";
                type(*e.type);
                out << ":>";
                break;
        }
        if (paren) out << ")";
    }

    void indent(int depth) {
        for (int i = 0; i < depth; ++i) out << "    ";
    }

    void block_body(const Stmt &b, int depth) {
        out << "{";
        if (b.stmts.empty()) {
            out << "}";
            return;
        }
        out << "\n";
        for (const auto &s : b.stmts) {
            indent(depth + 1);
            stmt(*s, depth + 1);
            out << "\n";
        }
        indent(depth);
        out << "}";
    }

    void stmt(const Stmt &s, int depth) {
        switch (s.kind) {
            case StmtKind::Call:
                expr(*s.e1, 0);
                out << ";";
                break;
            case StmtKind::Assign:
                expr(*s.e1, 0);
                out << " := ";
                expr(*s.e2, 0);
                out << ";";
                break;
            case StmtKind::If:
                out << "if (";
                expr(*s.e1, 0);
                out << ") ";
                stmt(*s.s1, depth);
                out << " else ";
                stmt(*s.s2, depth);
                break;
            case StmtKind::Block: block_body(s, depth); break;
            case StmtKind::Exit: out << "exit;"; break;
            case StmtKind::Return:
                out << "return ";
                expr(*s.e1, 0);
                out << ";";
                break;
            case StmtKind::Decl: decl(*s.decl, depth); break;
            case StmtKind::Switch:
                out << "switch (";
                expr(*s.e1, 0);
                out << ") {\n";
                for (const auto &c : s.cases) {
                    indent(depth + 1);
                    if (c.label) out << "case " << *c.label << ": ";
                    else out << "default: ";
                    stmt(*c.body, depth + 1);
                    out << "\n";
                }
                indent(depth);
                out << "}";
                break;
        }
    }

    void action_ref(const ActionRef &a) {
        out << a.name << "(";
        bool first = true;
        for (const auto &e : a.args) {
            if (!first) out << ", ";
            first = false;
            expr(*e, 0);
        }
        for (const auto &cp : a.ctrlParams) {
            if (!first) out << ", ";
            first = false;
            out << cp.name << ": ";
            type(*cp.type);
        }
        out << ")";
    }

    void ident_list(const std::vector<std::string> &ms) {
        out << "{";
        for (size_t i = 0; i < ms.size(); ++i) out << (i ? ", " : "") << ms[i];
        out << "}";
    }

    void decl(const Decl &d, int depth) {
        switch (d.kind) {
            case DeclKind::Const:
                out << "const ";
                type(*d.type);
                out << " " << d.name << " = ";
                expr(*d.init, 0);
                out << ";";
                break;
            case DeclKind::VarInit:
                type(*d.type);
                out << " " << d.name << " := ";
                expr(*d.init, 0);
                out << ";";
                break;
            case DeclKind::VarUninit:
                type(*d.type);
                out << " " << d.name << ";";
                break;
            case DeclKind::Inst:
                out << d.typeName;
                args(d.args);
                out << " " << d.name << ";";
                break;
            case DeclKind::Typedef:
                out << "typedef ";
                type(*d.type);
                out << " " << d.name << ";";
                break;
            case DeclKind::Enum:
                out << "enum " << d.name << " ";
                ident_list(d.members);
                break;
            case DeclKind::Error:
                out << "error ";
                ident_list(d.members);
                break;
            case DeclKind::MatchKind:
                out << "match_kind ";
                ident_list(d.members);
                break;
            case DeclKind::Union:
                out << "union " << d.name << " ";
                fields(d.fields);
                break;
            case DeclKind::Table:
                out << "table " << d.name << " {\n";
                indent(depth + 1);
                out << "key = {";
                for (const auto &k : d.keys) {
                    out << " ";
                    expr(*k.expr, 0);
                    out << " : " << k.matchKind << ";";
                }
                out << (d.keys.empty() ? "}\n" : " }\n");
                indent(depth + 1);
                out << "actions = {";
                for (const auto &a : d.actions) {
                    out << " ";
                    action_ref(a);
                    out << ";";
                }
                out << " }\n";
                if (d.defaultAction) {
                    indent(depth + 1);
                    out << "default_action = ";
                    action_ref(*d.defaultAction);
                    out << ";\n";
                }
                indent(depth);
                out << "}";
                break;
            case DeclKind::Control:
                out << "control " << d.name;
                params(d.params, true);
                params(d.ctorParams, false);
                out << " {\n";
                for (const auto &l : d.locals) {
                    indent(depth + 1);
                    decl(*l, depth + 1);
                    out << "\n";
                }
                indent(depth + 1);
                out << "apply ";
                stmt(*d.body, depth + 1);
                out << "\n";
                indent(depth);
                out << "}";
                break;
            case DeclKind::Func:
                type(*d.type);
                out << " " << d.name;
                if (!d.typeParams.empty()) {
                    out << "<:";
                    for (size_t i = 0; i < d.typeParams.size(); ++i) out << (i ? ", " : "") << d.typeParams[i];
                    out << ":>";
                }
                params(d.params, true);
                out << " ";
                stmt(*d.body, depth);
                break;
        }
    }
};

}  // namespace

std::string pretty_print(const Program &p) {
    Printer pr;
    for (const auto &d : p.decls) {
        pr.decl(*d, 0);
        pr.out << "\n";
    }
    return pr.out.str();
}

std::string pretty_print(const Decl &d) {
    Printer pr;
    pr.decl(d, 0);
    return pr.out.str();
}

std::string pretty_print(const Stmt &s) {
    Printer pr;
    pr.stmt(s, 0);
    return pr.out.str();
}

std::string pretty_print(const Expr &e) {
    Printer pr;
    pr.expr(e, 0);
    return pr.out.str();
}

std::string pretty_print(const Type &t) {
    Printer pr;
    pr.type(t);
    return pr.out.str();
}

std::string pretty_print(const TypePtr &t) { return t ? pretty_print(*t) : std::string("<null>"); }
std::string pretty_print(const ExprPtr &e) { return e ? pretty_print(*e) : std::string("<null>"); }

}  // namespace pcore

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

#include "pcore/ast.hpp"

#include <algorithm>
#include <utility>

#include "pcore/errors.hpp"

namespace pcore {

const char *direction_name(Direction d) {
    switch (d) {
        case Direction::In: return "in";
        case Direction::Out: return "out";
        case Direction::InOut: return "inout";
    }
    return "?";
}

namespace ty {
namespace {
TypePtr make(TypeKind k) {
    auto t = std::make_shared<Type>();
    t->kind = k;
    return t;
}
}  // namespace

TypePtr boolean() {
    static const TypePtr t = make(TypeKind::Bool);
    return t;
}
TypePtr integer() {
    static const TypePtr t = make(TypeKind::Int);
    return t;
}
TypePtr bit(uint64_t w) {
    auto t = std::make_shared<Type>();
    t->kind = TypeKind::Bit;
    t->width = w;
    return t;
}
TypePtr bit_expr(ExprPtr w) {
    auto t = std::make_shared<Type>();
    t->kind = TypeKind::Bit;
    t->widthExpr = std::move(w);
    return t;
}
TypePtr error() {
    static const TypePtr t = make(TypeKind::Error);
    return t;
}
TypePtr match_kind() {
    static const TypePtr t = make(TypeKind::MatchKind);
    return t;
}
TypePtr enumeration(std::string name, std::vector<std::string> members) {
    auto t = std::make_shared<Type>();
    t->kind = TypeKind::Enum;
    t->name = std::move(name);
    t->members = std::move(members);
    return t;
}
TypePtr record(std::vector<FieldType> fields) {
    auto t = std::make_shared<Type>();
    t->kind = TypeKind::Record;
    t->fields = std::move(fields);
    return t;
}
TypePtr header(std::vector<FieldType> fields) {
    auto t = std::make_shared<Type>();
    t->kind = TypeKind::Header;
    t->fields = std::move(fields);
    return t;
}
TypePtr stack(TypePtr elem, uint64_t size) {
    auto t = std::make_shared<Type>();
    t->kind = TypeKind::Stack;
    t->elem = std::move(elem);
    t->size = size;
    return t;
}
TypePtr var(std::string name) {
    auto t = std::make_shared<Type>();
    t->kind = TypeKind::Var;
    t->name = std::move(name);
    return t;
}
TypePtr union_(std::string name, std::vector<FieldType> alts) {
    auto t = std::make_shared<Type>();
    t->kind = TypeKind::Union;
    t->name = std::move(name);
    t->fields = std::move(alts);
    return t;
}
TypePtr table() {
    static const TypePtr t = make(TypeKind::Table);
    return t;
}
TypePtr function(std::vector<std::string> typeParams, std::vector<Param> params, TypePtr ret) {
    auto t = std::make_shared<Type>();
    t->kind = TypeKind::Function;
    t->typeParams = std::move(typeParams);
    t->params = std::move(params);
    t->ret = std::move(ret);
    return t;
}
TypePtr constructor(std::vector<Param> params, TypePtr ret) {
    auto t = std::make_shared<Type>();
    t->kind = TypeKind::Constructor;
    t->params = std::move(params);
    t->ret = std::move(ret);
    return t;
}
TypePtr unit() {
    static const TypePtr t = record({});
    return t;
}
}  // namespace ty

bool is_base_type(const Type &t) {
    switch (t.kind) {
        case TypeKind::Table:
        case TypeKind::Function:
        case TypeKind::Constructor: return false;
        default: return true;
    }
}

bool is_unit(const Type &t) { return t.kind == TypeKind::Record && t.fields.empty(); }

const FieldType *find_field(const Type &t, const std::string &name) {
    for (const auto &f : t.fields)
        if (f.name == name) return &f;
    return nullptr;
}

const char *unop_symbol(UnOp op) {
    switch (op) {
        case UnOp::Not: return "!";
        case UnOp::Neg: return "-";
        case UnOp::BitNot: return "~";
    }
    return "?";
}

const char *unop_name(UnOp op) {
    switch (op) {
        case UnOp::Not: return "not";
        case UnOp::Neg: return "neg";
        case UnOp::BitNot: return "bitnot";
    }
    return "?";
}

const char *binop_symbol(BinOp op) {
    switch (op) {
        case BinOp::Add: return "+";
        case BinOp::Sub: return "-";
        case BinOp::Mul: return "*";
        case BinOp::Div: return "/";
        case BinOp::Mod: return "%";
        case BinOp::Shl: return "<<";
        case BinOp::Shr: return ">>";
        case BinOp::BAnd: return "&";
        case BinOp::BOr: return "|";
        case BinOp::BXor: return "^";
        case BinOp::Concat: return "++";
        case BinOp::Eq: return "==";
        case BinOp::Neq: return "!=";
        case BinOp::Lt: return "<";
        case BinOp::Le: return "<=";
        case BinOp::Gt: return ">";
        case BinOp::Ge: return ">=";
        case BinOp::LAnd: return "&&";
        case BinOp::LOr: return "||";
    }
    return "?";
}

const char *binop_name(BinOp op) {
    switch (op) {
        case BinOp::Add: return "add";
        case BinOp::Sub: return "sub";
        case BinOp::Mul: return "mul";
        case BinOp::Div: return "div";
        case BinOp::Mod: return "mod";
        case BinOp::Shl: return "shl";
        case BinOp::Shr: return "shr";
        case BinOp::BAnd: return "band";
        case BinOp::BOr: return "bor";
        case BinOp::BXor: return "bxor";
        case BinOp::Concat: return "concat";
        case BinOp::Eq: return "eq";
        case BinOp::Neq: return "neq";
        case BinOp::Lt: return "lt";
        case BinOp::Le: return "le";
        case BinOp::Gt: return "gt";
        case BinOp::Ge: return "ge";
        case BinOp::LAnd: return "land";
        case BinOp::LOr: return "lor";
    }
    return "?";
}

namespace ex {
namespace {
std::shared_ptr<Expr> make(ExprKind k, Pos p) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->pos = p;
    return e;
}
}  // namespace

ExprPtr boolean(bool b, Pos p) {
    auto e = make(ExprKind::Bool, p);
    e->boolVal = b;
    return e;
}
ExprPtr integer(BigInt v, std::optional<uint64_t> width, Pos p) {
    auto e = make(ExprKind::Int, p);
    e->intVal = std::move(v);
    e->width = width;
    return e;
}
ExprPtr var(std::string name, Pos p) {
    auto e = make(ExprKind::Var, p);
    e->name = std::move(name);
    return e;
}
ExprPtr index(ExprPtr a, ExprPtr i, Pos p) {
    auto e = make(ExprKind::Index, p);
    e->sub = {std::move(a), std::move(i)};
    return e;
}
ExprPtr slice(ExprPtr a, ExprPtr hi, ExprPtr lo, Pos p) {
    auto e = make(ExprKind::Slice, p);
    e->sub = {std::move(a), std::move(hi), std::move(lo)};
    return e;
}
ExprPtr unop(UnOp op, ExprPtr a, Pos p) {
    auto e = make(ExprKind::UnOp, p);
    e->uop = op;
    e->sub = {std::move(a)};
    return e;
}
ExprPtr binop(BinOp op, ExprPtr a, ExprPtr b, Pos p) {
    auto e = make(ExprKind::BinOp, p);
    e->bop = op;
    e->sub = {std::move(a), std::move(b)};
    return e;
}
ExprPtr cast(TypePtr t, ExprPtr a, Pos p) {
    auto e = make(ExprKind::Cast, p);
    e->type = std::move(t);
    e->sub = {std::move(a)};
    return e;
}
ExprPtr record(std::vector<FieldExpr> fields, Pos p) {
    auto e = make(ExprKind::Record, p);
    e->fields = std::move(fields);
    return e;
}
ExprPtr member(ExprPtr a, std::string field, Pos p) {
    auto e = make(ExprKind::Member, p);
    e->sub = {std::move(a)};
    e->name = std::move(field);
    return e;
}
ExprPtr type_member(std::string type, std::string member, Pos p) {
    auto e = make(ExprKind::TypeMember, p);
    e->typeName = std::move(type);
    e->name = std::move(member);
    return e;
}
ExprPtr call(ExprPtr callee, std::vector<TypePtr> typeArgs, std::vector<ExprPtr> args, Pos p) {
    auto e = make(ExprKind::Call, p);
    e->sub = {std::move(callee)};
    e->typeArgs = std::move(typeArgs);
    e->args = std::move(args);
    return e;
}
ExprPtr init(TypePtr t, Pos p) {
    auto e = make(ExprKind::Init, p);
    e->type = std::move(t);
    return e;
}
}  // namespace ex

namespace st {
namespace {
std::shared_ptr<Stmt> make(StmtKind k, Pos p) {
    auto s = std::make_shared<Stmt>();
    s->kind = k;
    s->pos = p;
    return s;
}
}  // namespace

StmtPtr call(ExprPtr e, Pos p) {
    auto s = make(StmtKind::Call, p);
    s->e1 = std::move(e);
    return s;
}
StmtPtr assign(ExprPtr lhs, ExprPtr rhs, Pos p) {
    auto s = make(StmtKind::Assign, p);
    s->e1 = std::move(lhs);
    s->e2 = std::move(rhs);
    return s;
}
StmtPtr if_(ExprPtr c, StmtPtr t, StmtPtr e, Pos p) {
    auto s = make(StmtKind::If, p);
    s->e1 = std::move(c);
    s->s1 = std::move(t);
    s->s2 = e ? std::move(e) : block({}, p);
    return s;
}
StmtPtr block(std::vector<StmtPtr> stmts, Pos p) {
    auto s = make(StmtKind::Block, p);
    s->stmts = std::move(stmts);
    return s;
}
StmtPtr exit_(Pos p) { return make(StmtKind::Exit, p); }
StmtPtr return_(ExprPtr e, Pos p) {
    auto s = make(StmtKind::Return, p);
    s->e1 = std::move(e);
    return s;
}
StmtPtr decl(DeclPtr d, Pos p) {
    auto s = make(StmtKind::Decl, p);
    s->decl = std::move(d);
    return s;
}
StmtPtr switch_(ExprPtr e, std::vector<SwitchCase> cases, Pos p) {
    auto s = make(StmtKind::Switch, p);
    s->e1 = std::move(e);
    s->cases = std::move(cases);
    return s;
}
}  // namespace st

bool is_var_decl(const Decl &d) {
    switch (d.kind) {
        case DeclKind::Const:
        case DeclKind::VarInit:
        case DeclKind::VarUninit:
        case DeclKind::Inst: return true;
        default: return false;
    }
}

bool is_type_decl(const Decl &d) {
    switch (d.kind) {
        case DeclKind::Typedef:
        case DeclKind::Enum:
        case DeclKind::Error:
        case DeclKind::MatchKind:
        case DeclKind::Union: return true;
        default: return false;
    }
}

// ---------------------------------------------------------------------------
// Structural equality

namespace {

template <typename T, typename F>
bool all_equal(const std::vector<T> &a, const std::vector<T> &b, F eq) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!eq(a[i], b[i])) return false;
    return true;
}

bool params_equal(const std::vector<Param> &a, const std::vector<Param> &b) {
    return all_equal(a, b, [](const Param &x, const Param &y) {
        return x.dir == y.dir && x.name == y.name && equal(x.type, y.type);
    });
}

bool fields_equal(const std::vector<FieldType> &a, const std::vector<FieldType> &b) {
    return all_equal(a, b, [](const FieldType &x, const FieldType &y) {
        return x.name == y.name && equal(x.type, y.type);
    });
}

bool action_equal(const ActionRef &a, const ActionRef &b) {
    return a.name == b.name &&
           all_equal(a.args, b.args, [](const ExprPtr &x, const ExprPtr &y) { return equal(x, y); }) &&
           all_equal(a.ctrlParams, b.ctrlParams, [](const CtrlParam &x, const CtrlParam &y) {
               return x.name == y.name && equal(x.type, y.type);
           });
}

}  // namespace

bool equal(const TypePtr &a, const TypePtr &b) {
    if (!a || !b) return !a && !b;
    return equal(*a, *b);
}
bool equal(const ExprPtr &a, const ExprPtr &b) {
    if (!a || !b) return !a && !b;
    return equal(*a, *b);
}
bool equal(const StmtPtr &a, const StmtPtr &b) {
    if (!a || !b) return !a && !b;
    return equal(*a, *b);
}
bool equal(const DeclPtr &a, const DeclPtr &b) {
    if (!a || !b) return !a && !b;
    return equal(*a, *b);
}

bool equal(const Type &a, const Type &b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case TypeKind::Bool:
        case TypeKind::Int:
        case TypeKind::Error:
        case TypeKind::MatchKind:
        case TypeKind::Table: return true;
        case TypeKind::Bit: return a.width == b.width && equal(a.widthExpr, b.widthExpr);
        case TypeKind::Enum: return a.name == b.name && a.members == b.members;
        case TypeKind::Record:
        case TypeKind::Header: return fields_equal(a.fields, b.fields);
        case TypeKind::Union: return a.name == b.name && fields_equal(a.fields, b.fields);
        case TypeKind::Stack: return a.size == b.size && equal(a.elem, b.elem);
        case TypeKind::Var: return a.name == b.name;
        case TypeKind::Function:
            return a.typeParams == b.typeParams && params_equal(a.params, b.params) && equal(a.ret, b.ret);
        case TypeKind::Constructor: return params_equal(a.params, b.params) && equal(a.ret, b.ret);
    }
    return false;
}

bool equal(const Expr &a, const Expr &b) {
    if (a.kind != b.kind) return false;
    auto subs = [](const std::vector<ExprPtr> &x, const std::vector<ExprPtr> &y) {
        return all_equal(x, y, [](const ExprPtr &p, const ExprPtr &q) { return equal(p, q); });
    };
    switch (a.kind) {
        case ExprKind::Bool: return a.boolVal == b.boolVal;
        case ExprKind::Int: return a.intVal == b.intVal && a.width == b.width;
        case ExprKind::Var: return a.name == b.name;
        case ExprKind::Index:
        case ExprKind::Slice: return subs(a.sub, b.sub);
        case ExprKind::UnOp: return a.uop == b.uop && subs(a.sub, b.sub);
        case ExprKind::BinOp: return a.bop == b.bop && subs(a.sub, b.sub);
        case ExprKind::Cast: return equal(a.type, b.type) && subs(a.sub, b.sub);
        case ExprKind::Record:
            return all_equal(a.fields, b.fields, [](const FieldExpr &x, const FieldExpr &y) {
                return x.name == y.name && equal(x.expr, y.expr);
            });
        case ExprKind::Member: return a.name == b.name && subs(a.sub, b.sub);
        case ExprKind::TypeMember: return a.typeName == b.typeName && a.name == b.name;
        case ExprKind::Call:
            return subs(a.sub, b.sub) && subs(a.args, b.args) &&
                   all_equal(a.typeArgs, b.typeArgs, [](const TypePtr &x, const TypePtr &y) { return equal(x, y); });
        case ExprKind::Init: return equal(a.type, b.type);
    }
    return false;
}

bool equal(const Stmt &a, const Stmt &b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case StmtKind::Call:
        case StmtKind::Return: return equal(a.e1, b.e1);
        case StmtKind::Assign: return equal(a.e1, b.e1) && equal(a.e2, b.e2);
        case StmtKind::If: return equal(a.e1, b.e1) && equal(a.s1, b.s1) && equal(a.s2, b.s2);
        case StmtKind::Block:
            return all_equal(a.stmts, b.stmts, [](const StmtPtr &x, const StmtPtr &y) { return equal(x, y); });
        case StmtKind::Exit: return true;
        case StmtKind::Decl: return equal(a.decl, b.decl);
        case StmtKind::Switch:
            return equal(a.e1, b.e1) &&
                   all_equal(a.cases, b.cases, [](const SwitchCase &x, const SwitchCase &y) {
                       return x.label == y.label && equal(x.body, y.body);
                   });
    }
    return false;
}

bool equal(const Decl &a, const Decl &b) {
    if (a.kind != b.kind || a.name != b.name) return false;
    auto exprs = [](const std::vector<ExprPtr> &x, const std::vector<ExprPtr> &y) {
        return all_equal(x, y, [](const ExprPtr &p, const ExprPtr &q) { return equal(p, q); });
    };
    switch (a.kind) {
        case DeclKind::Const:
        case DeclKind::VarInit: return equal(a.type, b.type) && equal(a.init, b.init);
        case DeclKind::VarUninit:
        case DeclKind::Typedef: return equal(a.type, b.type);
        case DeclKind::Inst: return a.typeName == b.typeName && exprs(a.args, b.args);
        case DeclKind::Enum:
        case DeclKind::Error:
        case DeclKind::MatchKind: return a.members == b.members;
        case DeclKind::Union: return fields_equal(a.fields, b.fields);
        case DeclKind::Table:
            return all_equal(a.keys, b.keys,
                             [](const KeyEntry &x, const KeyEntry &y) {
                                 return x.matchKind == y.matchKind && equal(x.expr, y.expr);
                             }) &&
                   all_equal(a.actions, b.actions, action_equal) &&
                   a.defaultAction.has_value() == b.defaultAction.has_value() &&
                   (!a.defaultAction || action_equal(*a.defaultAction, *b.defaultAction));
        case DeclKind::Control:
            return params_equal(a.params, b.params) && params_equal(a.ctorParams, b.ctorParams) &&
                   all_equal(a.locals, b.locals, [](const DeclPtr &x, const DeclPtr &y) { return equal(x, y); }) &&
                   equal(a.body, b.body);
        case DeclKind::Func:
            return equal(a.type, b.type) && a.typeParams == b.typeParams && params_equal(a.params, b.params) &&
                   equal(a.body, b.body);
    }
    return false;
}

bool equal(const Program &a, const Program &b) {
    return all_equal(a.decls, b.decls, [](const DeclPtr &x, const DeclPtr &y) { return equal(x, y); });
}

// ---------------------------------------------------------------------------
// Normalized types

bool is_normalized_shape(const Type &t) {
    switch (t.kind) {
        case TypeKind::Bit: return t.width.has_value() && !t.widthExpr;
        case TypeKind::Record:
        case TypeKind::Header:
        case TypeKind::Union:
            return std::all_of(t.fields.begin(), t.fields.end(),
                               [](const FieldType &f) { return is_normalized_shape(*f.type); });
        case TypeKind::Stack: return is_normalized_shape(*t.elem);
        case TypeKind::Function:
        case TypeKind::Constructor:
            return std::all_of(t.params.begin(), t.params.end(),
                               [](const Param &p) { return is_normalized_shape(*p.type); }) &&
                   is_normalized_shape(*t.ret);
        default: return true;
    }
}

namespace {

using Renaming = std::vector<std::pair<std::string, std::string>>;

bool teq(const Type &a, const Type &b, Renaming &ren);

bool teq_ptr(const TypePtr &a, const TypePtr &b, Renaming &ren) {
    if (!a || !b) throw InternalError("type_equal", {}, "null type");
    return teq(*a, *b, ren);
}

bool teq(const Type &a, const Type &b, Renaming &ren) {
    if ((a.kind == TypeKind::Bit && !a.width) || (b.kind == TypeKind::Bit && !b.width))
        throw InternalError("type_equal", {}, "width not evaluated");
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case TypeKind::Bool:
        case TypeKind::Int:
        case TypeKind::Error:
        case TypeKind::MatchKind:
        case TypeKind::Table: return true;
        case TypeKind::Bit: return *a.width == *b.width;
        case TypeKind::Enum: return a.name == b.name && a.members == b.members;
        case TypeKind::Record:
        case TypeKind::Header:
        case TypeKind::Union:
            if (a.kind == TypeKind::Union && a.name != b.name) return false;
            if (a.fields.size() != b.fields.size()) return false;
            for (size_t i = 0; i < a.fields.size(); ++i)
                if (a.fields[i].name != b.fields[i].name || !teq_ptr(a.fields[i].type, b.fields[i].type, ren))
                    return false;
            return true;
        case TypeKind::Stack: return a.size == b.size && teq_ptr(a.elem, b.elem, ren);
        case TypeKind::Var:
            for (auto it = ren.rbegin(); it != ren.rend(); ++it) {
                if (it->first == a.name || it->second == b.name)
                    return it->first == a.name && it->second == b.name;
            }
            return a.name == b.name;
        case TypeKind::Function:
        case TypeKind::Constructor: {
            if (a.typeParams.size() != b.typeParams.size() || a.params.size() != b.params.size()) return false;
            size_t mark = ren.size();
            for (size_t i = 0; i < a.typeParams.size(); ++i) ren.emplace_back(a.typeParams[i], b.typeParams[i]);
            bool ok = true;
            for (size_t i = 0; ok && i < a.params.size(); ++i)
                ok = a.params[i].dir == b.params[i].dir && a.params[i].name == b.params[i].name &&
                     teq_ptr(a.params[i].type, b.params[i].type, ren);
            ok = ok && teq_ptr(a.ret, b.ret, ren);
            ren.resize(mark);
            return ok;
        }
    }
    return false;
}

void ftv(const Type &t, std::set<std::string> &bound, std::set<std::string> &out) {
    switch (t.kind) {
        case TypeKind::Var:
            if (!bound.count(t.name)) out.insert(t.name);
            break;
        case TypeKind::Record:
        case TypeKind::Header:
        case TypeKind::Union:
            for (const auto &f : t.fields) ftv(*f.type, bound, out);
            break;
        case TypeKind::Stack: ftv(*t.elem, bound, out); break;
        case TypeKind::Function:
        case TypeKind::Constructor: {
            std::set<std::string> inner = bound;
            inner.insert(t.typeParams.begin(), t.typeParams.end());
            for (const auto &p : t.params) ftv(*p.type, inner, out);
            ftv(*t.ret, inner, out);
            break;
        }
        default: break;
    }
}

}  // namespace

bool type_equal(const TypePtr &a, const TypePtr &b) {
    Renaming ren;
    return teq_ptr(a, b, ren);
}

std::set<std::string> free_type_vars(const TypePtr &t) {
    std::set<std::string> bound, out;
    if (t) ftv(*t, bound, out);
    return out;
}

TypePtr substitute(const TypePtr &t, const std::vector<std::string> &names, const std::vector<TypePtr> &with) {
    if (!t || names.empty()) return t;
    switch (t->kind) {
        case TypeKind::Var:
            for (size_t i = 0; i < names.size(); ++i)
                if (names[i] == t->name) return with[i];
            return t;
        case TypeKind::Record:
        case TypeKind::Header:
        case TypeKind::Union: {
            auto c = std::make_shared<Type>(*t);
            for (auto &f : c->fields) f.type = substitute(f.type, names, with);
            return c;
        }
        case TypeKind::Stack: {
            auto c = std::make_shared<Type>(*t);
            c->elem = substitute(t->elem, names, with);
            return c;
        }
        case TypeKind::Function:
        case TypeKind::Constructor: {
            std::vector<std::string> n2;
            std::vector<TypePtr> w2;
            for (size_t i = 0; i < names.size(); ++i) {
                if (std::find(t->typeParams.begin(), t->typeParams.end(), names[i]) == t->typeParams.end()) {
                    n2.push_back(names[i]);
                    w2.push_back(with[i]);
                }
            }
            auto c = std::make_shared<Type>(*t);
            for (auto &p : c->params) p.type = substitute(p.type, n2, w2);
            c->ret = substitute(t->ret, n2, w2);
            return c;
        }
        default: return t;
    }
}

}  // namespace pcore

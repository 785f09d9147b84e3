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

#include "pcore/serialize.hpp"

#include <nlohmann/json.hpp>

namespace pcore {

namespace {

using nlohmann::json;

json big(const BigInt &n) { return n.str(); }
json width(const std::optional<uint64_t> &w) { return w ? json(*w) : json(nullptr); }

json type(const TypePtr &t);
json expr(const ExprPtr &e);
json stmt(const StmtPtr &s);
json decl(const DeclPtr &d);
json value(const ValuePtr &v);

json fields(const std::vector<FieldType> &fs) {
    json a = json::array();
    for (const auto &f : fs) a.push_back({{"name", f.name}, {"type", type(f.type)}});
    return a;
}

json params(const std::vector<Param> &ps) {
    json a = json::array();
    for (const auto &p : ps) a.push_back({{"dir", direction_name(p.dir)}, {"name", p.name}, {"type", type(p.type)}});
    return a;
}

json exprs(const std::vector<ExprPtr> &es) {
    json a = json::array();
    for (const auto &e : es) a.push_back(expr(e));
    return a;
}

json type(const TypePtr &t) {
    if (!t) return nullptr;
    switch (t->kind) {
        case TypeKind::Bool: return {{"kind", "bool"}};
        case TypeKind::Int: return {{"kind", "int"}};
        case TypeKind::Bit:
            if (t->widthExpr) return {{"kind", "bit"}, {"widthExpr", expr(t->widthExpr)}};
            return {{"kind", "bit"}, {"width", width(t->width)}};
        case TypeKind::Error: return {{"kind", "error"}};
        case TypeKind::MatchKind: return {{"kind", "match_kind"}};
        case TypeKind::Enum: return {{"kind", "enum"}, {"name", t->name}, {"members", t->members}};
        case TypeKind::Record: return {{"kind", "record"}, {"fields", fields(t->fields)}};
        case TypeKind::Header: return {{"kind", "header"}, {"fields", fields(t->fields)}};
        case TypeKind::Stack: return {{"kind", "stack"}, {"elem", type(t->elem)}, {"size", t->size}};
        case TypeKind::Var: return {{"kind", "name"}, {"name", t->name}};
        case TypeKind::Union: return {{"kind", "union"}, {"name", t->name}, {"alternatives", fields(t->fields)}};
        case TypeKind::Table: return {{"kind", "table"}};
        case TypeKind::Function:
            return {{"kind", "function"},
                    {"typeParams", t->typeParams},
                    {"params", params(t->params)},
                    {"ret", type(t->ret)}};
        case TypeKind::Constructor:
            return {{"kind", "constructor"}, {"params", params(t->params)}, {"ret", type(t->ret)}};
    }
    return nullptr;
}

json expr(const ExprPtr &e) {
    if (!e) return nullptr;
    switch (e->kind) {
        case ExprKind::Bool: return {{"kind", "bool"}, {"value", e->boolVal}};
        case ExprKind::Int: return {{"kind", "int"}, {"value", big(e->intVal)}, {"width", width(e->width)}};
        case ExprKind::Var: return {{"kind", "var"}, {"name", e->name}};
        case ExprKind::Index: return {{"kind", "index"}, {"base", expr(e->sub[0])}, {"index", expr(e->sub[1])}};
        case ExprKind::Slice:
            return {{"kind", "slice"}, {"base", expr(e->sub[0])}, {"hi", expr(e->sub[1])}, {"lo", expr(e->sub[2])}};
        case ExprKind::UnOp: return {{"kind", "unop"}, {"op", unop_name(e->uop)}, {"arg", expr(e->sub[0])}};
        case ExprKind::BinOp:
            return {{"kind", "binop"}, {"op", binop_name(e->bop)}, {"lhs", expr(e->sub[0])}, {"rhs", expr(e->sub[1])}};
        case ExprKind::Cast: return {{"kind", "cast"}, {"type", type(e->type)}, {"arg", expr(e->sub[0])}};
        case ExprKind::Record: {
            json fs = json::array();
            for (const auto &f : e->fields) fs.push_back({{"name", f.name}, {"expr", expr(f.expr)}});
            return {{"kind", "record"}, {"fields", fs}};
        }
        case ExprKind::Member: return {{"kind", "member"}, {"base", expr(e->sub[0])}, {"field", e->name}};
        case ExprKind::TypeMember: return {{"kind", "type_member"}, {"type", e->typeName}, {"member", e->name}};
        case ExprKind::Call: {
            json ts = json::array();
            for (const auto &t : e->typeArgs) ts.push_back(type(t));
            return {{"kind", "call"}, {"callee", expr(e->sub[0])}, {"typeArgs", ts}, {"args", exprs(e->args)}};
        }
        case ExprKind::Init: return {{"kind", "init"}, {"type", type(e->type)}};
    }
    return nullptr;
}

json stmt(const StmtPtr &s) {
    if (!s) return nullptr;
    switch (s->kind) {
        case StmtKind::Call: return {{"kind", "call"}, {"call", expr(s->e1)}};
        case StmtKind::Assign: return {{"kind", "assign"}, {"lhs", expr(s->e1)}, {"rhs", expr(s->e2)}};
        case StmtKind::If:
            return {{"kind", "if"}, {"cond", expr(s->e1)}, {"then", stmt(s->s1)}, {"else", stmt(s->s2)}};
        case StmtKind::Block: {
            json a = json::array();
            for (const auto &c : s->stmts) a.push_back(stmt(c));
            return {{"kind", "block"}, {"stmts", a}};
        }
        case StmtKind::Exit: return {{"kind", "exit"}};
        case StmtKind::Return: return {{"kind", "return"}, {"value", expr(s->e1)}};
        case StmtKind::Decl: return {{"kind", "decl"}, {"decl", decl(s->decl)}};
        case StmtKind::Switch: {
            json cs = json::array();
            for (const auto &c : s->cases)
                cs.push_back({{"label", c.label ? json(*c.label) : json(nullptr)}, {"body", stmt(c.body)}});
            return {{"kind", "switch"}, {"scrutinee", expr(s->e1)}, {"cases", cs}};
        }
    }
    return nullptr;
}

json action(const ActionRef &a) {
    json cps = json::array();
    for (const auto &c : a.ctrlParams) cps.push_back({{"name", c.name}, {"type", type(c.type)}});
    return {{"name", a.name}, {"args", exprs(a.args)}, {"ctrlParams", cps}};
}

json decl(const DeclPtr &d) {
    if (!d) return nullptr;
    switch (d->kind) {
        case DeclKind::Const:
            return {{"kind", "const"}, {"name", d->name}, {"type", type(d->type)}, {"init", expr(d->init)}};
        case DeclKind::VarInit:
            return {{"kind", "var"}, {"name", d->name}, {"type", type(d->type)}, {"init", expr(d->init)}};
        case DeclKind::VarUninit: return {{"kind", "var"}, {"name", d->name}, {"type", type(d->type)}, {"init", nullptr}};
        case DeclKind::Inst:
            return {{"kind", "instance"}, {"name", d->name}, {"type", d->typeName}, {"args", exprs(d->args)}};
        case DeclKind::Typedef: return {{"kind", "typedef"}, {"name", d->name}, {"type", type(d->type)}};
        case DeclKind::Enum: return {{"kind", "enum"}, {"name", d->name}, {"members", d->members}};
        case DeclKind::Error: return {{"kind", "error"}, {"members", d->members}};
        case DeclKind::MatchKind: return {{"kind", "match_kind"}, {"members", d->members}};
        case DeclKind::Union: return {{"kind", "union"}, {"name", d->name}, {"alternatives", fields(d->fields)}};
        case DeclKind::Table: {
            json keys = json::array();
            for (const auto &k : d->keys) keys.push_back({{"expr", expr(k.expr)}, {"matchKind", k.matchKind}});
            json acts = json::array();
            for (const auto &a : d->actions) acts.push_back(action(a));
            return {{"kind", "table"},
                    {"name", d->name},
                    {"keys", keys},
                    {"actions", acts},
                    {"defaultAction", d->defaultAction ? action(*d->defaultAction) : json(nullptr)}};
        }
        case DeclKind::Control: {
            json locals = json::array();
            for (const auto &l : d->locals) locals.push_back(decl(l));
            return {{"kind", "control"},   {"name", d->name},     {"params", params(d->params)},
                    {"ctorParams", params(d->ctorParams)}, {"locals", locals}, {"body", stmt(d->body)}};
        }
        case DeclKind::Func:
            return {{"kind", "function"},         {"name", d->name},          {"typeParams", d->typeParams},
                    {"params", params(d->params)}, {"ret", type(d->type)}, {"body", stmt(d->body)}};
    }
    return nullptr;
}

json value(const ValuePtr &v) {
    if (!v) return nullptr;
    switch (v->kind) {
        case ValueKind::Bool: return {{"kind", "bool"}, {"value", v->b}};
        case ValueKind::Int: return {{"kind", "int"}, {"value", big(v->n)}, {"width", width(v->width)}};
        case ValueKind::Record: {
            json fs = json::array();
            for (const auto &f : v->fields) fs.push_back({{"name", f.name}, {"value", value(f.value)}});
            return {{"kind", "record"}, {"fields", fs}};
        }
        case ValueKind::Header: {
            json fs = json::array();
            for (const auto &f : v->hfields)
                fs.push_back({{"name", f.name}, {"type", type(f.type)}, {"value", value(f.value)}});
            return {{"kind", "header"}, {"valid", v->b}, {"fields", fs}};
        }
        case ValueKind::TypeMember: return {{"kind", "type_member"}, {"type", v->typeName}, {"member", v->member}};
        case ValueKind::Stack: {
            json es = json::array();
            for (const auto &e : v->elems) es.push_back(value(e));
            return {{"kind", "stack"}, {"elemType", type(v->elemType)}, {"elems", es}};
        }
        case ValueKind::Union:
            return {{"kind", "union"}, {"type", v->typeName}, {"member", v->member}, {"payload", value(v->payload)}};
        case ValueKind::Closure: return {{"kind", "closure"}, {"params", params(v->params)}, {"ret", type(v->ret)}};
        case ValueKind::Native: return {{"kind", "native"}, {"name", v->name}};
        case ValueKind::Table: return {{"kind", "table"}, {"name", v->name}, {"id", v->id}};
        case ValueKind::CtorClosure:
            return {{"kind", "constructor_closure"}, {"params", params(v->params)}, {"ctorParams", params(v->ctorParams)}};
    }
    return nullptr;
}

}  // namespace

std::string dump_json(const Program &p, int indent) {
    json ds = json::array();
    for (const auto &d : p.decls) ds.push_back(decl(d));
    return json{{"kind", "program"}, {"decls", ds}}.dump(indent);
}
std::string dump_json(const TypePtr &t, int indent) { return type(t).dump(indent); }
std::string dump_json(const ExprPtr &e, int indent) { return expr(e).dump(indent); }
std::string dump_json(const StmtPtr &s, int indent) { return stmt(s).dump(indent); }
std::string dump_json(const ValuePtr &v, int indent) { return value(v).dump(indent); }

}  // namespace pcore

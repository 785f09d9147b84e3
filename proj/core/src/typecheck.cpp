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

#include "pcore/typecheck.hpp"

#include <algorithm>
#include <set>

#include "pcore/errors.hpp"
#include "pcore/frontend.hpp"
#include "pcore/ops.hpp"

namespace pcore {

namespace {

constexpr uint64_t kMaxWidth = uint64_t(1) << 20;

[[noreturn]] void fail(const std::string &rule, Pos pos, const std::string &msg) { throw TypeError(rule, pos, msg); }

std::string show(const TypePtr &t) { return pretty_print(t); }

const char *open_enum_name(TypeKind k) { return k == TypeKind::Error ? kErrorName : kMatchKindName; }

bool contains_union(const Type &t) {
    switch (t.kind) {
        case TypeKind::Union: return true;
        case TypeKind::Record:
        case TypeKind::Header:
            return std::any_of(t.fields.begin(), t.fields.end(), [](const FieldType &f) { return contains_union(*f.type); });
        case TypeKind::Stack: return contains_union(*t.elem);
        default: return false;
    }
}

// Type of a compile-time scalar, for checking operators inside cteval.
TypePtr scalar_type(const ValuePtr &v) {
    switch (v->kind) {
        case ValueKind::Bool: return ty::boolean();
        case ValueKind::Int: return v->width ? ty::bit(*v->width) : ty::integer();
        case ValueKind::TypeMember:
            if (v->typeName == kErrorName) return ty::error();
            if (v->typeName == kMatchKindName) return ty::match_kind();
            return ty::enumeration(v->typeName, {});
        default: return nullptr;
    }
}

void check_distinct(const std::vector<std::string> &names, const std::string &rule, Pos pos, const std::string &what) {
    std::set<std::string> seen;
    for (const auto &n : names)
        if (!seen.insert(n).second) fail(rule, pos, "duplicate " + what + " '" + n + "'");
}

TypePtr simplify_fields(const Sigma &sigma, const Delta &delta, const TypePtr &t) {
    auto c = std::make_shared<Type>(*t);
    std::vector<std::string> names;
    for (auto &f : c->fields) {
        f.type = simplify_type(sigma, delta, f.type);
        if (!is_base_type(*f.type)) fail("TyS-Rec", {}, "field '" + f.name + "' must have a base type");
        names.push_back(f.name);
    }
    check_distinct(names, "TyS-Rec", {}, "field");
    if (t->kind == TypeKind::Header || t->kind == TypeKind::Union)
        for (const auto &f : c->fields)
            if (contains_union(*f.type)) fail("TyS-Union", {}, "unions may not nest or appear in headers");
    return c;
}

}  // namespace

Contexts initial_contexts() {
    Contexts c;
    c.delta = c.delta.with_def(kMatchKindName, ty::enumeration(kMatchKindName, {"exact"}));
    return c;
}

// ---------------------------------------------------------------------------
// Type simplification and compile-time evaluation

TypePtr simplify_type(const Sigma &sigma, const Delta &delta, const TypePtr &t) {
    if (!t) throw InternalError("simplify", {}, "null type");
    switch (t->kind) {
        case TypeKind::Bool:
        case TypeKind::Int:
        case TypeKind::Error:
        case TypeKind::MatchKind:
        case TypeKind::Table: return t;
        case TypeKind::Enum:
            check_distinct(t->members, "TyS-Enum", {}, "enum member");
            return t;
        case TypeKind::Bit: {
            if (!t->widthExpr) return t;
            ValuePtr w = cteval(sigma, t->widthExpr);
            if (w->kind != ValueKind::Int || w->n < 0 || w->n > kMaxWidth)
                fail("TyS-Bit", t->widthExpr->pos, "width must be a nonnegative integer");
            return ty::bit(static_cast<uint64_t>(w->n));
        }
        case TypeKind::Var: {
            const DeltaNode *n = delta.lookup(t->name);
            if (!n) throw UnboundTypeVar("TyS-Var", {}, "unbound type name '" + t->name + "'");
            if (!n->def) return t;
            return simplify_type(sigma, Delta::suffix(n), n->def);
        }
        case TypeKind::Record:
        case TypeKind::Header:
        case TypeKind::Union: return simplify_fields(sigma, delta, t);
        case TypeKind::Stack: {
            auto c = std::make_shared<Type>(*t);
            c->elem = simplify_type(sigma, delta, t->elem);
            if (!is_base_type(*c->elem)) fail("TyS-Stack", {}, "stack elements must have a base type");
            if (contains_union(*c->elem)) fail("TyS-Union", {}, "unions may not appear in stacks");
            return c;
        }
        case TypeKind::Function:
        case TypeKind::Constructor: {
            Delta inner = delta;
            for (const auto &x : t->typeParams) inner = inner.with_var(x);
            auto c = std::make_shared<Type>(*t);
            for (auto &p : c->params) p.type = simplify_type(sigma, inner, p.type);
            c->ret = simplify_type(sigma, inner, t->ret);
            return c;
        }
    }
    return t;
}

ValuePtr cteval(const Sigma &sigma, const ExprPtr &e) {
    switch (e->kind) {
        case ExprKind::Bool: return val::boolean(e->boolVal);
        case ExprKind::Int: return val::integer(e->intVal, e->width);
        case ExprKind::Var: {
            auto it = sigma.find(e->name);
            if (it == sigma.end()) throw NotCompileTime("CTE-Var", e->pos, "'" + e->name + "' is not a constant");
            return it->second;
        }
        case ExprKind::UnOp: {
            auto v = cteval(sigma, e->sub[0]);
            auto t = scalar_type(v);
            if (!t) throw NotCompileTime("CTE-UOp", e->pos, "operand is not a scalar");
            type_of_unop(Delta(), e->uop, t);
            return eval_unop(e->uop, v);
        }
        case ExprKind::BinOp: {
            auto a = cteval(sigma, e->sub[0]);
            auto b = cteval(sigma, e->sub[1]);
            auto ta = scalar_type(a), tb = scalar_type(b);
            if (!ta || !tb) throw NotCompileTime("CTE-BinOp", e->pos, "operands are not scalars");
            if (ta->kind == TypeKind::Enum && tb->kind == TypeKind::Enum && a->typeName == b->typeName) tb = ta;
            type_of_binop(Delta(), e->bop, ta, tb);
            return eval_binop(e->bop, a, b);
        }
        default: throw NotCompileTime("CTE", e->pos, "expression is not compile-time known");
    }
}

bool is_inhabitable(const Delta &delta, const TypePtr &t) {
    switch (t->kind) {
        case TypeKind::Bool:
        case TypeKind::Int:
        case TypeKind::Bit: return true;
        case TypeKind::Enum: return !t->members.empty();
        case TypeKind::Error:
        case TypeKind::MatchKind: return !delta.open_enum_members(open_enum_name(t->kind)).empty();
        case TypeKind::Var: {
            const DeltaNode *n = delta.lookup(t->name);
            return n && !n->def;
        }
        case TypeKind::Record:
        case TypeKind::Header:
            return std::all_of(t->fields.begin(), t->fields.end(),
                               [&](const FieldType &f) { return is_inhabitable(delta, f.type); });
        case TypeKind::Union: return !t->fields.empty() && is_inhabitable(delta, t->fields.front().type);
        case TypeKind::Stack: return is_inhabitable(delta, t->elem);
        default: return false;
    }
}

// ---------------------------------------------------------------------------
// The checker proper

namespace {

class Checker {
 public:
    explicit Checker(const CheckOptions &opts) : opts_(opts) {}

    TypedExpr expr(const Sigma &sigma, const Gamma &gamma, const Delta &delta, const ExprPtr &e);
    Contexts stmt(const Contexts &ctx, const StmtPtr &s);
    Contexts decl(const Contexts &ctx, const DeclPtr &d);
    Contexts var_decl(const Contexts &ctx, const DeclPtr &d);
    Contexts type_decl(const Contexts &ctx, const DeclPtr &d);
    Contexts object_decl(const Contexts &ctx, const DeclPtr &d);
    void action_ok(const Contexts &ctx, const ActionRef &a);

    /// Checks a function-like body and returns its Function type.
    TypePtr callable(const Contexts &ctx, const std::vector<std::string> &typeParams, const std::vector<Param> &params,
                     const TypePtr &ret, const std::vector<DeclPtr> &locals, const StmtPtr &body, Pos pos,
                     bool requireReturn);

 private:
    const CheckOptions &opts_;

    TypePtr base_type(const Contexts &ctx, const TypePtr &t, const std::string &rule, Pos pos) {
        auto s = simplify_type(ctx.sigma, ctx.delta, t);
        if (!is_base_type(*s)) fail(rule, pos, "expected a base type, got " + show(s));
        return s;
    }

    void record_union(const Stmt *s, const TypePtr &t) {
        if (opts_.unionSites) (*opts_.unionSites)[s] = t;
    }

    void args_against(const Sigma &sigma, const Gamma &gamma, const Delta &delta, const std::vector<Param> &params,
                      const std::vector<ExprPtr> &args, size_t count, const std::string &rule, Pos pos,
                      std::vector<TypedExpr> *out);
};

void Checker::args_against(const Sigma &sigma, const Gamma &gamma, const Delta &delta,
                           const std::vector<Param> &params, const std::vector<ExprPtr> &args, size_t count,
                           const std::string &rule, Pos pos, std::vector<TypedExpr> *out) {
    for (size_t i = 0; i < count; ++i) {
        auto a = expr(sigma, gamma, delta, args[i]);
        const Param &p = params[i];
        if (!type_equal(a.type, p.type))
            fail(rule, args[i]->pos,
                 "argument for '" + p.name + "' has type " + show(a.type) + ", expected " + show(p.type));
        if (p.dir != Direction::In && a.dir != Direction::InOut)
            fail(rule, args[i]->pos, "argument for " + std::string(direction_name(p.dir)) + " parameter '" + p.name +
                                         "' is not an l-value");
        if (out) out->push_back(std::move(a));
    }
    (void)pos;
}

TypedExpr Checker::expr(const Sigma &sigma, const Gamma &gamma, const Delta &delta, const ExprPtr &e) {
    TypedExpr r;
    switch (e->kind) {
        case ExprKind::Bool: r.type = ty::boolean(); break;
        case ExprKind::Int:
            if (e->intVal < 0) fail("T-Integer", e->pos, "negative literal");
            r.type = e->width ? ty::bit(*e->width) : ty::integer();
            break;
        case ExprKind::Var: {
            auto it = gamma.find(e->name);
            if (it == gamma.end() || e->name == kReturnName) fail("T-Var", e->pos, "unbound name '" + e->name + "'");
            r.type = it->second;
            // Only non-constant variables of base type are l-values.
            r.dir = (!sigma.count(e->name) && is_base_type(*r.type)) ? Direction::InOut : Direction::In;
            break;
        }
        case ExprKind::Index: {
            auto a = expr(sigma, gamma, delta, e->sub[0]);
            auto i = expr(sigma, gamma, delta, e->sub[1]);
            if (a.type->kind != TypeKind::Stack) fail("T-Index", e->pos, "indexing a non-stack of type " + show(a.type));
            if (i.type->kind != TypeKind::Bit || *i.type->width != 32)
                fail("T-Index", e->sub[1]->pos, "index must have type bit<32>, got " + show(i.type));
            r.type = a.type->elem;
            r.dir = a.dir;
            r.sub = {std::move(a), std::move(i)};
            break;
        }
        case ExprKind::Slice: {
            auto a = expr(sigma, gamma, delta, e->sub[0]);
            auto h = expr(sigma, gamma, delta, e->sub[1]);
            auto l = expr(sigma, gamma, delta, e->sub[2]);
            if (a.type->kind != TypeKind::Bit) fail("T-Slice", e->pos, "slicing a non-bit value of type " + show(a.type));
            auto hv = cteval(sigma, e->sub[1]);
            auto lv = cteval(sigma, e->sub[2]);
            if (hv->kind != ValueKind::Int || lv->kind != ValueKind::Int)
                fail("T-Slice", e->pos, "slice bounds must be integers");
            uint64_t w = *a.type->width;
            if (!(hv->n < w && hv->n >= lv->n && lv->n >= 0))
                fail("T-Slice", e->pos, "slice bounds violate " + std::to_string(w) + " > hi >= lo >= 0");
            r.type = ty::bit(static_cast<uint64_t>(hv->n - lv->n + 1));
            r.dir = a.dir;
            r.sub = {std::move(a), std::move(h), std::move(l)};
            break;
        }
        case ExprKind::UnOp: {
            auto a = expr(sigma, gamma, delta, e->sub[0]);
            try {
                r.type = type_of_unop(delta, e->uop, a.type);
            } catch (const IllTypedOperator &err) {
                throw IllTypedOperator("T-UOp", e->pos, err.message());
            }
            r.sub = {std::move(a)};
            break;
        }
        case ExprKind::BinOp: {
            auto a = expr(sigma, gamma, delta, e->sub[0]);
            auto b = expr(sigma, gamma, delta, e->sub[1]);
            try {
                r.type = type_of_binop(delta, e->bop, a.type, b.type);
            } catch (const IllTypedOperator &err) {
                throw IllTypedOperator("T-BinOp", e->pos, err.message());
            }
            r.sub = {std::move(a), std::move(b)};
            break;
        }
        case ExprKind::Cast: {
            auto a = expr(sigma, gamma, delta, e->sub[0]);
            auto t = simplify_type(sigma, delta, e->type);
            if (!check_cast(delta, a.type, t)) fail("T-Cast", e->pos, "illegal cast from " + show(a.type) + " to " + show(t));
            r.type = t;
            r.sub = {std::move(a)};
            break;
        }
        case ExprKind::Record: {
            std::vector<FieldType> fs;
            std::vector<std::string> names;
            for (const auto &f : e->fields) {
                auto a = expr(sigma, gamma, delta, f.expr);
                if (!is_base_type(*a.type)) fail("T-Rec", f.expr->pos, "record fields must have base types");
                fs.push_back({f.name, a.type});
                names.push_back(f.name);
                r.sub.push_back(std::move(a));
            }
            check_distinct(names, "T-Rec", e->pos, "field");
            r.type = ty::record(std::move(fs));
            break;
        }
        case ExprKind::Member: {
            auto a = expr(sigma, gamma, delta, e->sub[0]);
            if (a.type->kind == TypeKind::Union)
                fail("T-Mem", e->pos, "union alternatives are read only through switch");
            if (a.type->kind != TypeKind::Record && a.type->kind != TypeKind::Header)
                fail("T-Mem", e->pos, "member access on non-record type " + show(a.type));
            const FieldType *f = find_field(*a.type, e->name);
            if (!f) fail("T-Mem", e->pos, "no field '" + e->name + "' in " + show(a.type));
            r.type = f->type;
            r.dir = a.dir;
            r.sub = {std::move(a)};
            break;
        }
        case ExprKind::TypeMember: {
            if (e->typeName == kErrorName || e->typeName == kMatchKindName) {
                auto ms = delta.open_enum_members(e->typeName);
                if (std::find(ms.begin(), ms.end(), e->name) == ms.end())
                    fail("T-TypeMem", e->pos, "no member '" + e->name + "' in " + e->typeName);
                r.type = e->typeName == kErrorName ? ty::error() : ty::match_kind();
                break;
            }
            auto t = simplify_type(sigma, delta, ty::var(e->typeName));
            if (t->kind != TypeKind::Enum) fail("T-TypeMem", e->pos, "'" + e->typeName + "' is not an enum");
            if (std::find(t->members.begin(), t->members.end(), e->name) == t->members.end())
                fail("T-TypeMem", e->pos, "no member '" + e->name + "' in enum " + e->typeName);
            r.type = t;
            break;
        }
        case ExprKind::Call: {
            auto c = expr(sigma, gamma, delta, e->sub[0]);
            if (c.type->kind == TypeKind::Table) fail("T-Call", e->pos, "tables are applied as statements");
            if (c.type->kind != TypeKind::Function) fail("T-Call", e->pos, "calling a non-function of type " + show(c.type));
            const Type &ft = *c.type;
            if (e->typeArgs.size() != ft.typeParams.size())
                fail("T-Call", e->pos, "expected " + std::to_string(ft.typeParams.size()) + " type arguments");
            std::vector<TypePtr> targs;
            for (const auto &ta : e->typeArgs) {
                auto s = simplify_type(sigma, delta, ta);
                if (!is_base_type(*s) || !is_inhabitable(delta, s))
                    fail("T-Call", e->pos, "type argument " + show(s) + " must be an inhabited base type");
                targs.push_back(s);
            }
            std::vector<Param> params = ft.params;
            for (auto &p : params) p.type = substitute(p.type, ft.typeParams, targs);
            if (e->args.size() != params.size())
                fail("T-Call", e->pos, "expected " + std::to_string(params.size()) + " arguments, got " +
                                           std::to_string(e->args.size()));
            r.sub.push_back(std::move(c));
            args_against(sigma, gamma, delta, params, e->args, params.size(), "T-Call", e->pos, &r.sub);
            r.type = substitute(ft.ret, ft.typeParams, targs);
            break;
        }
        case ExprKind::Init: {
            auto t = simplify_type(sigma, delta, e->type);
            if (!is_base_type(*t) || !is_inhabitable(delta, t))
                fail("T-Init", e->pos, "init needs an inhabited base type, got " + show(t));
            r.type = t;
            break;
        }
    }
    return r;
}

Contexts Checker::stmt(const Contexts &ctx, const StmtPtr &s) {
    switch (s->kind) {
        case StmtKind::Call: {
            const Expr &call = *s->e1;
            if (call.kind != ExprKind::Call) fail("TS-Call", s->pos, "statement is not a call");
            if (call.sub[0]->kind == ExprKind::Var) {
                auto it = ctx.gamma.find(call.sub[0]->name);
                if (it != ctx.gamma.end() && it->second->kind == TypeKind::Table) {
                    if (!call.args.empty() || !call.typeArgs.empty())
                        fail("TS-TblCall", s->pos, "tables take no arguments");
                    return ctx;
                }
            }
            expr(ctx.sigma, ctx.gamma, ctx.delta, s->e1);
            return ctx;
        }
        case StmtKind::Assign: {
            const Expr &lhs = *s->e1;
            if (lhs.kind == ExprKind::Member) {
                auto base = expr(ctx.sigma, ctx.gamma, ctx.delta, lhs.sub[0]);
                if (base.type->kind == TypeKind::Union) {
                    if (!opts_.allowUnions) fail("T-Union", s->pos, "unions are not enabled");
                    if (base.dir != Direction::InOut) fail("T-Union", s->pos, "union operand goes in");
                    const FieldType *f = find_field(*base.type, lhs.name);
                    if (!f) fail("T-Union", s->pos, "no alternative '" + lhs.name + "' in union " + base.type->name);
                    auto rhs = expr(ctx.sigma, ctx.gamma, ctx.delta, s->e2);
                    if (!type_equal(rhs.type, f->type))
                        fail("T-Union", s->e2->pos, "alternative '" + lhs.name + "' has type " + show(f->type) +
                                                        ", got " + show(rhs.type));
                    record_union(s.get(), base.type);
                    return ctx;
                }
            }
            auto l = expr(ctx.sigma, ctx.gamma, ctx.delta, s->e1);
            if (l.dir != Direction::InOut) fail("TS-Assign", s->pos, "left operand goes in");
            auto r = expr(ctx.sigma, ctx.gamma, ctx.delta, s->e2);
            if (!type_equal(l.type, r.type))
                fail("TS-Assign", s->pos, "cannot assign " + show(r.type) + " to " + show(l.type));
            return ctx;
        }
        case StmtKind::If: {
            auto c = expr(ctx.sigma, ctx.gamma, ctx.delta, s->e1);
            if (c.type->kind != TypeKind::Bool) fail("TS-If", s->e1->pos, "condition has type " + show(c.type));
            stmt(ctx, s->s1);
            stmt(ctx, s->s2);
            return ctx;
        }
        case StmtKind::Block: {
            Contexts inner = ctx;
            for (const auto &c : s->stmts) inner = stmt(inner, c);
            return ctx;
        }
        case StmtKind::Exit: return ctx;
        case StmtKind::Return: {
            auto it = ctx.gamma.find(kReturnName);
            if (it == ctx.gamma.end()) fail("TS-Ret", s->pos, "return outside a function or control");
            auto v = expr(ctx.sigma, ctx.gamma, ctx.delta, s->e1);
            if (!type_equal(v.type, it->second))
                fail("TS-Ret", s->pos, "returning " + show(v.type) + " from a function returning " + show(it->second));
            return ctx;
        }
        case StmtKind::Decl: {
            if (!is_var_decl(*s->decl)) fail("TS-Decl", s->pos, "only variable declarations may appear in statements");
            Contexts out = var_decl(ctx, s->decl);
            auto it = out.gamma.find(s->decl->name);
            if (s->decl->kind != DeclKind::Inst && it != out.gamma.end() && it->second->kind == TypeKind::Union)
                record_union(s.get(), it->second);
            return out;
        }
        case StmtKind::Switch: {
            if (!opts_.allowUnions) fail("T-Switch", s->pos, "unions are not enabled");
            auto sc = expr(ctx.sigma, ctx.gamma, ctx.delta, s->e1);
            if (sc.type->kind != TypeKind::Union) fail("T-Switch", s->e1->pos, "switch on non-union type " + show(sc.type));
            std::vector<std::string> labels;
            int defaults = 0;
            for (const auto &c : s->cases) {
                if (c.body->kind != StmtKind::Block) fail("T-Switch", s->pos, "case bodies must be blocks");
                if (!c.label) {
                    if (++defaults > 1) fail("T-Switch", s->pos, "more than one default case");
                    stmt(ctx, c.body);
                    continue;
                }
                const FieldType *f = find_field(*sc.type, *c.label);
                if (!f) fail("TU-Case-Field", c.body->pos, "no alternative '" + *c.label + "' in union " + sc.type->name);
                labels.push_back(*c.label);
                Contexts inner = ctx;
                inner.gamma[*c.label] = f->type;
                inner.sigma.erase(*c.label);
                stmt(inner, c.body);
            }
            check_distinct(labels, "T-Switch", s->pos, "case label");
            record_union(s.get(), sc.type);
            return ctx;
        }
    }
    return ctx;
}

Contexts Checker::var_decl(const Contexts &ctx, const DeclPtr &d) {
    Contexts out = ctx;
    switch (d->kind) {
        case DeclKind::Const: {
            auto t = base_type(ctx, d->type, "Type-Const", d->pos);
            auto e = expr(ctx.sigma, ctx.gamma, ctx.delta, d->init);
            if (!type_equal(t, e.type))
                fail("Type-Const", d->pos, "initializer has type " + show(e.type) + ", expected " + show(t));
            out.sigma[d->name] = cteval(ctx.sigma, d->init);
            out.gamma[d->name] = t;
            return out;
        }
        case DeclKind::VarInit: {
            auto t = base_type(ctx, d->type, "Type-VarInit", d->pos);
            auto e = expr(ctx.sigma, ctx.gamma, ctx.delta, d->init);
            if (!type_equal(t, e.type))
                fail("Type-VarInit", d->pos, "initializer has type " + show(e.type) + ", expected " + show(t));
            out.sigma.erase(d->name);
            out.gamma[d->name] = t;
            return out;
        }
        case DeclKind::VarUninit: {
            auto t = base_type(ctx, d->type, "Type-Var", d->pos);
            if (!is_inhabitable(ctx.delta, t)) fail("Type-Var", d->pos, "type " + show(t) + " has no default value");
            out.sigma.erase(d->name);
            out.gamma[d->name] = t;
            return out;
        }
        case DeclKind::Inst: {
            auto it = ctx.gamma.find(d->typeName);
            if (it == ctx.gamma.end() || it->second->kind != TypeKind::Constructor)
                fail("Type-Inst", d->pos, "'" + d->typeName + "' is not a control");
            const Type &ct = *it->second;
            if (d->args.size() != ct.params.size())
                fail("Type-Inst", d->pos, "expected " + std::to_string(ct.params.size()) + " constructor arguments");
            args_against(ctx.sigma, ctx.gamma, ctx.delta, ct.params, d->args, ct.params.size(), "Type-Inst", d->pos,
                         nullptr);
            out.sigma.erase(d->name);
            out.gamma[d->name] = ct.ret;
            return out;
        }
        default: fail("Type-Decl", d->pos, "not a variable declaration");
    }
}

Contexts Checker::type_decl(const Contexts &ctx, const DeclPtr &d) {
    Contexts out = ctx;
    switch (d->kind) {
        case DeclKind::Typedef: {
            auto t = base_type(ctx, d->type, "T-TypeDefDecl", d->pos);
            out.delta = ctx.delta.with_def(d->name, t);
            return out;
        }
        case DeclKind::Enum: {
            std::set<std::string> seen;
            for (const auto &m : d->members)
                if (!seen.insert(m).second)
                    throw DuplicateEnumMember("T-EnumDecl", d->pos, "duplicate member '" + m + "'");
            out.delta = ctx.delta.with_def(d->name, ty::enumeration(d->name, d->members));
            return out;
        }
        case DeclKind::Error:
        case DeclKind::MatchKind: {
            const char *which = d->kind == DeclKind::Error ? kErrorName : kMatchKindName;
            std::set<std::string> seen;
            for (const auto &m : d->members)
                if (!seen.insert(m).second)
                    throw DuplicateEnumMember(d->kind == DeclKind::Error ? "T-ErrDecl" : "T-MatchKindDecl", d->pos,
                                              "duplicate member '" + m + "'");
            auto members = ctx.delta.open_enum_members(which);
            for (const auto &m : d->members)
                if (std::find(members.begin(), members.end(), m) == members.end()) members.push_back(m);
            out.delta = ctx.delta.with_def(which, ty::enumeration(which, members));
            return out;
        }
        case DeclKind::Union: {
            if (!opts_.allowUnions) fail("T-UnionDecl", d->pos, "unions are not enabled");
            if (d->fields.empty()) fail("T-UnionDecl", d->pos, "a union needs at least one alternative");
            auto t = simplify_type(ctx.sigma, ctx.delta, ty::union_(d->name, d->fields));
            out.delta = ctx.delta.with_def(d->name, t);
            return out;
        }
        default: fail("T-TypeDecl", d->pos, "not a type declaration");
    }
}

void Checker::action_ok(const Contexts &ctx, const ActionRef &a) {
    auto it = ctx.gamma.find(a.name);
    if (it == ctx.gamma.end()) fail("T-TableDecl", a.pos, "unknown action '" + a.name + "'");
    const Type &ft = *it->second;
    if (ft.kind != TypeKind::Function || !ft.typeParams.empty())
        fail("T-TableDecl", a.pos, "action '" + a.name + "' is not a non-generic function");
    if (a.args.size() + a.ctrlParams.size() != ft.params.size())
        fail("Type-Partial-App", a.pos, "action '" + a.name + "' expects " + std::to_string(ft.params.size()) +
                                            " parameters in total");
    args_against(ctx.sigma, ctx.gamma, ctx.delta, ft.params, a.args, a.args.size(), "Type-Partial-App", a.pos, nullptr);
    for (size_t i = 0; i < a.ctrlParams.size(); ++i) {
        const Param &p = ft.params[a.args.size() + i];
        const CtrlParam &cp = a.ctrlParams[i];
        if (p.dir != Direction::In)
            fail("Type-Partial-App", a.pos, "control-plane parameter '" + p.name + "' must be directionless (in)");
        if (cp.name != p.name)
            fail("Type-Partial-App", a.pos, "control-plane parameter '" + cp.name + "' should be '" + p.name + "'");
        auto t = simplify_type(ctx.sigma, ctx.delta, cp.type);
        if (!type_equal(t, p.type))
            fail("Type-Partial-App", a.pos, "control-plane parameter '" + cp.name + "' has type " + show(p.type));
    }
}

TypePtr Checker::callable(const Contexts &ctx, const std::vector<std::string> &typeParams,
                          const std::vector<Param> &params, const TypePtr &ret, const std::vector<DeclPtr> &locals,
                          const StmtPtr &body, Pos pos, bool requireReturn) {
    check_distinct(typeParams, "T-FuncDecl", pos, "type parameter");
    Contexts inner = ctx;
    for (const auto &x : typeParams) inner.delta = inner.delta.with_var(x);
    auto retT = simplify_type(inner.sigma, inner.delta, ret);
    if (!is_base_type(*retT)) fail("T-FuncDecl", pos, "return type must be a base type");
    std::vector<Param> ps;
    std::vector<std::string> names;
    for (const auto &p : params) {
        auto t = simplify_type(inner.sigma, inner.delta, p.type);
        if (!is_base_type(*t)) fail("T-FuncDecl", pos, "parameter '" + p.name + "' must have a base type");
        if (p.dir == Direction::Out && !is_inhabitable(inner.delta, t))
            fail("T-FuncDecl", pos, "out parameter '" + p.name + "' has no default value");
        ps.push_back({p.dir, p.name, t});
        names.push_back(p.name);
    }
    check_distinct(names, "T-FuncDecl", pos, "parameter");
    for (const auto &p : ps) {
        inner.gamma[p.name] = p.type;
        inner.sigma.erase(p.name);
    }
    inner.gamma[kReturnName] = retT;
    for (const auto &l : locals) {
        if (l->kind == DeclKind::Control) fail("T-CtrlDecl", l->pos, "controls may not nest");
        inner = decl(inner, l);
    }
    stmt(inner, body);
    if (requireReturn && !is_unit(*retT) && !returns_analysis(body))
        throw MissingReturn("T-FuncDecl", pos, "some path does not return a value");
    return ty::function(typeParams, ps, retT);
}

Contexts Checker::object_decl(const Contexts &ctx, const DeclPtr &d) {
    Contexts out = ctx;
    switch (d->kind) {
        case DeclKind::Table: {
            auto kinds = ctx.delta.open_enum_members(kMatchKindName);
            for (const auto &k : d->keys) {
                auto t = expr(ctx.sigma, ctx.gamma, ctx.delta, k.expr);
                if (!is_equality_type(*t.type)) fail("T-TableDecl", k.expr->pos, "key of type " + show(t.type) + " cannot be matched");
                if (std::find(kinds.begin(), kinds.end(), k.matchKind) == kinds.end())
                    fail("T-TableDecl", k.expr->pos, "unknown match kind '" + k.matchKind + "'");
            }
            if (d->actions.empty()) fail("T-TableDecl", d->pos, "a table needs at least one action");
            std::vector<std::string> names;
            for (const auto &a : d->actions) {
                action_ok(ctx, a);
                names.push_back(a.name);
            }
            check_distinct(names, "T-TableDecl", d->pos, "action");
            const ActionRef *def = &d->actions.front();
            if (d->defaultAction) {
                def = nullptr;
                for (const auto &a : d->actions)
                    if (a.name == d->defaultAction->name) def = &a;
                if (!def) fail("T-TableDecl", d->defaultAction->pos, "default action is not in the action list");
                if (d->defaultAction->args.size() != def->ctrlParams.size())
                    fail("T-TableDecl", d->defaultAction->pos, "default action expects " +
                                                                   std::to_string(def->ctrlParams.size()) + " arguments");
                for (size_t i = 0; i < def->ctrlParams.size(); ++i) {
                    auto t = expr(ctx.sigma, ctx.gamma, ctx.delta, d->defaultAction->args[i]);
                    auto want = simplify_type(ctx.sigma, ctx.delta, def->ctrlParams[i].type);
                    if (!type_equal(t.type, want))
                        fail("T-TableDecl", d->defaultAction->args[i]->pos, "default action argument has type " +
                                                                                show(t.type) + ", expected " + show(want));
                }
            } else {
                for (const auto &cp : def->ctrlParams)
                    if (!is_inhabitable(ctx.delta, simplify_type(ctx.sigma, ctx.delta, cp.type)))
                        fail("T-TableDecl", d->pos, "default action parameter has no default value");
            }
            out.sigma.erase(d->name);
            out.gamma[d->name] = ty::table();
            return out;
        }
        case DeclKind::Control: {
            Contexts inner = ctx;
            std::vector<Param> cps;
            std::vector<std::string> names;
            for (const auto &p : d->ctorParams) {
                auto t = base_type(ctx, p.type, "T-CtrlDecl", d->pos);
                cps.push_back({Direction::In, p.name, t});
                names.push_back(p.name);
                inner.gamma[p.name] = t;
                inner.sigma.erase(p.name);
            }
            for (const auto &p : d->params) names.push_back(p.name);
            check_distinct(names, "T-CtrlDecl", d->pos, "parameter");
            auto apply = callable(inner, {}, d->params, ty::unit(), d->locals, d->body, d->pos, false);
            out.sigma.erase(d->name);
            out.gamma[d->name] = ty::constructor(cps, apply);
            return out;
        }
        case DeclKind::Func: {
            auto ft = callable(ctx, d->typeParams, d->params, d->type, {}, d->body, d->pos, true);
            out.sigma.erase(d->name);
            out.gamma[d->name] = ft;
            return out;
        }
        default: fail("T-ObjDecl", d->pos, "not an object declaration");
    }
}

Contexts Checker::decl(const Contexts &ctx, const DeclPtr &d) {
    if (is_var_decl(*d)) return var_decl(ctx, d);
    if (is_type_decl(*d)) return type_decl(ctx, d);
    return object_decl(ctx, d);
}

}  // namespace

TypedExpr check_expression(const Sigma &sigma, const Gamma &gamma, const Delta &delta, const ExprPtr &e,
                           const CheckOptions &opts) {
    return Checker(opts).expr(sigma, gamma, delta, e);
}

Contexts check_statement(const Contexts &ctx, const StmtPtr &s, const CheckOptions &opts) {
    return Checker(opts).stmt(ctx, s);
}

Contexts check_declaration(const Contexts &ctx, const DeclPtr &d, const CheckOptions &opts) {
    return Checker(opts).decl(ctx, d);
}

Contexts check_var_declaration(const Contexts &ctx, const DeclPtr &d, const CheckOptions &opts) {
    return Checker(opts).var_decl(ctx, d);
}

Contexts check_type_declaration(const Contexts &ctx, const DeclPtr &d, const CheckOptions &opts) {
    return Checker(opts).type_decl(ctx, d);
}

Contexts check_object_declaration(const Contexts &ctx, const DeclPtr &d, const CheckOptions &opts) {
    return Checker(opts).object_decl(ctx, d);
}

void check_action_ok(const Contexts &ctx, const ActionRef &a, const CheckOptions &opts) {
    Checker(opts).action_ok(ctx, a);
}

bool returns_analysis(const StmtPtr &body) {
    switch (body->kind) {
        case StmtKind::Return:
        case StmtKind::Exit: return true;
        case StmtKind::Block:
            return std::any_of(body->stmts.begin(), body->stmts.end(), [](const StmtPtr &s) { return returns_analysis(s); });
        case StmtKind::If: return returns_analysis(body->s1) && returns_analysis(body->s2);
        case StmtKind::Switch: {
            bool hasDefault = false;
            for (const auto &c : body->cases) {
                if (!returns_analysis(c.body)) return false;
                hasDefault = hasDefault || !c.label;
            }
            return hasDefault;
        }
        default: return false;
    }
}

Contexts check_program(const Program &p, const Contexts &initial, const CheckOptions &opts) {
    Checker ck(opts);
    Contexts ctx = initial;
    std::set<std::string> defined;
    for (const auto &[n, t] : initial.gamma) defined.insert(n);
    for (const auto &n : initial.delta.names()) defined.insert(n);
    for (const auto &d : p.decls) {
        if (d->kind != DeclKind::Error && d->kind != DeclKind::MatchKind) {
            if (!defined.insert(d->name).second) fail("Program", d->pos, "redefinition of '" + d->name + "'");
        }
        ctx = ck.decl(ctx, d);
    }
    return ctx;
}

Contexts check_program(const Program &p) { return check_program(p, initial_contexts()); }

// ---------------------------------------------------------------------------
// Value, store and environment typing

namespace {

class ValueTyper {
 public:
    ValueTyper(const Xi &xi, const Machine *m) : xi_(xi), m_(m) {}

    bool check(const Sigma &sigma, const Delta &delta, const ValuePtr &v, const TypePtr &t) const;

 private:
    const Xi &xi_;
    const Machine *m_;

    // Contexts of a closure environment: Gamma through Xi, constants from the
    // store, Delta from the definition site.
    bool env_contexts(const Value &v, Contexts &out) const {
        if (!m_ || !v.env) return false;
        out.delta = v.defDelta ? *v.defDelta : initial_contexts().delta;
        for (const auto &[name, entry] : *v.env) {
            if (entry.loc >= xi_.size() || entry.loc >= m_->store.size() || !xi_[entry.loc]) return false;
            out.gamma[name] = xi_[entry.loc];
            if (entry.constant) out.sigma[name] = m_->store[entry.loc];
        }
        return true;
    }
};

bool ValueTyper::check(const Sigma &sigma, const Delta &delta, const ValuePtr &v, const TypePtr &t) const {
    if (!v || !t) return false;
    switch (t->kind) {
        case TypeKind::Bool: return v->kind == ValueKind::Bool;
        case TypeKind::Int: return v->kind == ValueKind::Int && !v->width;
        case TypeKind::Bit:
            return v->kind == ValueKind::Int && v->width && t->width && *v->width == *t->width && v->n >= 0 &&
                   v->n < (BigInt(1) << *t->width);
        case TypeKind::Enum:
            return v->kind == ValueKind::TypeMember && v->typeName == t->name &&
                   std::find(t->members.begin(), t->members.end(), v->member) != t->members.end();
        case TypeKind::Error:
        case TypeKind::MatchKind: {
            const char *which = open_enum_name(t->kind);
            if (v->kind != ValueKind::TypeMember || v->typeName != which) return false;
            auto ms = delta.open_enum_members(which);
            return std::find(ms.begin(), ms.end(), v->member) != ms.end();
        }
        case TypeKind::Record:
            if (v->kind != ValueKind::Record || v->fields.size() != t->fields.size()) return false;
            for (size_t i = 0; i < t->fields.size(); ++i)
                if (v->fields[i].name != t->fields[i].name || !check(sigma, delta, v->fields[i].value, t->fields[i].type))
                    return false;
            return true;
        case TypeKind::Header:
            if (v->kind != ValueKind::Header || v->hfields.size() != t->fields.size()) return false;
            for (size_t i = 0; i < t->fields.size(); ++i) {
                const auto &hf = v->hfields[i];
                if (hf.name != t->fields[i].name || !hf.type || !type_equal(hf.type, t->fields[i].type) ||
                    !check(sigma, delta, hf.value, t->fields[i].type))
                    return false;
            }
            return true;
        case TypeKind::Stack:
            if (v->kind != ValueKind::Stack || !v->elemType || !type_equal(v->elemType, t->elem) ||
                v->elems.size() != t->size)
                return false;
            for (const auto &e : v->elems)
                if (!check(sigma, delta, e, t->elem)) return false;
            return true;
        case TypeKind::Union: {
            if (v->kind != ValueKind::Union || v->typeName != t->name) return false;
            const FieldType *f = find_field(*t, v->member);
            return f && check(sigma, delta, v->payload, f->type);
        }
        case TypeKind::Var: return false;
        case TypeKind::Table: {
            if (v->kind != ValueKind::Table) return false;
            Contexts c;
            if (!env_contexts(*v, c)) return false;
            auto d = std::make_shared<Decl>();
            d->kind = DeclKind::Table;
            d->name = v->name;
            d->keys = v->keys;
            d->actions = v->actions;
            d->defaultAction = v->defaultAction;
            try {
                check_object_declaration(c, d);
            } catch (const Error &) {
                return false;
            }
            return true;
        }
        case TypeKind::Function: {
            if (v->kind == ValueKind::Native)
                return type_equal(ty::function(v->typeParams, v->params, v->ret), t);
            if (v->kind != ValueKind::Closure) return false;
            Contexts c;
            if (!env_contexts(*v, c)) return false;
            try {
                CheckOptions opts;
                TypePtr ft = Checker(opts).callable(c, v->typeParams, v->params, v->ret, v->locals, v->body, {},
                                                    v->locals.empty() && v->ctorName.empty());
                return type_equal(ft, t);
            } catch (const Error &) {
                return false;
            }
        }
        case TypeKind::Constructor: {
            if (v->kind != ValueKind::CtorClosure) return false;
            Contexts c;
            if (!env_contexts(*v, c)) return false;
            try {
                CheckOptions opts;
                std::vector<Param> cps;
                for (const auto &p : v->ctorParams) {
                    auto pt = simplify_type(c.sigma, c.delta, p.type);
                    cps.push_back({Direction::In, p.name, pt});
                    c.gamma[p.name] = pt;
                    c.sigma.erase(p.name);
                }
                TypePtr ft = Checker(opts).callable(c, {}, v->params, ty::unit(), v->locals, v->body, {}, false);
                return type_equal(ty::constructor(cps, ft), t);
            } catch (const Error &) {
                return false;
            }
        }
    }
    return false;
}

}  // namespace

bool check_value(const Machine &m, const Sigma &sigma, const Delta &delta, const ValuePtr &v, const TypePtr &t) {
    return ValueTyper(m.xi, &m).check(sigma, delta, v, t);
}

bool check_value(const Xi &xi, const Sigma &sigma, const Delta &delta, const ValuePtr &v, const TypePtr &t) {
    return ValueTyper(xi, nullptr).check(sigma, delta, v, t);
}

std::string explain_machine(const Sigma &sigma, const Gamma &gamma, const Delta &delta, const Machine &m,
                            const Env &env) {
    if (m.xi.size() != m.store.size()) return "store and store typing have different domains";
    for (Loc l = 0; l < m.store.size(); ++l) {
        if (!m.xi[l]) return "location " + std::to_string(l) + " has no type";
        if (!check_value(m, sigma, delta, m.store[l], m.xi[l]))
            return "location " + std::to_string(l) + " does not hold a value of type " + show(m.xi[l]);
    }
    for (const auto &[name, t] : gamma) {
        if (name == kReturnName) continue;
        auto it = env.find(name);
        if (it == env.end()) return "'" + name + "' is typed but not bound";
        Loc l = it->second.loc;
        if (l >= m.store.size()) return "'" + name + "' is bound to a dangling location";
        if (!type_equal(m.xi[l], t))
            return "'" + name + "' has type " + show(t) + " but its location has type " + show(m.xi[l]);
        auto c = sigma.find(name);
        if (c != sigma.end() && !value_equal(m.store[l], c->second)) return "constant '" + name + "' changed";
    }
    return {};
}

bool check_machine(const Sigma &sigma, const Gamma &gamma, const Delta &delta, const Machine &m, const Env &env) {
    return explain_machine(sigma, gamma, delta, m, env).empty();
}

}  // namespace pcore

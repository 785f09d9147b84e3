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

#include "pcore/eval.hpp"

#include <algorithm>

#include "pcore/errors.hpp"
#include "pcore/frontend.hpp"
#include "pcore/ops.hpp"
#include "pcore/typecheck.hpp"

namespace pcore {

namespace {

[[noreturn]] void fail(const std::string &rule, Pos pos, const std::string &msg) { throw EvalError(rule, pos, msg); }

std::string summary(std::string text) {
    std::replace(text.begin(), text.end(), '\n', ' ');
    std::string out;
    bool space = false;
    for (char c : text) {
        if (c == ' ') {
            if (!space) out.push_back(c);
            space = true;
        } else {
            out.push_back(c);
            space = false;
        }
    }
    if (out.size() > 72) out = out.substr(0, 69) + "...";
    return out;
}

bool has_width_expr(const TypePtr &t) {
    if (!t) return false;
    if (t->widthExpr) return true;
    for (const auto &f : t->fields)
        if (has_width_expr(f.type)) return true;
    for (const auto &p : t->params)
        if (has_width_expr(p.type)) return true;
    return has_width_expr(t->elem) || has_width_expr(t->ret);
}

std::shared_ptr<Value> copy(const ValuePtr &v) { return std::make_shared<Value>(*v); }

const EnvEntry &lookup(const Env &env, const std::string &name, Pos pos) {
    auto it = env.find(name);
    if (it == env.end()) fail("E-Var", pos, "unbound name '" + name + "'");
    return it->second;
}

/// Leaves the control instance on every path out of an instance call.
class InstanceScope {
 public:
    InstanceScope(Target &t, Machine &m, const Value &fn) : t_(t), m_(m), active_(!fn.ctorName.empty()) {
        if (active_) t_.enter_instance(m_, fn.ctorName, fn.instName);
    }
    ~InstanceScope() {
        if (active_) t_.leave_instance(m_);
    }
    InstanceScope(const InstanceScope &) = delete;
    InstanceScope &operator=(const InstanceScope &) = delete;

 private:
    Target &t_;
    Machine &m_;
    bool active_;
};

}  // namespace

Evaluator::Evaluator(Target &target, EvalHooks hooks, uint64_t maxSteps)
    : target_(target), hooks_(std::move(hooks)), maxSteps_(maxSteps) {}

void Evaluator::step() {
    ++steps_;
    if (maxSteps_ && steps_ > maxSteps_)
        throw BudgetExhausted("budget", {}, "evaluation exceeded " + std::to_string(maxSteps_) + " steps");
}

TypePtr Evaluator::eval_type(const Delta &delta, const Machine &m, const Env &env, const TypePtr &t) const {
    Sigma sigma;
    if (has_width_expr(t))
        for (const auto &[name, entry] : env)
            if (entry.constant && entry.loc < m.store.size()) sigma[name] = m.store[entry.loc];
    try {
        return simplify_type(sigma, delta, t);
    } catch (const TypeError &e) {
        throw EvalError("TyE", e.pos(), e.message());
    }
}

// ---------------------------------------------------------------------------
// Expressions

ExprOutcome Evaluator::eval_expression(Machine &m, const Delta &delta, const Env &env, const ExprPtr &e) {
    try {
        return {expr(m, delta, env, e), false};
    } catch (const ExitUnwind &) {
        return {nullptr, true};
    }
}

ValuePtr Evaluator::expr(Machine &m, const Delta &delta, const Env &env, const ExprPtr &e) {
    step();
    switch (e->kind) {
        case ExprKind::Bool:
            if (tracing()) hooks_.trace("E-Bool " + pretty_print(e));
            return val::boolean(e->boolVal);
        case ExprKind::Int:
            if (tracing()) hooks_.trace("E-Int " + pretty_print(e));
            return val::integer(e->intVal, e->width);
        case ExprKind::Var: {
            if (tracing()) hooks_.trace("E-Var " + e->name);
            return m.at(lookup(env, e->name, e->pos).loc);
        }
        case ExprKind::Index: {
            auto a = expr(m, delta, env, e->sub[0]);
            auto i = expr(m, delta, env, e->sub[1]);
            if (a->kind != ValueKind::Stack || i->kind != ValueKind::Int) fail("E-Index", e->pos, "ill-typed index");
            if (i->n >= 0 && i->n < a->elems.size()) {
                if (tracing()) hooks_.trace("E-Index " + summary(pretty_print(e)));
                return a->elems[static_cast<size_t>(i->n)];
            }
            if (tracing()) hooks_.trace("E-IndexOOB " + summary(pretty_print(e)));
            return target_.havoc(m, delta, a->elemType);
        }
        case ExprKind::Slice: {
            auto a = expr(m, delta, env, e->sub[0]);
            auto h = expr(m, delta, env, e->sub[1]);
            auto l = expr(m, delta, env, e->sub[2]);
            if (tracing()) hooks_.trace("E-Slice " + summary(pretty_print(e)));
            if (h->kind != ValueKind::Int || l->kind != ValueKind::Int || l->n < 0 || h->n < l->n)
                fail("E-Slice", e->pos, "bad slice bounds");
            return slice_bits(a, static_cast<uint64_t>(h->n), static_cast<uint64_t>(l->n));
        }
        case ExprKind::UnOp: {
            auto a = expr(m, delta, env, e->sub[0]);
            if (tracing()) hooks_.trace(std::string("E-UOp ") + unop_name(e->uop));
            return eval_unop(e->uop, a);
        }
        case ExprKind::BinOp: {
            auto a = expr(m, delta, env, e->sub[0]);
            auto b = expr(m, delta, env, e->sub[1]);
            if (tracing()) hooks_.trace(std::string("E-BinOp ") + binop_name(e->bop));
            try {
                return eval_binop(e->bop, a, b);
            } catch (const ArithmeticError &err) {
                throw ArithmeticError(err.rule(), e->pos, err.message());
            }
        }
        case ExprKind::Cast: {
            auto a = expr(m, delta, env, e->sub[0]);
            auto t = eval_type(delta, m, env, e->type);
            if (tracing()) hooks_.trace("E-Cast " + pretty_print(t));
            return eval_cast(delta, a, t);
        }
        case ExprKind::Record: {
            std::vector<NamedValue> fs;
            for (const auto &f : e->fields) fs.push_back({f.name, expr(m, delta, env, f.expr)});
            if (tracing()) hooks_.trace("E-Rec " + std::to_string(fs.size()) + " fields");
            return val::record(std::move(fs));
        }
        case ExprKind::Member: {
            auto a = expr(m, delta, env, e->sub[0]);
            if (a->kind == ValueKind::Record) {
                for (const auto &f : a->fields)
                    if (f.name == e->name) {
                        if (tracing()) hooks_.trace("E-RecMem ." + e->name);
                        return f.value;
                    }
            } else if (a->kind == ValueKind::Header) {
                for (const auto &f : a->hfields)
                    if (f.name == e->name) {
                        if (a->b) {
                            if (tracing()) hooks_.trace("E-HdrMem ." + e->name);
                            return f.value;
                        }
                        if (tracing()) hooks_.trace("E-HdrMemUndef ." + e->name);
                        return target_.havoc(m, delta, f.type);
                    }
            }
            fail("E-Mem", e->pos, "no field '" + e->name + "'");
        }
        case ExprKind::TypeMember: {
            if (tracing()) hooks_.trace("E-TypeMem " + e->typeName + "." + e->name);
            if (e->typeName == kErrorName || e->typeName == kMatchKindName) return val::type_member(e->typeName, e->name);
            auto t = eval_type(delta, m, env, ty::var(e->typeName));
            if (t->kind != TypeKind::Enum) fail("E-TypeMem", e->pos, "'" + e->typeName + "' is not an enum");
            return val::type_member(t->name, e->name);
        }
        case ExprKind::Call: {
            auto fn = expr(m, delta, env, e->sub[0]);
            std::vector<TypePtr> targs;
            for (const auto &t : e->typeArgs) targs.push_back(eval_type(delta, m, env, t));
            std::vector<CallArg> args;
            for (const auto &a : e->args) args.push_back({a, nullptr});
            return invoke(m, delta, env, fn, targs, args);
        }
        case ExprKind::Init: {
            auto t = eval_type(delta, m, env, e->type);
            if (tracing()) hooks_.trace("E-Init " + pretty_print(t));
            return init_value(delta, t);
        }
    }
    fail("E", e->pos, "unknown expression");
}

ExprOutcome Evaluator::call(Machine &m, const Delta &delta, const Env &callerEnv, const ValuePtr &fn,
                            const std::vector<TypePtr> &typeArgs, const std::vector<CallArg> &args) {
    try {
        return {invoke(m, delta, callerEnv, fn, typeArgs, args), false};
    } catch (const ExitUnwind &) {
        return {nullptr, true};
    }
}

ValuePtr Evaluator::invoke(Machine &m, const Delta &delta, const Env &callerEnv, const ValuePtr &fn,
                           const std::vector<TypePtr> &typeArgs, const std::vector<CallArg> &args) {
    if (fn->kind != ValueKind::Closure && fn->kind != ValueKind::Native)
        fail("E-Call", {}, "calling a value that is not a function");
    if (fn->params.size() != args.size() || fn->typeParams.size() != typeArgs.size())
        fail("E-Call", {}, "arity mismatch calling '" + fn->name + "'");
    Delta inner = delta;
    for (size_t i = 0; i < typeArgs.size(); ++i) inner = inner.with_def(fn->typeParams[i], typeArgs[i]);
    static const Env kNoEnv;
    const Env &closureEnv = fn->env ? *fn->env : kNoEnv;

    std::vector<TypePtr> ptypes;
    for (const auto &p : fn->params) ptypes.push_back(eval_type(inner, m, closureEnv, p.type));

    // Copy-in, left to right.
    std::vector<Loc> locs;
    std::vector<CopyOutTask> tasks;
    for (size_t i = 0; i < args.size(); ++i) {
        const Param &p = fn->params[i];
        ValuePtr v;
        if (p.dir == Direction::In) {
            v = args[i].value ? args[i].value : expr(m, delta, callerEnv, args[i].expr);
            if (tracing()) hooks_.trace("CopyIn " + p.name);
        } else {
            if (!args[i].expr) fail("E-Call", {}, "out argument without an l-value");
            LValue lv = lvalue(m, delta, callerEnv, args[i].expr);
            if (p.dir == Direction::Out) {
                v = init_value(inner, ptypes[i]);
                if (tracing()) hooks_.trace("CopyOut " + p.name);
            } else {
                v = read_lvalue(m, delta, lv);
                if (tracing()) hooks_.trace("CopyInOut " + p.name);
            }
            tasks.push_back({std::move(lv), m.next_loc()});
        }
        Loc l = m.fresh(v, ptypes[i]);
        if (std::find(locs.begin(), locs.end(), l) != locs.end())
            throw InternalError("copy-in", {}, "parameters share a location");
        locs.push_back(l);
    }

    if (fn->kind == ValueKind::Native) {
        if (tracing()) hooks_.trace("E-CallN " + fn->name);
        ValuePtr r = target_.call_native(m, fn->name, locs, ptypes, inner);
        copy_out(m, delta, tasks);
        return r;
    }

    Env env = closureEnv;
    for (size_t i = 0; i < fn->params.size(); ++i) env[fn->params[i].name] = {locs[i], false};

    InstanceScope scope(target_, m, *fn);
    Delta bodyDelta = inner;
    for (const auto &d : fn->locals) {
        DeclOutcome o = decl(m, bodyDelta, env, d);
        if (o.sig.kind == Signal::Kind::Exit) {
            if (tracing()) hooks_.trace("E-Call-DeclExit " + fn->name);
            copy_out(m, delta, tasks);
            throw ExitUnwind{};
        }
        bodyDelta = o.delta;
        env = std::move(o.env);
    }
    StmtOutcome o = stmt(m, bodyDelta, env, fn->body);
    if (o.sig.kind == Signal::Kind::Exit) {
        if (tracing()) hooks_.trace("E-Call-StmtExit " + fn->name);
        copy_out(m, delta, tasks);
        throw ExitUnwind{};
    }
    ValuePtr result = o.sig.kind == Signal::Kind::Return ? o.sig.value : val::unit();
    if (tracing()) hooks_.trace("E-Call " + (fn->instName.empty() ? fn->name : fn->instName));
    if (hooks_.onReturn) hooks_.onReturn(m, result, eval_type(inner, m, closureEnv, fn->ret), inner);
    copy_out(m, delta, tasks);
    return result;
}

void Evaluator::copy_out(Machine &m, const Delta &delta, const std::vector<CopyOutTask> &tasks) {
    if (hooks_.skipCopyOut) return;
    if (hooks_.copyOutReverse) {
        for (auto it = tasks.rbegin(); it != tasks.rend(); ++it) write_lvalue(m, delta, it->lval, m.at(it->loc));
        return;
    }
    for (const auto &t : tasks) write_lvalue(m, delta, t.lval, m.at(t.loc));
}

// ---------------------------------------------------------------------------
// L-values

std::optional<LValue> Evaluator::eval_lvalue(Machine &m, const Delta &delta, const Env &env, const ExprPtr &e) {
    try {
        return lvalue(m, delta, env, e);
    } catch (const ExitUnwind &) {
        return std::nullopt;
    }
}

LValue Evaluator::lvalue(Machine &m, const Delta &delta, const Env &env, const ExprPtr &e) {
    step();
    LValue lv;
    switch (e->kind) {
        case ExprKind::Var:
            if (tracing()) hooks_.trace("LE-Var " + e->name);
            lv.kind = LValue::Kind::Var;
            lv.loc = lookup(env, e->name, e->pos).loc;
            return lv;
        case ExprKind::Member:
            lv.base = std::make_shared<LValue>(lvalue(m, delta, env, e->sub[0]));
            if (tracing()) hooks_.trace("LE-Mem ." + e->name);
            lv.kind = LValue::Kind::Field;
            lv.field = e->name;
            return lv;
        case ExprKind::Index: {
            lv.base = std::make_shared<LValue>(lvalue(m, delta, env, e->sub[0]));
            auto i = expr(m, delta, env, e->sub[1]);
            if (i->kind != ValueKind::Int) fail("LE-Index", e->pos, "ill-typed index");
            if (tracing()) hooks_.trace("LE-Index " + i->n.str());
            lv.kind = LValue::Kind::Elem;
            lv.index = i->n;
            return lv;
        }
        case ExprKind::Slice: {
            lv.base = std::make_shared<LValue>(lvalue(m, delta, env, e->sub[0]));
            auto h = expr(m, delta, env, e->sub[1]);
            auto l = expr(m, delta, env, e->sub[2]);
            if (h->kind != ValueKind::Int || l->kind != ValueKind::Int || l->n < 0 || h->n < l->n)
                fail("LE-Slice", e->pos, "bad slice bounds");
            if (tracing()) hooks_.trace("LE-Slice [" + h->n.str() + ":" + l->n.str() + "]");
            lv.kind = LValue::Kind::BitRange;
            lv.hi = static_cast<uint64_t>(h->n);
            lv.lo = static_cast<uint64_t>(l->n);
            return lv;
        }
        default: fail("LE", e->pos, "expression is not an l-value: " + summary(pretty_print(e)));
    }
}

ValuePtr Evaluator::read_lvalue(Machine &m, const Delta &delta, const LValue &lv) {
    switch (lv.kind) {
        case LValue::Kind::Var: return m.at(lv.loc);
        case LValue::Kind::Field: {
            auto b = read_lvalue(m, delta, *lv.base);
            if (b->kind == ValueKind::Record) {
                for (const auto &f : b->fields)
                    if (f.name == lv.field) return f.value;
            } else if (b->kind == ValueKind::Header) {
                for (const auto &f : b->hfields)
                    if (f.name == lv.field) return b->b ? f.value : target_.havoc(m, delta, f.type);
            }
            fail("LR-Mem", {}, "no field '" + lv.field + "'");
        }
        case LValue::Kind::Elem: {
            auto b = read_lvalue(m, delta, *lv.base);
            if (b->kind != ValueKind::Stack) fail("LR-Index", {}, "indexing a non-stack");
            if (lv.index >= 0 && lv.index < b->elems.size()) return b->elems[static_cast<size_t>(lv.index)];
            return target_.havoc(m, delta, b->elemType);
        }
        case LValue::Kind::BitRange: return slice_bits(read_lvalue(m, delta, *lv.base), lv.hi, lv.lo);
    }
    fail("LR", {}, "unknown l-value");
}

void Evaluator::write_lvalue(Machine &m, const Delta &delta, const LValue &lv, const ValuePtr &v) {
    switch (lv.kind) {
        case LValue::Kind::Var:
            if (tracing()) hooks_.trace("LW-Var @" + std::to_string(lv.loc));
            m.set(lv.loc, v);
            return;
        case LValue::Kind::Field: {
            auto b = read_lvalue(m, delta, *lv.base);
            auto c = copy(b);
            if (b->kind == ValueKind::Record) {
                for (auto &f : c->fields)
                    if (f.name == lv.field) f.value = v;
                if (tracing()) hooks_.trace("LW-Rec ." + lv.field);
            } else if (b->kind == ValueKind::Header) {
                if (!b->b) {
                    if (tracing()) hooks_.trace("LW-HdrInV ." + lv.field);
                    return;
                }
                for (auto &f : c->hfields)
                    if (f.name == lv.field) f.value = v;
                if (tracing()) hooks_.trace("LW-HdrV ." + lv.field);
            } else if (b->kind == ValueKind::Union) {
                c->member = lv.field;
                c->payload = v;
                if (tracing()) hooks_.trace("LW-Union ." + lv.field);
            } else {
                fail("LW-Mem", {}, "no field '" + lv.field + "'");
            }
            write_lvalue(m, delta, *lv.base, c);
            return;
        }
        case LValue::Kind::Elem: {
            auto b = read_lvalue(m, delta, *lv.base);
            if (b->kind != ValueKind::Stack) fail("LW-Idx", {}, "indexing a non-stack");
            if (lv.index < 0 || lv.index >= b->elems.size())
                throw IndexOutOfBounds("LW-Idx", {}, "write to index " + lv.index.str() + " of a stack of size " +
                                                         std::to_string(b->elems.size()));
            auto c = copy(b);
            c->elems[static_cast<size_t>(lv.index)] = v;
            if (tracing()) hooks_.trace("LW-Idx " + lv.index.str());
            write_lvalue(m, delta, *lv.base, c);
            return;
        }
        case LValue::Kind::BitRange: {
            auto b = read_lvalue(m, delta, *lv.base);
            if (tracing()) hooks_.trace("LW-Slice [" + std::to_string(lv.hi) + ":" + std::to_string(lv.lo) + "]");
            write_lvalue(m, delta, *lv.base, set_bits(b, lv.hi, lv.lo, v));
            return;
        }
    }
}

// ---------------------------------------------------------------------------
// Statements

StmtOutcome Evaluator::eval_statement(Machine &m, const Delta &delta, const Env &env, const StmtPtr &s) {
    return stmt(m, delta, env, s);
}

StmtOutcome Evaluator::stmt(Machine &m, const Delta &delta, const Env &env, const StmtPtr &s) {
    step();
    try {
        switch (s->kind) {
            case StmtKind::Call: {
                const Expr &c = *s->e1;
                if (c.kind == ExprKind::Call && c.sub[0]->kind == ExprKind::Var && c.args.empty() &&
                    c.typeArgs.empty()) {
                    auto it = env.find(c.sub[0]->name);
                    if (it != env.end() && m.at(it->second.loc)->kind == ValueKind::Table)
                        return {env, eval_table_apply(m, delta, m.at(it->second.loc))};
                }
                expr(m, delta, env, s->e1);
                if (tracing()) hooks_.trace("E-Call (statement)");
                return {env, Signal::cont()};
            }
            case StmtKind::Assign: {
                LValue lv = lvalue(m, delta, env, s->e1);
                auto v = expr(m, delta, env, s->e2);
                if (tracing()) hooks_.trace("E-Assign " + summary(pretty_print(s->e1)));
                write_lvalue(m, delta, lv, v);
                return {env, Signal::cont()};
            }
            case StmtKind::If: {
                auto c = expr(m, delta, env, s->e1);
                if (c->kind != ValueKind::Bool) fail("E-If", s->pos, "condition is not a boolean");
                if (tracing()) hooks_.trace(c->b ? "E-IfT" : "E-IfF");
                auto o = stmt(m, delta, env, c->b ? s->s1 : s->s2);
                return {env, o.sig};
            }
            case StmtKind::Block: {
                if (tracing()) hooks_.trace("E-Block " + std::to_string(s->stmts.size()) + " statements");
                Env inner = env;
                for (const auto &c : s->stmts) {
                    auto o = stmt(m, delta, inner, c);
                    if (!o.sig.is_continue()) return {env, o.sig};
                    inner = std::move(o.env);
                }
                return {env, Signal::cont()};
            }
            case StmtKind::Exit:
                if (tracing()) hooks_.trace("E-Exit");
                return {env, Signal::exit()};
            case StmtKind::Return: {
                auto v = expr(m, delta, env, s->e1);
                if (tracing()) hooks_.trace("E-Return");
                return {env, Signal::ret(v)};
            }
            case StmtKind::Decl: {
                auto o = decl(m, delta, env, s->decl);
                if (!o.sig.is_continue()) return {env, o.sig};
                return {std::move(o.env), Signal::cont()};
            }
            case StmtKind::Switch: {
                auto u = expr(m, delta, env, s->e1);
                if (u->kind != ValueKind::Union) fail("E-Switch", s->pos, "switch on a non-union value");
                const SwitchCase *hit = nullptr;
                const SwitchCase *dflt = nullptr;
                for (const auto &c : s->cases) {
                    if (!c.label) dflt = &c;
                    else if (*c.label == u->member && !hit) hit = &c;
                }
                if (hit) {
                    if (!u->elemType) fail("E-Switch", s->pos, "union value without its type");
                    const FieldType *f = find_field(*u->elemType, u->member);
                    if (!f) fail("E-Switch", s->pos, "no alternative '" + u->member + "'");
                    if (tracing()) hooks_.trace("E-Switch case " + u->member);
                    Env inner = env;
                    inner[u->member] = {m.fresh(u->payload, f->type), false};
                    auto o = stmt(m, delta, inner, hit->body);
                    return {env, o.sig};
                }
                if (dflt) {
                    if (tracing()) hooks_.trace("E-Switch default");
                    auto o = stmt(m, delta, env, dflt->body);
                    return {env, o.sig};
                }
                if (tracing()) hooks_.trace("E-Switch none");
                return {env, Signal::cont()};
            }
        }
    } catch (const ExitUnwind &) {
        return {env, Signal::exit()};
    }
    fail("E", s->pos, "unknown statement");
}

Signal Evaluator::eval_table_apply(Machine &m, const Delta &delta, const ValuePtr &table) {
    if (table->kind != ValueKind::Table || !table->env) fail("E-Call-Table", {}, "not a table");
    const Env &tenv = *table->env;
    try {
        TableQuery q;
        q.id = table->id;
        q.actions = &table->actions;
        for (const auto &k : table->keys) {
            q.keys.push_back(expr(m, delta, tenv, k.expr));
            q.keyNames.push_back(pretty_print(k.expr));
            q.matchKinds.push_back(k.matchKind);
        }
        for (const auto &a : table->actions) {
            std::vector<TypePtr> ts;
            for (const auto &cp : a.ctrlParams) ts.push_back(eval_type(delta, m, tenv, cp.type));
            q.ctrlTypes.push_back(std::move(ts));
        }
        // An empty fallback marks a miss; the default action is evaluated only then.
        ActionChoice choice = target_.match_action(m, q);
        if (choice.action.empty()) {
            if (table->defaultAction) {
                choice.action = table->defaultAction->name;
                for (const auto &a : table->defaultAction->args) choice.args.push_back(expr(m, delta, tenv, a));
            } else {
                choice.action = table->actions.front().name;
                for (const auto &t : q.ctrlTypes.front()) choice.args.push_back(init_value(delta, t));
            }
        }
        size_t ai = table->actions.size();
        for (size_t i = 0; i < table->actions.size(); ++i)
            if (table->actions[i].name == choice.action) ai = i;
        if (ai == table->actions.size())
            throw ControlPlaneError("E-Call-Table", {}, "action '" + choice.action + "' is not in table '" +
                                                            table->name + "'");
        const ActionRef &act = table->actions[ai];
        if (choice.args.size() != act.ctrlParams.size())
            throw ControlPlaneError("E-Call-Table", {}, "wrong number of control-plane arguments for '" + act.name + "'");
        for (size_t i = 0; i < choice.args.size(); ++i)
            if (!check_value(m, {}, delta, choice.args[i], q.ctrlTypes[ai][i]))
                throw ControlPlaneError("E-Call-Table", {}, "control-plane argument " + std::to_string(i) + " of '" +
                                                                act.name + "' has the wrong type");
        if (tracing()) hooks_.trace("E-Call-Table " + table->name + " -> " + act.name);
        std::vector<CallArg> args;
        for (const auto &a : act.args) args.push_back({a, nullptr});
        for (const auto &v : choice.args) args.push_back({nullptr, v});
        auto fn = m.at(lookup(tenv, act.name, act.pos).loc);
        invoke(m, delta, tenv, fn, {}, args);
        return Signal::cont();
    } catch (const ExitUnwind &) {
        return Signal::exit();
    }
}

// ---------------------------------------------------------------------------
// Declarations

DeclOutcome Evaluator::eval_declaration(Machine &m, const Delta &delta, const Env &env, const DeclPtr &d) {
    return decl(m, delta, env, d);
}

DeclOutcome Evaluator::decl(Machine &m, const Delta &delta, const Env &env, const DeclPtr &d) {
    step();
    DeclOutcome out{delta, env, Signal::cont()};
    auto self = [&]() { return std::make_shared<Delta>(delta); };
    try {
        switch (d->kind) {
            case DeclKind::Const:
            case DeclKind::VarInit: {
                auto v = expr(m, delta, env, d->init);
                auto t = eval_type(delta, m, env, d->type);
                if (tracing()) hooks_.trace(std::string(d->kind == DeclKind::Const ? "E-Const " : "E-VarInit ") + d->name);
                out.env[d->name] = {m.fresh(v, t), d->kind == DeclKind::Const};
                return out;
            }
            case DeclKind::VarUninit: {
                auto t = eval_type(delta, m, env, d->type);
                if (tracing()) hooks_.trace("E-VarDecl " + d->name);
                out.env[d->name] = {m.fresh(init_value(delta, t), t), false};
                return out;
            }
            case DeclKind::Inst: {
                auto cc = m.at(lookup(env, d->typeName, d->pos).loc);
                if (cc->kind != ValueKind::CtorClosure || !cc->env) fail("E-Inst", d->pos, "not a control");
                if (cc->ctorParams.size() != d->args.size()) fail("E-Inst", d->pos, "constructor arity mismatch");
                Env cenv = *cc->env;
                for (size_t i = 0; i < d->args.size(); ++i) {
                    auto v = expr(m, delta, env, d->args[i]);
                    auto t = eval_type(delta, m, *cc->env, cc->ctorParams[i].type);
                    cenv[cc->ctorParams[i].name] = {m.fresh(v, t), false};
                }
                auto c = std::make_shared<Value>();
                c->kind = ValueKind::Closure;
                c->name = cc->name;
                c->params = cc->params;
                c->ret = ty::unit();
                c->locals = cc->locals;
                c->body = cc->body;
                c->defDelta = cc->defDelta;
                c->ctorName = cc->name;
                c->instName = d->name;
                c->env = std::make_shared<const Env>(std::move(cenv));
                auto t = eval_type(delta, m, *c->env, ty::function({}, c->params, ty::unit()));
                if (tracing()) hooks_.trace("E-Inst " + d->name + " of " + d->typeName);
                out.env[d->name] = {m.fresh(c, t), false};
                return out;
            }
            case DeclKind::Typedef:
                if (tracing()) hooks_.trace("E-TypeDefDecl " + d->name);
                out.delta = delta.with_def(d->name, eval_type(delta, m, env, d->type));
                return out;
            case DeclKind::Enum:
                if (tracing()) hooks_.trace("E-EnumDecl " + d->name);
                out.delta = delta.with_def(d->name, ty::enumeration(d->name, d->members));
                return out;
            case DeclKind::Error:
            case DeclKind::MatchKind: {
                const char *which = d->kind == DeclKind::Error ? kErrorName : kMatchKindName;
                if (tracing()) hooks_.trace(d->kind == DeclKind::Error ? "E-ErrDecl" : "E-MatchKindDecl");
                auto members = delta.open_enum_members(which);
                for (const auto &mem : d->members)
                    if (std::find(members.begin(), members.end(), mem) == members.end()) members.push_back(mem);
                out.delta = delta.with_def(which, ty::enumeration(which, members));
                return out;
            }
            case DeclKind::Union:
                if (tracing()) hooks_.trace("E-UnionDecl " + d->name);
                out.delta = delta.with_def(d->name, eval_type(delta, m, env, ty::union_(d->name, d->fields)));
                return out;
            case DeclKind::Table: {
                Loc id = m.fresh(val::unit(), ty::unit());
                auto tv = std::make_shared<Value>();
                tv->kind = ValueKind::Table;
                tv->name = d->name;
                tv->id = id;
                tv->env = std::make_shared<const Env>(env);
                tv->keys = d->keys;
                tv->actions = d->actions;
                tv->defaultAction = d->defaultAction;
                tv->defDelta = self();
                if (tracing()) hooks_.trace("E-TableDecl " + d->name);
                out.env[d->name] = {m.fresh(tv, ty::table()), false};
                target_.on_table_decl(m, id, d->name);
                return out;
            }
            case DeclKind::Control: {
                auto cc = std::make_shared<Value>();
                cc->kind = ValueKind::CtorClosure;
                cc->name = d->name;
                cc->params = d->params;
                cc->ctorParams = d->ctorParams;
                cc->locals = d->locals;
                cc->body = d->body;
                cc->env = std::make_shared<const Env>(env);
                cc->defDelta = self();
                std::vector<Param> cps;
                for (const auto &p : d->ctorParams) cps.push_back({Direction::In, p.name, p.type});
                auto t = eval_type(delta, m, env, ty::constructor(cps, ty::function({}, d->params, ty::unit())));
                if (tracing()) hooks_.trace("E-CtrlDecl " + d->name);
                out.env[d->name] = {m.fresh(cc, t), false};
                return out;
            }
            case DeclKind::Func: {
                auto c = std::make_shared<Value>();
                c->kind = ValueKind::Closure;
                c->name = d->name;
                c->typeParams = d->typeParams;
                c->params = d->params;
                c->ret = d->type;
                c->body = d->body;
                c->env = std::make_shared<const Env>(env);
                c->defDelta = self();
                auto t = eval_type(delta, m, env, ty::function(d->typeParams, d->params, d->type));
                if (tracing()) hooks_.trace("E-FuncDecl " + d->name);
                out.env[d->name] = {m.fresh(c, t), false};
                return out;
            }
        }
    } catch (const ExitUnwind &) {
        return {delta, env, Signal::exit()};
    }
    fail("E", d->pos, "unknown declaration");
}

// ---------------------------------------------------------------------------

RunResult run_program(Evaluator &ev, Machine &m, const Delta &delta, const Env &env, const Program &p) {
    RunResult r{delta, env, Signal::cont(), nullptr};
    for (const auto &d : p.decls) {
        auto o = ev.eval_declaration(m, r.delta, r.env, d);
        if (o.sig.kind == Signal::Kind::Exit) {
            r.sig = o.sig;
            return r;
        }
        r.delta = o.delta;
        r.env = std::move(o.env);
    }
    auto it = r.env.find("main");
    if (it == r.env.end()) return r;
    auto fn = m.at(it->second.loc);
    if (fn->kind != ValueKind::Closure || !fn->params.empty() || !fn->typeParams.empty()) return r;
    auto o = ev.call(m, r.delta, r.env, fn, {}, {});
    if (o.exit) r.sig = Signal::exit();
    else r.mainResult = o.value;
    return r;
}

BudgetOutcome run_with_budget(Evaluator &ev, const std::function<void()> &thunk, uint64_t maxSteps) {
    uint64_t saved = ev.max_steps();
    ev.set_max_steps(maxSteps);
    ev.reset_steps();
    BudgetOutcome out;
    try {
        thunk();
    } catch (const BudgetExhausted &) {
        out.exhausted = true;
    } catch (...) {
        ev.set_max_steps(saved);
        throw;
    }
    out.steps = ev.steps();
    ev.set_max_steps(saved);
    return out;
}

}  // namespace pcore

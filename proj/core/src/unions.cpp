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

#include "pcore/unions.hpp"

#include "pcore/errors.hpp"
#include "pcore/eval.hpp"
#include "pcore/ops.hpp"
#include "pcore/target.hpp"

namespace pcore {

Contexts check_union_stmt(const Contexts &ctx, const StmtPtr &s, UnionSites *sites) {
    CheckOptions opts;
    opts.allowUnions = true;
    opts.unionSites = sites;
    return check_statement(ctx, s, opts);
}

uint64_t tag_width(size_t alternatives) {
    uint64_t n = 0;
    while ((uint64_t(1) << n) < alternatives) ++n;
    return n == 0 ? 1 : n;
}

TypePtr translate_type(const TypePtr &t) {
    if (!t) return t;
    switch (t->kind) {
        case TypeKind::Union: {
            std::vector<FieldType> fs{{"tag", ty::bit(tag_width(t->fields.size()))}};
            for (const auto &f : t->fields) fs.push_back({f.name, translate_type(f.type)});
            return ty::record(std::move(fs));
        }
        case TypeKind::Record:
        case TypeKind::Header: {
            auto c = std::make_shared<Type>(*t);
            for (auto &f : c->fields) f.type = translate_type(f.type);
            return c;
        }
        case TypeKind::Stack: {
            auto c = std::make_shared<Type>(*t);
            c->elem = translate_type(t->elem);
            return c;
        }
        case TypeKind::Function:
        case TypeKind::Constructor: {
            auto c = std::make_shared<Type>(*t);
            for (auto &p : c->params) p.type = translate_type(p.type);
            c->ret = translate_type(t->ret);
            return c;
        }
        default: return t;
    }
}

namespace {

ExprPtr tag_literal(uint64_t i, size_t alts) { return ex::integer(i, tag_width(alts)); }

size_t alt_index(const Type &u, const std::string &name) {
    for (size_t i = 0; i < u.fields.size(); ++i)
        if (u.fields[i].name == name) return i;
    throw InternalError("unions", {}, "no alternative '" + name + "'");
}

class Translator {
 public:
    Translator(const UnionSites &sites, const TranslateOptions &opts) : sites_(sites), opts_(opts) {}

    DeclPtr decl(const DeclPtr &d) {
        auto c = std::make_shared<Decl>(*d);
        if (d->kind == DeclKind::Union) {
            c->kind = DeclKind::Typedef;
            c->type = translate_type(ty::union_(d->name, d->fields));
            c->fields.clear();
            return c;
        }
        c->type = translate_type(d->type);
        if (d->init) c->init = expr(d->init);
        for (auto &a : c->args) a = expr(a);
        for (auto &k : c->keys) k.expr = expr(k.expr);
        for (auto &a : c->actions) action(a);
        if (c->defaultAction) action(*c->defaultAction);
        for (auto &p : c->params) p.type = translate_type(p.type);
        for (auto &p : c->ctorParams) p.type = translate_type(p.type);
        for (auto &l : c->locals) l = decl(l);
        if (d->body) c->body = block_of(stmt(d->body));
        return c;
    }

 private:
    const UnionSites &sites_;
    const TranslateOptions &opts_;
    int tmp_ = 0;

    void action(ActionRef &a) {
        for (auto &e : a.args) e = expr(e);
        for (auto &cp : a.ctrlParams) cp.type = translate_type(cp.type);
    }

    // Expressions are unchanged apart from the types they mention.
    ExprPtr expr(const ExprPtr &e) {
        auto c = std::make_shared<Expr>(*e);
        for (auto &s : c->sub) s = expr(s);
        for (auto &a : c->args) a = expr(a);
        for (auto &f : c->fields) f.expr = expr(f.expr);
        if (c->type) c->type = translate_type(c->type);
        for (auto &t : c->typeArgs) t = translate_type(t);
        return c;
    }

    StmtPtr block_of(std::vector<StmtPtr> ss) {
        if (ss.size() == 1) return ss.front();
        return st::block(std::move(ss));
    }

    const Type *site(const StmtPtr &s) {
        auto it = sites_.find(s.get());
        return it == sites_.end() ? nullptr : it->second.get();
    }

    std::vector<StmtPtr> stmt(const StmtPtr &s) {
        const Type *u = site(s);
        switch (s->kind) {
            case StmtKind::Call: return {st::call(expr(s->e1), s->pos)};
            case StmtKind::Assign: {
                if (!u) return {st::assign(expr(s->e1), expr(s->e2), s->pos)};
                // e.f := v  becomes  e := {tag = i, f = v, others = init}.
                size_t i = alt_index(*u, s->e1->name);
                size_t tag = opts_.wrongTag ? (i + 1) % u->fields.size() : i;
                std::vector<FieldExpr> fs{{"tag", tag_literal(tag, u->fields.size())}};
                for (size_t j = 0; j < u->fields.size(); ++j) {
                    const auto &f = u->fields[j];
                    fs.push_back({f.name, j == i ? expr(s->e2) : ex::init(translate_type(f.type))});
                }
                return {st::assign(expr(s->e1->sub[0]), ex::record(std::move(fs)), s->pos)};
            }
            case StmtKind::If:
                return {st::if_(expr(s->e1), block_of(stmt(s->s1)), block_of(stmt(s->s2)), s->pos)};
            case StmtKind::Block: {
                std::vector<StmtPtr> out;
                for (const auto &c : s->stmts)
                    for (auto &t : stmt(c)) out.push_back(std::move(t));
                return {st::block(std::move(out), s->pos)};
            }
            case StmtKind::Exit: return {s};
            case StmtKind::Return: return {st::return_(expr(s->e1), s->pos)};
            case StmtKind::Decl: {
                std::vector<StmtPtr> out{st::decl(decl(s->decl), s->pos)};
                if (!u || s->decl->kind != DeclKind::VarUninit) return out;
                // X x;  becomes  X x; x.tag := 0; x.f := init...
                auto var = ex::var(s->decl->name);
                out.push_back(st::assign(ex::member(var, "tag"), tag_literal(0, u->fields.size())));
                for (const auto &f : u->fields)
                    out.push_back(st::assign(ex::member(var, f.name), ex::init(translate_type(f.type))));
                return out;
            }
            case StmtKind::Switch: {
                if (!u) throw InternalError("unions", s->pos, "switch without a recorded union type");
                std::string tmp = "$tmp" + std::to_string(tmp_++);
                auto rec = translate_type(std::make_shared<Type>(*u));
                auto d = std::make_shared<Decl>();
                d->kind = DeclKind::VarInit;
                d->pos = s->pos;
                d->name = tmp;
                d->type = rec;
                d->init = expr(s->e1);
                // Field cases in order; the default, if any, is the last else.
                std::vector<std::pair<ExprPtr, StmtPtr>> arms;
                const SwitchCase *dflt = nullptr;
                for (const auto &c : s->cases) {
                    if (!c.label) {
                        dflt = &c;
                        continue;
                    }
                    size_t i = alt_index(*u, *c.label);
                    auto cond = ex::binop(BinOp::Eq, ex::member(ex::var(tmp), "tag"), tag_literal(i, u->fields.size()));
                    auto bind = std::make_shared<Decl>();
                    bind->kind = DeclKind::VarInit;
                    bind->name = *c.label;
                    bind->type = translate_type(u->fields[i].type);
                    bind->init = ex::member(ex::var(tmp), *c.label);
                    std::vector<StmtPtr> body{st::decl(bind)};
                    for (const auto &b : c.body->stmts)
                        for (auto &t : stmt(b)) body.push_back(std::move(t));
                    arms.emplace_back(cond, st::block(std::move(body), c.body->pos));
                }
                StmtPtr chain = dflt ? block_of(stmt(dflt->body)) : st::block({});
                for (auto it = arms.rbegin(); it != arms.rend(); ++it) chain = st::if_(it->first, it->second, chain);
                return {st::block({st::decl(d, s->pos), chain}, s->pos)};
            }
        }
        return {s};
    }
};

}  // namespace

Program translate_program(const Program &p, const Contexts &initial, const TranslateOptions &opts) {
    UnionSites sites;
    CheckOptions copts;
    copts.allowUnions = true;
    copts.unionSites = &sites;
    check_program(p, initial, copts);
    Translator tr(sites, opts);
    Program out;
    for (const auto &d : p.decls) out.decls.push_back(tr.decl(d));
    return out;
}

ValuePtr translate_value(const Delta &delta, const ValuePtr &v) {
    switch (v->kind) {
        case ValueKind::Record: {
            std::vector<NamedValue> fs;
            for (const auto &f : v->fields) fs.push_back({f.name, translate_value(delta, f.value)});
            return val::record(std::move(fs));
        }
        case ValueKind::Header: {
            std::vector<HeaderField> fs;
            for (const auto &f : v->hfields) fs.push_back({f.name, translate_type(f.type), translate_value(delta, f.value)});
            return val::header(v->b, std::move(fs));
        }
        case ValueKind::Stack: {
            std::vector<ValuePtr> es;
            for (const auto &e : v->elems) es.push_back(translate_value(delta, e));
            return val::stack(translate_type(v->elemType), std::move(es));
        }
        case ValueKind::Union: {
            if (!v->elemType) throw InternalError("unions", {}, "union value without its type");
            const Type &u = *v->elemType;
            size_t i = alt_index(u, v->member);
            std::vector<NamedValue> fs{{"tag", val::integer(i, tag_width(u.fields.size()))}};
            for (size_t j = 0; j < u.fields.size(); ++j) {
                const auto &f = u.fields[j];
                fs.push_back({f.name, j == i ? translate_value(delta, v->payload)
                                             : translate_value(delta, init_value(delta, f.type))});
            }
            return val::record(std::move(fs));
        }
        default: return v;
    }
}

Machine translate_store(const Delta &delta, const Machine &m) {
    Machine out;
    out.target = m.target;
    for (Loc l = 0; l < m.store.size(); ++l) {
        out.store.push_back(translate_value(delta, m.store[l]));
        out.xi.push_back(l < m.xi.size() ? translate_type(m.xi[l]) : nullptr);
    }
    return out;
}

bool env_store_le(const Machine &m1, const Env &e1, const Machine &m2, const Env &e2) {
    for (const auto &[name, entry] : e1) {
        auto it = e2.find(name);
        if (it == e2.end()) return false;
        if (entry.loc >= m1.store.size() || it->second.loc >= m2.store.size()) return false;
        const ValuePtr &a = m1.store[entry.loc];
        const ValuePtr &b = m2.store[it->second.loc];
        switch (a->kind) {
            case ValueKind::Closure:
            case ValueKind::Native:
            case ValueKind::Table:
            case ValueKind::CtorClosure:
                if (a->kind != b->kind || a->name != b->name || a->instName != b->instName) return false;
                break;
            default:
                if (!value_equal(a, b)) return false;
        }
    }
    return true;
}

namespace {

struct Side {
    Machine m;
    RunResult r;
    std::string error;
    uint64_t steps = 0;
};

Side run_side(const Program &p, const DiffOptions &opts) {
    Bootstrap boot = three_stage_lite_bootstrap();
    auto [m, env] = boot.make_machine(opts.packet, opts.ingress);
    ThreeStageLite target({}, HavocOracle::zero());
    Evaluator ev(target, {}, opts.maxSteps);
    Side s;
    try {
        s.r = run_program(ev, m, boot.runtimeDelta, env, p);
    } catch (const Error &e) {
        s.error = e.what();
    }
    s.steps = ev.steps();
    s.m = std::move(m);
    return s;
}

std::string signal_text(const Side &s) {
    if (!s.error.empty()) return "error: " + s.error;
    return signal_name(s.r.sig);
}

}  // namespace

DiffVerdict diff_union_semantics(const Program &p, const DiffOptions &opts) {
    DiffVerdict v;
    Contexts initial = three_stage_lite_bootstrap().contexts;
    Program t = translate_program(p, initial, opts.translate);
    CheckOptions base;
    base.allowUnions = false;
    try {
        check_program(t, initial, base);
    } catch (const TypeError &e) {
        v.reason = std::string("translation does not typecheck: ") + e.what();
        return v;
    }
    Side a = run_side(p, opts);
    Side b = run_side(t, opts);
    v.extendedSignal = signal_text(a);
    v.translatedSignal = signal_text(b);
    v.extendedSteps = a.steps;
    v.translatedSteps = b.steps;
    if (!a.error.empty() || !b.error.empty()) {
        v.reason = "run failed: extended " + v.extendedSignal + "; translated " + v.translatedSignal;
        return v;
    }
    if (!signal_equal(a.r.sig, b.r.sig)) {
        v.reason = "signals differ: " + v.extendedSignal + " vs " + v.translatedSignal;
        return v;
    }
    if (static_cast<bool>(a.r.mainResult) != static_cast<bool>(b.r.mainResult) ||
        (a.r.mainResult && !value_equal(translate_value(a.r.delta, a.r.mainResult), b.r.mainResult))) {
        v.reason = "main returned " + show_value(a.r.mainResult) + " vs " + show_value(b.r.mainResult);
        return v;
    }
    const PacketState &pa = a.m.target->packet, &pb = b.m.target->packet;
    if (pa.egress != pb.egress || pa.dropped != pb.dropped || packet_output(pa) != packet_output(pb)) {
        v.reason = "packet results differ";
        return v;
    }
    Machine ta = translate_store(a.r.delta, a.m);
    if (!env_store_le(ta, a.r.env, b.m, b.r.env)) {
        for (const auto &[name, entry] : a.r.env) {
            auto it = b.r.env.find(name);
            if (it == b.r.env.end()) {
                v.reason = "'" + name + "' is unbound after translation";
                return v;
            }
            if (!env_store_le(ta, {{name, entry}}, b.m, {{name, it->second}})) {
                v.reason = "'" + name + "' differs: " + show_value(ta.store[entry.loc]) + " vs " +
                           show_value(b.m.store[it->second.loc]);
                return v;
            }
        }
        v.reason = "final states differ";
        return v;
    }
    v.pass = true;
    return v;
}

}  // namespace pcore

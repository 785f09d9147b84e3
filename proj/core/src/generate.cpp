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

#include "pcore/generate.hpp"

#include <functional>
#include <map>
#include <random>

#include "pcore/errors.hpp"
#include "pcore/ops.hpp"
#include "pcore/target.hpp"
#include "pcore/typecheck.hpp"

namespace pcore {

namespace {

const uint64_t kWidths[] = {1, 2, 3, 4, 5, 8, 16, 32};

class Rand {
 public:
    explicit Rand(uint64_t seed) {
        std::seed_seq s{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), 0x70636f72u};
        rng_.seed(s);
    }
    uint64_t next() { return rng_(); }
    size_t pick(size_t n) { return n ? static_cast<size_t>(rng_() % n) : 0; }
    bool chance(int percent) { return static_cast<int>(rng_() % 100) < percent; }
    template <class T>
    const T &one(const std::vector<T> &v) { return v[pick(v.size())]; }
    uint64_t width() { return kWidths[pick(std::size(kWidths))]; }
    BigInt bits(uint64_t w) {
        uint64_t v = next();
        if (w < 64) v &= (uint64_t(1) << w) - 1;
        return BigInt(v);
    }

 private:
    std::mt19937_64 rng_;
};

ExprPtr idx32(uint64_t i) { return ex::integer(i, 32); }

struct Var {
    std::string name;
    TypePtr type;
    bool lvalue = true;
};

struct Fn {
    std::string name;
    std::vector<std::string> typeParams;
    std::vector<Param> params;
    TypePtr ret;
};

struct Path {
    ExprPtr e;
    TypePtr t;
    bool lvalue;
};

class Gen {
 public:
    explicit Gen(const GenConfig &cfg) : r_(cfg.seed), cfg_(cfg) {}

    Program program() {
        Program p;
        out_ = &p.decls;
        if (cfg_.maxDepth <= 1) {
            int n = 1 + static_cast<int>(r_.pick(3));
            for (int i = 0; i < n; ++i) top(constant(fresh("c"), 1));
            return p;
        }
        type_decls();
        int globals = 1 + static_cast<int>(r_.pick(3));
        for (int i = 0; i < globals; ++i) top(global());
        for (const auto &u : unions_) {
            std::string n = fresh("g");
            top(var_uninit(n, u));
            scope_.push_back({n, u, true});
            unionGlobals_.push_back(n);
        }
        if (cfg_.calls) {
            if (r_.chance(30)) generic_function();
            int fns = 1 + static_cast<int>(r_.pick(std::max(1, cfg_.maxDecls / 2)));
            for (int i = 0; i < fns; ++i) function();
        }
        if (cfg_.tables) control();
        main_function();
        return p;
    }

    // Used by generate_type.
    TypePtr any_type(int depth) { return base_type(depth); }

 private:
    Rand r_;
    GenConfig cfg_;
    std::vector<DeclPtr> *out_ = nullptr;
    int counter_ = 0;

    std::vector<TypePtr> enums_;
    std::vector<std::string> errors_;
    std::vector<std::pair<std::string, TypePtr>> aliases_;
    std::vector<TypePtr> unions_;
    std::vector<std::string> unionGlobals_;

    std::vector<Var> scope_;
    std::vector<Fn> fns_;
    std::vector<std::string> tables_;
    std::vector<Fn> instances_;
    TypePtr ret_;
    int callBudget_ = 0;
    int depth_ = 0;

    std::string fresh(const std::string &prefix) { return prefix + std::to_string(counter_++); }
    void top(DeclPtr d) { out_->push_back(std::move(d)); }

    // -- types ---------------------------------------------------------------

    TypePtr scalar() {
        size_t k = r_.pick(12);
        if (k < 2) return ty::boolean();
        if (k == 8 && !enums_.empty()) return r_.one(enums_);
        if (k == 9 && !errors_.empty()) return ty::error();
        if (k == 10) return ty::integer();
        return ty::bit(r_.width());
    }

    std::vector<FieldType> fields(int n, const std::function<TypePtr()> &mk) {
        std::vector<FieldType> fs;
        for (int i = 0; i < n; ++i) fs.push_back({"f" + std::to_string(i), mk()});
        return fs;
    }

    TypePtr header_type() {
        return ty::header(fields(1 + static_cast<int>(r_.pick(3)), [&] {
            return r_.chance(20) ? ty::boolean() : ty::bit(r_.width());
        }));
    }

    TypePtr base_type(int depth) {
        size_t k = r_.pick(10);
        if (depth <= 0 || k < 6) return scalar();
        if (k < 8) return ty::record(fields(1 + static_cast<int>(r_.pick(3)), [&] { return base_type(depth - 1); }));
        if (k == 8 || !cfg_.stacks) return header_type();
        return ty::stack(header_type(), 1 + r_.pick(3));
    }

    // Source form: enums and unions by name, records and headers through a
    // typedef when one exists.
    TypePtr ast(const TypePtr &t) {
        switch (t->kind) {
            case TypeKind::Enum:
            case TypeKind::Union: return ty::var(t->name);
            case TypeKind::Record:
            case TypeKind::Header: {
                for (const auto &[n, a] : aliases_)
                    if (type_equal(a, t) && r_.chance(70)) return ty::var(n);
                std::vector<FieldType> fs;
                for (const auto &f : t->fields) fs.push_back({f.name, ast(f.type)});
                return t->kind == TypeKind::Record ? ty::record(std::move(fs)) : ty::header(std::move(fs));
            }
            case TypeKind::Stack: return ty::stack(ast(t->elem), t->size);
            default: return t;
        }
    }

    void type_decls() {
        if (r_.chance(40)) {
            auto d = std::make_shared<Decl>();
            d->kind = DeclKind::Error;
            for (int i = 0, n = 1 + static_cast<int>(r_.pick(2)); i < n; ++i) d->members.push_back(fresh("Err"));
            errors_ = d->members;
            top(d);
        }
        for (int i = 0, n = static_cast<int>(r_.pick(3)); i < n; ++i) {
            auto d = std::make_shared<Decl>();
            d->kind = DeclKind::Enum;
            d->name = fresh("E");
            for (int j = 0, m = 1 + static_cast<int>(r_.pick(3)); j < m; ++j)
                d->members.push_back(d->name + "_" + std::to_string(j));
            enums_.push_back(ty::enumeration(d->name, d->members));
            top(d);
        }
        for (int i = 0, n = static_cast<int>(r_.pick(3)); i < n; ++i) {
            auto t = r_.chance(50) ? header_type() : ty::record(fields(1 + static_cast<int>(r_.pick(3)), [&] {
                return base_type(1);
            }));
            auto d = std::make_shared<Decl>();
            d->kind = DeclKind::Typedef;
            d->name = fresh(t->kind == TypeKind::Header ? "H" : "R");
            d->type = ast(t);
            aliases_.push_back({d->name, t});
            top(d);
        }
        if (!cfg_.unions) return;
        for (int i = 0, n = 1 + static_cast<int>(r_.pick(2)); i < n; ++i) {
            auto d = std::make_shared<Decl>();
            d->kind = DeclKind::Union;
            d->name = fresh("U");
            std::vector<FieldType> norm;
            for (int j = 0, m = 2 + static_cast<int>(r_.pick(2)); j < m; ++j) {
                auto t = base_type(1);
                std::string alt = fresh("alt");
                d->fields.push_back({alt, ast(t)});
                norm.push_back({alt, t});
            }
            unions_.push_back(ty::union_(d->name, norm));
            top(d);
        }
    }

    // -- scope ---------------------------------------------------------------

    std::vector<Path> paths() {
        std::vector<Path> out;
        for (const auto &v : scope_) expand(ex::var(v.name), v.type, v.lvalue, 3, out);
        return out;
    }

    void expand(const ExprPtr &e, const TypePtr &t, bool lv, int depth, std::vector<Path> &out) {
        out.push_back({e, t, lv});
        if (depth == 0) return;
        switch (t->kind) {
            case TypeKind::Record:
            case TypeKind::Header:
                for (const auto &f : t->fields) expand(ex::member(e, f.name), f.type, lv, depth - 1, out);
                break;
            case TypeKind::Stack: expand(ex::index(e, idx32(r_.pick(t->size))), t->elem, lv, depth - 1, out); break;
            default: break;
        }
    }

    std::vector<Path> matching(const TypePtr &t, bool lvalue) {
        std::vector<Path> out;
        for (auto &p : paths())
            if ((!lvalue || p.lvalue) && type_equal(p.t, t)) out.push_back(std::move(p));
        return out;
    }

    // -- expressions ---------------------------------------------------------

    ExprPtr literal(const TypePtr &t) {
        switch (t->kind) {
            case TypeKind::Bool: return ex::boolean(r_.chance(50));
            case TypeKind::Bit: return ex::integer(r_.bits(*t->width), *t->width);
            case TypeKind::Int: return ex::integer(r_.pick(r_.chance(80) ? 16 : 100000));
            case TypeKind::Enum: return ex::type_member(t->name, r_.one(t->members));
            case TypeKind::Error: return ex::type_member(kErrorName, r_.one(errors_));
            default: return ex::init(ast(t));
        }
    }

    ExprPtr leaf(const TypePtr &t) {
        if (r_.chance(55)) {
            auto ps = matching(t, false);
            if (!ps.empty()) return r_.one(ps).e;
        }
        if (t->kind == TypeKind::Record && r_.chance(50)) return record_literal(t, 0);
        return literal(t);
    }

    ExprPtr record_literal(const TypePtr &t, int depth) {
        std::vector<FieldExpr> fs;
        for (const auto &f : t->fields) fs.push_back({f.name, expr(f.type, depth - 1)});
        return ex::record(std::move(fs));
    }

    ExprPtr expr(const TypePtr &t, int depth) {
        if (depth <= 0) return leaf(t);
        for (int attempt = 0; attempt < 6; ++attempt)
            if (auto e = compound(t, depth)) return e;
        return leaf(t);
    }

    ExprPtr compound(const TypePtr &t, int depth) {
        size_t k = r_.pick(100);
        if (k < 15) {
            auto ps = matching(t, false);
            return ps.empty() ? nullptr : r_.one(ps).e;
        }
        if (k < 25) return call_expr(t, depth);
        int d = depth - 1;
        switch (t->kind) {
            case TypeKind::Bool: return bool_expr(d);
            case TypeKind::Bit: return bit_expr(*t->width, d);
            case TypeKind::Int:
                switch (r_.pick(5)) {
                    case 0: return ex::unop(UnOp::Neg, expr(t, d));
                    case 1:
                    case 2: {
                        BinOp ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::BAnd, BinOp::BOr, BinOp::BXor};
                        return ex::binop(ops[r_.pick(6)], expr(t, d), expr(t, d));
                    }
                    case 3: return ex::cast(ty::integer(), expr(ty::bit(r_.width()), d));
                    default:
                        return ex::binop(r_.chance(50) ? BinOp::Shl : BinOp::Shr, expr(t, d),
                                         expr(ty::bit(1 + r_.pick(3)), d));
                }
            case TypeKind::Record: return record_literal(t, depth);
            case TypeKind::Header: {
                std::vector<FieldType> fs = t->fields;
                auto rec = ty::record(fs);
                return ex::cast(ast(t), record_literal(rec, depth));
            }
            default: return leaf(t);
        }
    }

    ExprPtr bool_expr(int d) {
        switch (r_.pick(7)) {
            case 0: return ex::unop(UnOp::Not, expr(ty::boolean(), d));
            case 1: return ex::binop(r_.chance(50) ? BinOp::LAnd : BinOp::LOr, expr(ty::boolean(), d), expr(ty::boolean(), d));
            case 2:
            case 3: {
                auto t = r_.chance(80) ? ty::bit(r_.width()) : ty::integer();
                BinOp ops[] = {BinOp::Lt, BinOp::Le, BinOp::Gt, BinOp::Ge};
                return ex::binop(ops[r_.pick(4)], expr(t, d), expr(t, d));
            }
            case 4:
            case 5: {
                TypePtr t = scalar();
                return ex::binop(r_.chance(50) ? BinOp::Eq : BinOp::Neq, expr(t, d), expr(t, d));
            }
            default: {
                auto hs = header_paths();
                if (hs.empty()) return nullptr;
                const Path &h = r_.one(hs);
                return ex::call(ex::var("is_valid"), {ast(h.t)}, {h.e});
            }
        }
    }

    std::vector<Path> header_paths() {
        std::vector<Path> out;
        for (auto &p : paths())
            if (p.t->kind == TypeKind::Header) out.push_back(std::move(p));
        return out;
    }

    ExprPtr bit_expr(uint64_t w, int d) {
        auto t = ty::bit(w);
        switch (r_.pick(10)) {
            case 0: return ex::unop(r_.chance(50) ? UnOp::Neg : UnOp::BitNot, expr(t, d));
            case 1:
            case 2: {
                BinOp ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::BAnd, BinOp::BOr, BinOp::BXor};
                return ex::binop(ops[r_.pick(6)], expr(t, d), expr(t, d));
            }
            case 3: {
                BigInt v = r_.bits(w);
                if (v == 0) v = 1;
                return ex::binop(r_.chance(50) ? BinOp::Div : BinOp::Mod, expr(t, d), ex::integer(v, w));
            }
            case 4: {
                auto amount = r_.chance(50) ? ex::integer(r_.pick(w + 2)) : expr(ty::bit(1 + r_.pick(5)), d);
                return ex::binop(r_.chance(50) ? BinOp::Shl : BinOp::Shr, expr(t, d), amount);
            }
            case 5: {
                if (w < 2) return nullptr;
                uint64_t a = 1 + r_.pick(w - 1);
                return ex::binop(BinOp::Concat, expr(ty::bit(a), d), expr(ty::bit(w - a), d));
            }
            case 6: {
                std::vector<uint64_t> wider;
                for (uint64_t x : kWidths)
                    if (x > w) wider.push_back(x);
                if (wider.empty()) return nullptr;
                uint64_t W = r_.one(wider);
                uint64_t lo = r_.pick(W - w + 1);
                return ex::slice(expr(ty::bit(W), d), ex::integer(lo + w - 1), ex::integer(lo));
            }
            case 7: return ex::cast(t, expr(r_.chance(80) ? ty::bit(r_.width()) : ty::integer(), d));
            default: {
                auto ps = matching(t, false);
                return ps.empty() ? nullptr : r_.one(ps).e;
            }
        }
    }

    std::vector<ExprPtr> args_for(const std::vector<Param> &ps, int d, bool &ok) {
        std::vector<ExprPtr> args;
        ok = true;
        for (const auto &p : ps) {
            if (p.dir == Direction::In) {
                args.push_back(expr(p.type, d));
                continue;
            }
            auto ls = matching(p.type, true);
            if (ls.empty()) {
                ok = false;
                return {};
            }
            args.push_back(r_.one(ls).e);
        }
        return args;
    }

    ExprPtr call_expr(const TypePtr &t, int depth) {
        if (callBudget_ <= 0) return nullptr;
        std::vector<const Fn *> cands;
        for (const auto &f : fns_) {
            if (f.typeParams.empty() ? type_equal(f.ret, t) : t->kind != TypeKind::Union) cands.push_back(&f);
        }
        if (cands.empty()) return nullptr;
        const Fn &f = *cands[r_.pick(cands.size())];
        std::vector<Param> ps = f.params;
        std::vector<TypePtr> targs;
        if (!f.typeParams.empty()) {
            for (auto &p : ps) p.type = substitute(p.type, f.typeParams, {t});
            targs.push_back(ast(t));
        }
        bool ok;
        auto args = args_for(ps, depth - 1, ok);
        if (!ok) return nullptr;
        --callBudget_;
        return ex::call(ex::var(f.name), std::move(targs), std::move(args));
    }

    // -- statements ----------------------------------------------------------

    struct Saved {
        size_t scope, fns, tables;
    };
    Saved save() const { return {scope_.size(), fns_.size(), tables_.size()}; }
    void restore(const Saved &s) {
        scope_.resize(s.scope);
        fns_.resize(s.fns);
        tables_.resize(s.tables);
    }

    StmtPtr block(int depth, int maxStmts, bool mayReturn) {
        Saved s = save();
        std::vector<StmtPtr> ss;
        int n = 1 + static_cast<int>(r_.pick(maxStmts));
        for (int i = 0; i < n; ++i)
            for (auto &st : stmt(depth)) ss.push_back(std::move(st));
        if (mayReturn && ret_ && !is_unit(*ret_) && r_.chance(15)) ss.push_back(st::return_(expr(ret_, depth_)));
        else if (depth < cfg_.maxDepth - 1 && r_.chance(2)) ss.push_back(st::exit_());
        restore(s);
        return st::block(std::move(ss));
    }

    std::vector<StmtPtr> stmt(int depth) {
        for (int attempt = 0; attempt < 8; ++attempt) {
            size_t k = r_.pick(100);
            StmtPtr s;
            if (k < 30) s = assign(depth);
            else if (k < 45) s = local_decl(depth);
            else if (k < 58 && depth > 1) s = st::if_(expr(ty::boolean(), depth_), block(depth - 1, 3, true),
                                                      r_.chance(70) ? block(depth - 1, 3, true) : st::block({}));
            else if (k < 62 && depth > 1) s = block(depth - 1, 3, true);
            else if (k < 80) s = call_stmt(depth);
            else if (k < 88) s = union_assign();
            else if (k < 95 && depth > 1) s = switch_stmt(depth);
            if (s) return {s};
        }
        return {};
    }

    StmtPtr assign(int) {
        std::vector<Path> ls;
        for (auto &p : paths())
            if (p.lvalue && p.t->kind != TypeKind::Union) ls.push_back(std::move(p));
        if (ls.empty()) return nullptr;
        const Path &p = r_.one(ls);
        if (p.t->kind == TypeKind::Bit && *p.t->width > 1 && r_.chance(15)) {
            uint64_t w = *p.t->width;
            uint64_t lo = r_.pick(w), hi = lo + r_.pick(w - lo);
            return st::assign(ex::slice(p.e, ex::integer(hi), ex::integer(lo)), expr(ty::bit(hi - lo + 1), depth_));
        }
        return st::assign(p.e, expr(p.t, depth_));
    }

    StmtPtr union_assign() {
        std::vector<Path> us;
        for (auto &p : paths())
            if (p.lvalue && p.t->kind == TypeKind::Union) us.push_back(std::move(p));
        if (us.empty()) return nullptr;
        const Path &p = r_.one(us);
        const auto &alt = r_.one(p.t->fields);
        return st::assign(ex::member(p.e, alt.name), expr(alt.type, depth_));
    }

    StmtPtr switch_stmt(int depth) {
        std::vector<Path> us;
        for (auto &p : paths())
            if (p.t->kind == TypeKind::Union) us.push_back(std::move(p));
        if (us.empty()) return nullptr;
        const Path &p = r_.one(us);
        std::vector<SwitchCase> cases;
        for (const auto &alt : p.t->fields) {
            if (!r_.chance(75)) continue;
            Saved s = save();
            scope_.push_back({alt.name, alt.type, true});
            cases.push_back({alt.name, block(depth - 1, 2, true)});
            restore(s);
        }
        if (cases.empty() || r_.chance(40)) cases.push_back({std::nullopt, block(depth - 1, 2, true)});
        return st::switch_(p.e, std::move(cases));
    }

    DeclPtr var_init(const std::string &n, const TypePtr &t, ExprPtr init) {
        auto d = std::make_shared<Decl>();
        d->kind = DeclKind::VarInit;
        d->name = n;
        d->type = ast(t);
        d->init = std::move(init);
        return d;
    }

    DeclPtr var_uninit(const std::string &n, const TypePtr &t) {
        auto d = std::make_shared<Decl>();
        d->kind = DeclKind::VarUninit;
        d->name = n;
        d->type = ast(t);
        return d;
    }

    // Compile-time expression over literals and the constants in scope.
    ExprPtr cte(const TypePtr &t, int depth) {
        std::vector<Path> cs;
        for (const auto &v : scope_)
            if (!v.lvalue && type_equal(v.type, t) && v.name[0] == 'c') cs.push_back({ex::var(v.name), v.type, false});
        if (!cs.empty() && r_.chance(40)) return r_.one(cs).e;
        if (depth <= 0) return literal(t);
        if (t->kind == TypeKind::Bool) return ex::binop(BinOp::LAnd, cte(t, depth - 1), cte(t, depth - 1));
        BinOp ops[] = {BinOp::Add, BinOp::Sub, BinOp::BXor, BinOp::BOr};
        return ex::binop(ops[r_.pick(4)], cte(t, depth - 1), cte(t, depth - 1));
    }

    DeclPtr constant(const std::string &n, int depth) {
        // cteval covers literals, constants and operators only.
        TypePtr t = r_.chance(20) ? ty::boolean() : r_.chance(10) ? ty::integer() : ty::bit(r_.width());
        auto d = std::make_shared<Decl>();
        d->kind = DeclKind::Const;
        d->name = n;
        d->type = ast(t);
        d->init = cte(t, depth);
        scope_.push_back({n, t, false});
        return d;
    }

    StmtPtr local_decl(int) {
        std::string n;
        if (r_.chance(15)) return st::decl(constant(fresh("c"), 2));
        if (!unions_.empty() && r_.chance(20)) {
            const auto &u = r_.one(unions_);
            n = fresh("v");
            auto d = r_.chance(60) ? var_uninit(n, u) : var_init(n, u, expr(u, 1));
            scope_.push_back({n, u, true});
            return st::decl(d);
        }
        auto t = base_type(2);
        n = fresh("v");
        auto d = r_.chance(30) ? var_uninit(n, t) : var_init(n, t, expr(t, depth_));
        scope_.push_back({n, t, true});
        return st::decl(d);
    }

    StmtPtr call_stmt(int) {
        size_t k = r_.pick(10);
        if (k < 2 && !tables_.empty()) return st::call(ex::call(ex::var(r_.one(tables_)), {}, {}));
        if (k < 4) return native_stmt();
        if (callBudget_ <= 0 || fns_.empty()) return nullptr;
        const Fn &f = r_.one(fns_);
        std::vector<Param> ps = f.params;
        std::vector<TypePtr> targs;
        if (!f.typeParams.empty()) {
            TypePtr t = base_type(1);
            for (auto &p : ps) p.type = substitute(p.type, f.typeParams, {t});
            targs.push_back(ast(t));
        }
        bool ok;
        auto args = args_for(ps, depth_ - 1, ok);
        if (!ok) return nullptr;
        --callBudget_;
        return st::call(ex::call(ex::var(f.name), std::move(targs), std::move(args)));
    }

    StmtPtr native_stmt() {
        std::vector<Path> ls;
        for (auto &p : paths())
            if (p.lvalue && (p.t->kind == TypeKind::Header || p.t->kind == TypeKind::Stack)) ls.push_back(std::move(p));
        if (ls.empty()) return nullptr;
        const Path &p = r_.one(ls);
        if (p.t->kind == TypeKind::Header)
            return st::call(ex::call(ex::var(r_.chance(70) ? "set_valid" : "set_invalid"), {ast(p.t)}, {p.e}));
        return st::call(ex::call(ex::var(r_.chance(50) ? "push_front" : "pop_front"), {ast(p.t)},
                                 {p.e, ex::integer(r_.pick(p.t->size + 1))}));
    }

    // -- declarations --------------------------------------------------------

    DeclPtr global() {
        if (r_.chance(25)) return constant(fresh("c"), 2);
        auto t = base_type(2);
        std::string n = fresh("g");
        auto d = r_.chance(40) ? var_uninit(n, t) : var_init(n, t, expr(t, 2));
        scope_.push_back({n, t, true});
        return d;
    }

    std::vector<Param> params(int n, bool directions) {
        std::vector<Param> ps;
        for (int i = 0; i < n; ++i) {
            Param p;
            size_t k = r_.pick(8);
            p.dir = !directions || k < 4 ? Direction::In : (k < 6 ? Direction::Out : Direction::InOut);
            p.name = fresh("p");
            p.type = !unions_.empty() && r_.chance(10) ? r_.one(unions_) : base_type(2);
            ps.push_back(p);
        }
        return ps;
    }

    std::vector<Param> ast_params(const std::vector<Param> &ps) {
        std::vector<Param> out = ps;
        for (auto &p : out) p.type = ast(p.type);
        return out;
    }

    void function() {
        auto d = std::make_shared<Decl>();
        d->kind = DeclKind::Func;
        d->name = fresh("f");
        auto ps = params(static_cast<int>(r_.pick(4)), true);
        TypePtr ret = r_.chance(20) ? ty::unit() : base_type(2);
        d->type = ast(ret);
        d->params = ast_params(ps);
        d->body = body(ps, ret);
        top(d);
        fns_.push_back({d->name, {}, ps, ret});
    }

    StmtPtr body(const std::vector<Param> &ps, const TypePtr &ret) {
        Saved s = save();
        TypePtr savedRet = ret_;
        for (const auto &p : ps) scope_.push_back({p.name, p.type, true});
        ret_ = ret;
        callBudget_ = 3;
        depth_ = cfg_.maxDepth;
        std::vector<StmtPtr> ss;
        for (int i = 0, n = 1 + static_cast<int>(r_.pick(4)); i < n; ++i)
            for (auto &st : stmt(cfg_.maxDepth - 1)) ss.push_back(std::move(st));
        if (!is_unit(*ret)) ss.push_back(st::return_(expr(ret, depth_)));
        ret_ = savedRet;
        restore(s);
        return st::block(std::move(ss));
    }

    void generic_function() {
        auto d = std::make_shared<Decl>();
        d->kind = DeclKind::Func;
        d->name = fresh("f");
        d->typeParams = {"X"};
        auto x = ty::var("X");
        std::string c = fresh("p"), a = fresh("p"), b = fresh("p");
        d->params = {{Direction::In, c, ty::boolean()}, {Direction::In, a, x}, {Direction::InOut, b, x}};
        d->type = x;
        d->body = st::block({st::if_(ex::var(c), st::block({st::return_(ex::var(a))}),
                                     st::block({st::assign(ex::var(b), ex::var(a)), st::return_(ex::var(b))}))});
        top(d);
        fns_.push_back({d->name, {"X"}, d->params, x});
    }

    void control() {
        auto d = std::make_shared<Decl>();
        d->kind = DeclKind::Control;
        d->name = fresh("C");
        auto ps = params(1 + static_cast<int>(r_.pick(2)), true);
        auto cps = params(static_cast<int>(r_.pick(2)), false);
        d->params = ast_params(ps);
        d->ctorParams = ast_params(cps);
        Saved s = save();
        TypePtr savedRet = ret_;
        ret_ = nullptr;
        depth_ = cfg_.maxDepth;
        for (const auto &p : cps) scope_.push_back({p.name, p.type, false});
        for (const auto &p : ps) scope_.push_back({p.name, p.type, true});
        if (r_.chance(50)) {
            auto t = base_type(1);
            std::string n = fresh("v");
            d->locals.push_back(var_init(n, t, expr(t, 2)));
            scope_.push_back({n, t, true});
        }
        // Actions: an optional static in-parameter, then optional
        // control-plane parameters.
        std::vector<ActionRef> refs;
        for (int i = 0, n = 1 + static_cast<int>(r_.pick(2)); i < n; ++i) {
            auto a = std::make_shared<Decl>();
            a->kind = DeclKind::Func;
            a->name = fresh("a");
            a->type = ty::unit();
            std::vector<Param> aps;
            ActionRef ref;
            ref.name = a->name;
            if (r_.chance(40)) {
                auto t = scalar();
                aps.push_back({Direction::In, fresh("p"), t});
                ref.args.push_back(expr(t, 1));
            }
            if (r_.chance(50)) {
                auto t = r_.chance(80) ? ty::bit(r_.width()) : ty::boolean();
                aps.push_back({Direction::In, fresh("p"), t});
                ref.ctrlParams.push_back({aps.back().name, t});
            }
            a->params = ast_params(aps);
            {
                Saved as = save();
                for (const auto &p : aps) scope_.push_back({p.name, p.type, true});
                callBudget_ = 1;
                std::vector<StmtPtr> ss;
                for (int j = 0, m = 1 + static_cast<int>(r_.pick(2)); j < m; ++j)
                    for (auto &st : stmt(2)) ss.push_back(std::move(st));
                a->body = st::block(std::move(ss));
                restore(as);
            }
            d->locals.push_back(a);
            refs.push_back(ref);
        }
        auto t = std::make_shared<Decl>();
        t->kind = DeclKind::Table;
        t->name = fresh("t");
        std::vector<Path> keys;
        for (auto &p : paths())
            if (is_equality_type(*p.t)) keys.push_back(std::move(p));
        for (int i = 0, n = static_cast<int>(r_.pick(3)); i < n && !keys.empty(); ++i)
            t->keys.push_back({r_.one(keys).e, "exact"});
        t->actions = refs;
        if (r_.chance(70)) {
            const ActionRef &def = r_.one(refs);
            ActionRef da;
            da.name = def.name;
            for (const auto &cp : def.ctrlParams) da.args.push_back(literal(cp.type));
            t->defaultAction = da;
        }
        d->locals.push_back(t);
        tables_.push_back(t->name);
        callBudget_ = 3;
        std::vector<StmtPtr> ss;
        for (int i = 0, n = 1 + static_cast<int>(r_.pick(3)); i < n; ++i)
            for (auto &st : stmt(cfg_.maxDepth - 1)) ss.push_back(std::move(st));
        ss.insert(ss.begin() + static_cast<long>(r_.pick(ss.size() + 1)), st::call(ex::call(ex::var(t->name), {}, {})));
        d->body = st::block(std::move(ss));
        ret_ = savedRet;
        restore(s);
        top(d);

        auto inst = std::make_shared<Decl>();
        inst->kind = DeclKind::Inst;
        inst->name = fresh("i");
        inst->typeName = d->name;
        for (const auto &p : cps) inst->args.push_back(expr(p.type, 2));
        top(inst);
        instances_.push_back({inst->name, {}, ps, ty::unit()});
    }

    void main_function() {
        auto d = std::make_shared<Decl>();
        d->kind = DeclKind::Func;
        d->name = "main";
        TypePtr ret = base_type(1);
        d->type = ast(ret);
        Saved s = save();
        ret_ = ret;
        callBudget_ = 4;
        depth_ = cfg_.maxDepth;
        std::vector<StmtPtr> ss;
        for (const auto &g : unionGlobals_) {
            const Var *v = nullptr;
            for (const auto &x : scope_)
                if (x.name == g) v = &x;
            const auto &alt = r_.one(v->type->fields);
            ss.push_back(st::assign(ex::member(ex::var(g), alt.name), expr(alt.type, depth_)));
        }
        for (int i = 0, n = 1 + static_cast<int>(r_.pick(4)); i < n; ++i)
            for (auto &st : stmt(cfg_.maxDepth - 1)) ss.push_back(std::move(st));
        for (const auto &inst : instances_) {
            bool ok;
            auto args = args_for(inst.params, 2, ok);
            if (!ok) {
                // Declare what the instance needs.
                args.clear();
                for (const auto &p : inst.params) {
                    std::string n = fresh("v");
                    ss.push_back(st::decl(var_uninit(n, p.type)));
                    scope_.push_back({n, p.type, true});
                    args.push_back(ex::var(n));
                }
            }
            ss.push_back(st::call(ex::call(ex::var(inst.name), {}, std::move(args))));
        }
        ss.push_back(st::return_(expr(ret, depth_)));
        restore(s);
        d->body = st::block(std::move(ss));
        top(d);
    }
};

// -- compile-time expressions ------------------------------------------------

class CteGen {
 public:
    explicit CteGen(uint64_t seed) : r_(seed) {}

    CteCase make(int depth) {
        CteCase c;
        for (int i = 0, n = static_cast<int>(r_.pick(5)); i < n; ++i) {
            auto t = type();
            auto d = std::make_shared<Decl>();
            d->kind = DeclKind::Const;
            d->name = "k" + std::to_string(i);
            d->type = t;
            d->init = expr(t, 2);
            c.constants.decls.push_back(d);
            consts_.push_back({d->name, t, false});
        }
        c.expr = expr(type(), depth);
        return c;
    }

 private:
    Rand r_;
    std::vector<Var> consts_;

    TypePtr type() {
        size_t k = r_.pick(10);
        if (k < 2) return ty::boolean();
        if (k < 4) return ty::integer();
        return ty::bit(r_.width());
    }

    ExprPtr leaf(const TypePtr &t) {
        std::vector<ExprPtr> vs;
        for (const auto &v : consts_)
            if (type_equal(v.type, t)) vs.push_back(ex::var(v.name));
        if (!vs.empty() && r_.chance(40)) return r_.one(vs);
        switch (t->kind) {
            case TypeKind::Bool: return ex::boolean(r_.chance(50));
            case TypeKind::Int: return ex::integer(r_.pick(r_.chance(70) ? 20 : 1000000));
            default: return ex::integer(r_.bits(*t->width), *t->width);
        }
    }

    ExprPtr expr(const TypePtr &t, int depth) {
        if (depth <= 0 || r_.chance(15)) return leaf(t);
        int d = depth - 1;
        if (t->kind == TypeKind::Bool) {
            switch (r_.pick(4)) {
                case 0: return ex::unop(UnOp::Not, expr(t, d));
                case 1: return ex::binop(r_.chance(50) ? BinOp::LAnd : BinOp::LOr, expr(t, d), expr(t, d));
                case 2: {
                    auto u = r_.chance(50) ? ty::boolean() : type();
                    return ex::binop(r_.chance(50) ? BinOp::Eq : BinOp::Neq, expr(u, d), expr(u, d));
                }
                default: {
                    TypePtr u;
                    do u = type();
                    while (u->kind == TypeKind::Bool);
                    BinOp ops[] = {BinOp::Lt, BinOp::Le, BinOp::Gt, BinOp::Ge};
                    return ex::binop(ops[r_.pick(4)], expr(u, d), expr(u, d));
                }
            }
        }
        size_t k = r_.pick(12);
        if (k == 0) return ex::unop(UnOp::Neg, expr(t, d));
        if (k == 1 && t->kind == TypeKind::Bit) return ex::unop(UnOp::BitNot, expr(t, d));
        if (k == 2 || k == 3) {
            auto amount = r_.chance(50) ? ex::integer(r_.pick(40)) : expr(ty::bit(1 + r_.pick(6)), d);
            return ex::binop(r_.chance(50) ? BinOp::Shl : BinOp::Shr, expr(t, d), amount);
        }
        if (k == 4 && t->kind == TypeKind::Bit && *t->width >= 2) {
            uint64_t a = 1 + r_.pick(*t->width - 1);
            return ex::binop(BinOp::Concat, expr(ty::bit(a), d), expr(ty::bit(*t->width - a), d));
        }
        BinOp ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Mod, BinOp::BAnd, BinOp::BOr, BinOp::BXor};
        return ex::binop(ops[r_.pick(8)], expr(t, d), expr(t, d));
    }
};

void collect_calls(const ExprPtr &e, std::vector<const Expr *> &out) {
    if (!e) return;
    if (e->kind == ExprKind::Call) out.push_back(e.get());
    for (const auto &s : e->sub) collect_calls(s, out);
    for (const auto &a : e->args) collect_calls(a, out);
    for (const auto &f : e->fields) collect_calls(f.expr, out);
}

void collect_calls(const StmtPtr &s, std::vector<const Expr *> &out);

void collect_calls(const DeclPtr &d, std::vector<const Expr *> &out) {
    collect_calls(d->init, out);
    for (const auto &a : d->args) collect_calls(a, out);
    for (const auto &l : d->locals) collect_calls(l, out);
    for (const auto &a : d->actions)
        for (const auto &e : a.args) collect_calls(e, out);
    if (d->body) collect_calls(d->body, out);
}

void collect_calls(const StmtPtr &s, std::vector<const Expr *> &out) {
    if (!s) return;
    collect_calls(s->e1, out);
    collect_calls(s->e2, out);
    collect_calls(s->s1, out);
    collect_calls(s->s2, out);
    for (const auto &c : s->stmts) collect_calls(c, out);
    if (s->decl) collect_calls(s->decl, out);
    for (const auto &c : s->cases) collect_calls(c.body, out);
}

void collect_params(const DeclPtr &d, std::map<std::string, std::vector<Param>> &out,
                    std::map<std::string, std::string> &insts) {
    if (d->kind == DeclKind::Func || d->kind == DeclKind::Control) out[d->name] = d->params;
    if (d->kind == DeclKind::Inst) insts[d->name] = d->typeName;
    for (const auto &l : d->locals) collect_params(l, out, insts);
}

}  // namespace

Program generate_typed_program(const GenConfig &cfg) {
    if (cfg.maxDepth < 1) throw std::invalid_argument("generator depth must be at least 1");
    return Gen(cfg).program();
}

TypePtr generate_type(uint64_t seed, int maxDepth) {
    GenConfig cfg;
    cfg.seed = seed;
    return Gen(cfg).any_type(maxDepth);
}

CteCase generate_cte_case(uint64_t seed, int maxDepth) {
    // Retry on expressions cteval rejects (division by zero, negative or
    // huge shift amounts).
    for (uint64_t attempt = 0;; ++attempt) {
        CteCase c = CteGen(seed * 7919 + attempt).make(maxDepth);
        try {
            Contexts ctx = check_program(c.constants);
            check_expression(ctx.sigma, ctx.gamma, ctx.delta, c.expr);
            cteval(ctx.sigma, c.expr);
            return c;
        } catch (const Error &) {
        }
    }
}

bool has_out_call(const Program &p) {
    std::map<std::string, std::vector<Param>> params;
    std::map<std::string, std::string> insts;
    for (const auto &n : three_stage_lite_natives()) params[n.name] = n.params;
    std::vector<const Expr *> calls;
    for (const auto &d : p.decls) {
        collect_params(d, params, insts);
        collect_calls(d, calls);
    }
    for (const Expr *c : calls) {
        if (c->sub.empty() || c->sub[0]->kind != ExprKind::Var) continue;
        std::string name = c->sub[0]->name;
        if (insts.count(name)) name = insts[name];
        auto it = params.find(name);
        if (it == params.end()) continue;
        for (const auto &prm : it->second)
            if (prm.dir != Direction::In) return true;
    }
    return false;
}

}  // namespace pcore

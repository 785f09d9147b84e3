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

#include "pcore/value.hpp"

#include "pcore/errors.hpp"

namespace pcore {

namespace {
std::string render(const std::string &rule, Pos pos, const std::string &message) {
    return rule + " at " + std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + message;
}
}  // namespace

Error::Error(std::string rule, Pos pos, std::string message)
    : std::runtime_error(render(rule, pos, message)),
      rule_(std::move(rule)),
      pos_(pos),
      message_(std::move(message)) {}

Delta Delta::with_var(const std::string &name) const {
    return Delta(std::make_shared<DeltaNode>(DeltaNode{name, nullptr, head_}));
}

Delta Delta::with_def(const std::string &name, TypePtr def) const {
    return Delta(std::make_shared<DeltaNode>(DeltaNode{name, std::move(def), head_}));
}

const DeltaNode *Delta::lookup(const std::string &name) const {
    for (const DeltaNode *n = head_.get(); n; n = n->next.get())
        if (n->name == name) return n;
    return nullptr;
}

Delta Delta::suffix(const DeltaNode *node) { return Delta(node ? node->next : nullptr); }

std::vector<std::string> Delta::names() const {
    std::vector<std::string> out;
    for (const DeltaNode *n = head_.get(); n; n = n->next.get()) out.push_back(n->name);
    return out;
}

std::vector<std::string> Delta::open_enum_members(const std::string &which) const {
    const DeltaNode *n = lookup(which);
    if (!n || !n->def) return {};
    return n->def->members;
}

namespace val {
ValuePtr boolean(bool b) {
    static const ValuePtr t = [] {
        auto v = std::make_shared<Value>();
        v->kind = ValueKind::Bool;
        v->b = true;
        return v;
    }();
    static const ValuePtr f = [] {
        auto v = std::make_shared<Value>();
        v->kind = ValueKind::Bool;
        return v;
    }();
    return b ? t : f;
}
ValuePtr integer(BigInt n, std::optional<uint64_t> width) {
    auto v = std::make_shared<Value>();
    v->kind = ValueKind::Int;
    v->n = std::move(n);
    v->width = width;
    return v;
}
ValuePtr record(std::vector<NamedValue> fields) {
    auto v = std::make_shared<Value>();
    v->kind = ValueKind::Record;
    v->fields = std::move(fields);
    return v;
}
ValuePtr header(bool valid, std::vector<HeaderField> fields) {
    auto v = std::make_shared<Value>();
    v->kind = ValueKind::Header;
    v->b = valid;
    v->hfields = std::move(fields);
    return v;
}
ValuePtr type_member(std::string type, std::string member) {
    auto v = std::make_shared<Value>();
    v->kind = ValueKind::TypeMember;
    v->typeName = std::move(type);
    v->member = std::move(member);
    return v;
}
ValuePtr stack(TypePtr elem, std::vector<ValuePtr> elems) {
    auto v = std::make_shared<Value>();
    v->kind = ValueKind::Stack;
    v->elemType = std::move(elem);
    v->elems = std::move(elems);
    return v;
}
ValuePtr union_(std::string type, std::string member, ValuePtr payload) {
    auto v = std::make_shared<Value>();
    v->kind = ValueKind::Union;
    v->typeName = std::move(type);
    v->member = std::move(member);
    v->payload = std::move(payload);
    return v;
}
ValuePtr unit() {
    static const ValuePtr u = record({});
    return u;
}
}  // namespace val

bool env_equal(const Env &a, const Env &b) {
    if (a.size() != b.size()) return false;
    for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib)
        if (ia->first != ib->first || ia->second.loc != ib->second.loc) return false;
    return true;
}

namespace {
bool params_eq(const std::vector<Param> &a, const std::vector<Param> &b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i].dir != b[i].dir || a[i].name != b[i].name || !equal(a[i].type, b[i].type)) return false;
    return true;
}
bool decls_eq(const std::vector<DeclPtr> &a, const std::vector<DeclPtr> &b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!equal(a[i], b[i])) return false;
    return true;
}
bool env_ptr_eq(const std::shared_ptr<const Env> &a, const std::shared_ptr<const Env> &b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return env_equal(*a, *b);
}
}  // namespace

bool value_equal(const ValuePtr &a, const ValuePtr &b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case ValueKind::Bool: return a->b == b->b;
        case ValueKind::Int: return a->n == b->n && a->width == b->width;
        case ValueKind::Record:
            if (a->fields.size() != b->fields.size()) return false;
            for (size_t i = 0; i < a->fields.size(); ++i)
                if (a->fields[i].name != b->fields[i].name || !value_equal(a->fields[i].value, b->fields[i].value))
                    return false;
            return true;
        case ValueKind::Header:
            if (a->b != b->b || a->hfields.size() != b->hfields.size()) return false;
            for (size_t i = 0; i < a->hfields.size(); ++i)
                if (a->hfields[i].name != b->hfields[i].name || !equal(a->hfields[i].type, b->hfields[i].type) ||
                    !value_equal(a->hfields[i].value, b->hfields[i].value))
                    return false;
            return true;
        case ValueKind::TypeMember: return a->typeName == b->typeName && a->member == b->member;
        case ValueKind::Stack:
            if (!equal(a->elemType, b->elemType) || a->elems.size() != b->elems.size()) return false;
            for (size_t i = 0; i < a->elems.size(); ++i)
                if (!value_equal(a->elems[i], b->elems[i])) return false;
            return true;
        case ValueKind::Union:
            return a->typeName == b->typeName && a->member == b->member && value_equal(a->payload, b->payload);
        case ValueKind::Native: return a->name == b->name && params_eq(a->params, b->params) && equal(a->ret, b->ret);
        case ValueKind::Closure:
            return env_ptr_eq(a->env, b->env) && a->typeParams == b->typeParams && params_eq(a->params, b->params) &&
                   equal(a->ret, b->ret) && decls_eq(a->locals, b->locals) && equal(a->body, b->body);
        case ValueKind::CtorClosure:
            return env_ptr_eq(a->env, b->env) && params_eq(a->params, b->params) &&
                   params_eq(a->ctorParams, b->ctorParams) && decls_eq(a->locals, b->locals) &&
                   equal(a->body, b->body);
        case ValueKind::Table: {
            if (a->id != b->id || a->name != b->name || !env_ptr_eq(a->env, b->env)) return false;
            if (a->keys.size() != b->keys.size() || a->actions.size() != b->actions.size()) return false;
            for (size_t i = 0; i < a->keys.size(); ++i)
                if (a->keys[i].matchKind != b->keys[i].matchKind || !equal(a->keys[i].expr, b->keys[i].expr))
                    return false;
            Decl da, db;
            da.kind = db.kind = DeclKind::Table;
            da.actions = a->actions;
            db.actions = b->actions;
            da.defaultAction = a->defaultAction;
            db.defaultAction = b->defaultAction;
            return equal(da, db);
        }
    }
    return false;
}

std::string show_value(const ValuePtr &v) {
    if (!v) return "<null>";
    std::string out;
    switch (v->kind) {
        case ValueKind::Bool: return v->b ? "true" : "false";
        case ValueKind::Int: return v->n.str() + (v->width ? "w'" + std::to_string(*v->width) : "");
        case ValueKind::Record:
            out = "{";
            for (size_t i = 0; i < v->fields.size(); ++i)
                out += (i ? ", " : "") + v->fields[i].name + " = " + show_value(v->fields[i].value);
            return out + "}";
        case ValueKind::Header:
            out = v->b ? "valid{" : "invalid{";
            for (size_t i = 0; i < v->hfields.size(); ++i)
                out += (i ? ", " : "") + v->hfields[i].name + " = " + show_value(v->hfields[i].value);
            return out + "}";
        case ValueKind::TypeMember: return v->typeName + "." + v->member;
        case ValueKind::Stack:
            out = "[";
            for (size_t i = 0; i < v->elems.size(); ++i) out += (i ? ", " : "") + show_value(v->elems[i]);
            return out + "]";
        case ValueKind::Union: return v->typeName + "." + v->member + "(" + show_value(v->payload) + ")";
        case ValueKind::Closure: return "<closure " + (v->instName.empty() ? v->name : v->instName) + ">";
        case ValueKind::Native: return "<native " + v->name + ">";
        case ValueKind::Table: return "<table " + v->name + ">";
        case ValueKind::CtorClosure: return "<control " + v->name + ">";
    }
    return "<value>";
}

bool signal_equal(const Signal &a, const Signal &b) {
    if (a.kind != b.kind) return false;
    if (a.kind == Signal::Kind::Return) return value_equal(a.value, b.value);
    return true;
}

std::string signal_name(const Signal &s) {
    switch (s.kind) {
        case Signal::Kind::Continue: return "cont";
        case Signal::Kind::Return: return "return";
        case Signal::Kind::Exit: return "exit";
    }
    return "?";
}

Loc Machine::fresh(ValuePtr v, TypePtr t) {
    store.push_back(std::move(v));
    xi.push_back(std::move(t));
    return store.size() - 1;
}

const ValuePtr &Machine::at(Loc l) const {
    if (l >= store.size()) throw EvalError("store", {}, "dangling location " + std::to_string(l));
    return store[l];
}

void Machine::set(Loc l, ValuePtr v) {
    if (l >= store.size()) throw EvalError("store", {}, "dangling location " + std::to_string(l));
    store[l] = std::move(v);
}

}  // namespace pcore

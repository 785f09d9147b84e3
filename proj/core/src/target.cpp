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

#include "pcore/target.hpp"

#include <algorithm>
#include <random>

#include <nlohmann/json.hpp>

#include "pcore/errors.hpp"
#include "pcore/frontend.hpp"
#include "pcore/ops.hpp"

namespace pcore {

namespace {

bool parse_number(const std::string &text, BigInt &out) {
    std::string s = text;
    bool neg = false;
    if (!s.empty() && s[0] == '-') {
        neg = true;
        s = s.substr(1);
    }
    if (s.empty()) return false;
    int base = 10;
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
        base = 16;
        s = s.substr(2);
    }
    BigInt v = 0;
    for (char c : s) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
        else return false;
        if (d >= base) return false;
        v = v * base + d;
    }
    out = neg ? BigInt(-v) : v;
    return true;
}

std::string last_component(const std::string &s) {
    auto dot = s.rfind('.');
    return dot == std::string::npos ? s : s.substr(dot + 1);
}

bool key_matches(const ValuePtr &v, const std::string &text) {
    switch (v->kind) {
        case ValueKind::Int: {
            BigInt n;
            return parse_number(text, n) && n == v->n;
        }
        case ValueKind::Bool:
            if (text == "true" || text == "1") return v->b;
            if (text == "false" || text == "0") return !v->b;
            return false;
        case ValueKind::TypeMember: return last_component(text) == v->member;
        default: return false;
    }
}

bool table_matches(const std::string &path, const TableInfo &info) {
    if (path == info.name) return true;
    if (!info.control.empty() && path == info.control + "." + info.name) return true;
    return !info.instance.empty() && path == info.instance + "." + info.name;
}

// Wire images.

bool read_bits(const std::vector<bool> &in, size_t &cur, const TypePtr &t, ValuePtr &out) {
    switch (t->kind) {
        case TypeKind::Bit: {
            uint64_t w = *t->width;
            if (in.size() - cur < w) return false;
            BigInt n = 0;
            for (uint64_t i = 0; i < w; ++i) n = (n << 1) | (in[cur++] ? 1 : 0);
            out = val::integer(n, w);
            return true;
        }
        case TypeKind::Bool:
            if (cur >= in.size()) return false;
            out = val::boolean(in[cur++]);
            return true;
        case TypeKind::Record: {
            std::vector<NamedValue> fs;
            for (const auto &f : t->fields) {
                ValuePtr v;
                if (!read_bits(in, cur, f.type, v)) return false;
                fs.push_back({f.name, v});
            }
            out = val::record(std::move(fs));
            return true;
        }
        case TypeKind::Header: {
            std::vector<HeaderField> fs;
            for (const auto &f : t->fields) {
                ValuePtr v;
                if (!read_bits(in, cur, f.type, v)) return false;
                fs.push_back({f.name, f.type, v});
            }
            out = val::header(true, std::move(fs));
            return true;
        }
        case TypeKind::Stack: {
            std::vector<ValuePtr> es;
            for (uint64_t i = 0; i < t->size; ++i) {
                ValuePtr v;
                if (!read_bits(in, cur, t->elem, v)) return false;
                es.push_back(v);
            }
            out = val::stack(t->elem, std::move(es));
            return true;
        }
        default: return false;
    }
}

void write_bits(std::vector<bool> &out, const ValuePtr &v) {
    switch (v->kind) {
        case ValueKind::Int:
            if (!v->width) return;
            for (uint64_t i = *v->width; i-- > 0;) out.push_back(bit_test(v->n, static_cast<unsigned>(i)));
            return;
        case ValueKind::Bool: out.push_back(v->b); return;
        case ValueKind::Record:
            for (const auto &f : v->fields) write_bits(out, f.value);
            return;
        case ValueKind::Header:
            if (!v->b) return;
            for (const auto &f : v->hfields) write_bits(out, f.value);
            return;
        case ValueKind::Stack:
            for (const auto &e : v->elems) write_bits(out, e);
            return;
        default: return;
    }
}

ValuePtr with_validity(const ValuePtr &v, bool valid) {
    if (v->kind != ValueKind::Header) return v;
    auto c = std::make_shared<Value>(*v);
    c->b = valid;
    return c;
}

ValuePtr draw_value(std::mt19937_64 &rng, const Delta &delta, const TypePtr &t) {
    switch (t->kind) {
        case TypeKind::Bool: return val::boolean(rng() & 1);
        case TypeKind::Int: {
            std::uniform_int_distribution<int64_t> d(-(int64_t(1) << 20), int64_t(1) << 20);
            return val::integer(BigInt(d(rng)), std::nullopt);
        }
        case TypeKind::Bit: {
            uint64_t w = *t->width;
            BigInt n = 0;
            for (uint64_t done = 0; done < w; done += 64) n = (n << 64) | BigInt(rng());
            return val::integer(wrap_bits(n, w), w);
        }
        case TypeKind::Enum: {
            if (t->members.empty()) break;
            return val::type_member(t->name, t->members[rng() % t->members.size()]);
        }
        case TypeKind::Error:
        case TypeKind::MatchKind: {
            const char *which = t->kind == TypeKind::Error ? kErrorName : kMatchKindName;
            auto ms = delta.open_enum_members(which);
            if (ms.empty()) break;
            return val::type_member(which, ms[rng() % ms.size()]);
        }
        case TypeKind::Record: {
            std::vector<NamedValue> fs;
            for (const auto &f : t->fields) fs.push_back({f.name, draw_value(rng, delta, f.type)});
            return val::record(std::move(fs));
        }
        case TypeKind::Header: {
            bool valid = rng() & 1;
            std::vector<HeaderField> fs;
            for (const auto &f : t->fields) fs.push_back({f.name, f.type, draw_value(rng, delta, f.type)});
            return val::header(valid, std::move(fs));
        }
        case TypeKind::Stack: {
            std::vector<ValuePtr> es;
            for (uint64_t i = 0; i < t->size; ++i) es.push_back(draw_value(rng, delta, t->elem));
            return val::stack(t->elem, std::move(es));
        }
        case TypeKind::Union: {
            if (t->fields.empty()) break;
            const auto &f = t->fields[rng() % t->fields.size()];
            auto u = std::make_shared<Value>(*val::union_(t->name, f.name, draw_value(rng, delta, f.type)));
            u->elemType = t;
            return u;
        }
        default: break;
    }
    throw Uninhabitable("havoc", {}, "type " + pretty_print(t) + " has no values");
}

TypePtr tvar() { return ty::var("T"); }

NativeFn native(std::string name, std::vector<std::string> tps, std::vector<Param> ps, TypePtr ret, NativeBehavior b) {
    return NativeFn{std::move(name), std::move(tps), std::move(ps), std::move(ret), std::move(b)};
}

PacketState &packet(Machine &m) {
    if (!m.target) throw TargetError("native", {}, "machine has no target state");
    return m.target->packet;
}

ValuePtr shift_stack(Machine &m, const std::vector<Loc> &args, const Delta &delta, bool front) {
    ValuePtr s = m.at(args[0]);
    ValuePtr nv = m.at(args[1]);
    if (s->kind != ValueKind::Stack || nv->kind != ValueKind::Int || nv->n <= 0) return val::unit();
    size_t len = s->elems.size();
    size_t n = nv->n >= len ? len : static_cast<size_t>(nv->n);
    ValuePtr fill = init_value(delta, s->elemType);
    std::vector<ValuePtr> es(len);
    for (size_t i = 0; i < len; ++i) {
        if (front) es[i] = i < n ? fill : s->elems[i - n];  // push_front
        else es[i] = i + n < len ? s->elems[i + n] : fill;  // pop_front
    }
    m.set(args[0], val::stack(s->elemType, std::move(es)));
    return val::unit();
}

}  // namespace

// ---------------------------------------------------------------------------

ValuePtr HavocOracle::draw(const Delta &delta, const TypePtr &t, uint64_t index) const {
    if (mode_ == Mode::Zero) return init_value(delta, t);
    std::seed_seq seq{static_cast<uint32_t>(seed_), static_cast<uint32_t>(seed_ >> 32), static_cast<uint32_t>(index),
                      static_cast<uint32_t>(index >> 32)};
    std::mt19937_64 rng(seq);
    return draw_value(rng, delta, t);
}

HavocOracle parse_havoc_mode(const std::string &text) {
    if (text == "zero") return HavocOracle::zero();
    if (text.rfind("seed:", 0) == 0) {
        BigInt n;
        if (parse_number(text.substr(5), n) && n >= 0 && n <= std::numeric_limits<uint64_t>::max())
            return HavocOracle::seeded(static_cast<uint64_t>(n));
    }
    throw std::invalid_argument("havoc mode must be 'zero' or 'seed:N', got '" + text + "'");
}

ControlPlane ControlPlane::from_json(const std::string &text) {
    ControlPlane cp;
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw ControlPlaneError("cp-json", {}, e.what());
    }
    if (!doc.is_array()) throw ControlPlaneError("cp-json", {}, "expected an array of rules");
    auto as_text = [](const nlohmann::json &j) {
        if (j.is_string()) return j.get<std::string>();
        if (j.is_boolean()) return std::string(j.get<bool>() ? "true" : "false");
        if (j.is_number_integer()) return j.dump();
        throw ControlPlaneError("cp-json", {}, "values must be strings, integers or booleans");
    };
    try {
        for (const auto &r : doc) {
            CpRule rule;
            rule.table = r.at("table").get<std::string>();
            rule.action = r.at("action").get<std::string>();
            for (const auto &k : r.value("keys", nlohmann::json::array())) {
                if (k.is_object()) rule.keys.push_back({k.at("name").get<std::string>(), as_text(k.at("value"))});
                else rule.keys.push_back({"", as_text(k)});
            }
            for (const auto &a : r.value("args", nlohmann::json::array())) rule.args.push_back(as_text(a));
            cp.add(std::move(rule));
        }
    } catch (const nlohmann::json::exception &e) {
        throw ControlPlaneError("cp-json", {}, e.what());
    }
    return cp;
}

ValuePtr parse_cp_value(const Delta &delta, const std::string &text, const TypePtr &t) {
    auto bad = [&]() -> ValuePtr {
        throw ControlPlaneError("cp-value", {}, "'" + text + "' is not a value of type " + pretty_print(t));
    };
    switch (t->kind) {
        case TypeKind::Bit: {
            BigInt n;
            if (!parse_number(text, n) || n < 0 || n >= (BigInt(1) << *t->width)) return bad();
            return val::integer(n, t->width);
        }
        case TypeKind::Int: {
            BigInt n;
            if (!parse_number(text, n)) return bad();
            return val::integer(n, std::nullopt);
        }
        case TypeKind::Bool:
            if (text == "true" || text == "1") return val::boolean(true);
            if (text == "false" || text == "0") return val::boolean(false);
            return bad();
        case TypeKind::Enum: {
            auto m = last_component(text);
            if (std::find(t->members.begin(), t->members.end(), m) == t->members.end()) return bad();
            return val::type_member(t->name, m);
        }
        case TypeKind::Error:
        case TypeKind::MatchKind: {
            const char *which = t->kind == TypeKind::Error ? kErrorName : kMatchKindName;
            auto ms = delta.open_enum_members(which);
            auto m = last_component(text);
            if (std::find(ms.begin(), ms.end(), m) == ms.end()) return bad();
            return val::type_member(which, m);
        }
        default: return bad();
    }
}

ActionChoice cp_lookup(const ControlPlane &cp, const TargetState &ts, const TableQuery &q) {
    auto info = ts.tables.find(q.id);
    if (info == ts.tables.end())
        throw ControlPlaneError("UnknownTable", {}, "no table registered at location " + std::to_string(q.id));
    for (const auto &rule : cp.rules()) {
        if (!table_matches(rule.table, info->second)) continue;
        for (const auto &mk : q.matchKinds)
            if (mk != "exact")
                throw ControlPlaneError("UnsupportedMatchKind", {}, "match kind '" + mk + "' is not supported");
        if (rule.keys.size() != q.keys.size())
            throw ControlPlaneError("cp-lookup", {}, "rule for '" + rule.table + "' binds " +
                                                         std::to_string(rule.keys.size()) + " keys, table has " +
                                                         std::to_string(q.keys.size()));
        bool match = true;
        for (size_t i = 0; i < rule.keys.size() && match; ++i) {
            const KeyBinding &kb = rule.keys[i];
            size_t k = i;
            if (!kb.name.empty()) {
                k = q.keyNames.size();
                for (size_t j = 0; j < q.keyNames.size(); ++j)
                    if (q.keyNames[j] == kb.name || last_component(q.keyNames[j]) == last_component(kb.name)) {
                        k = j;
                        break;
                    }
                if (k == q.keyNames.size())
                    throw ControlPlaneError("cp-lookup", {}, "table has no key named '" + kb.name + "'");
            }
            match = key_matches(q.keys[k], kb.value);
        }
        if (!match) continue;
        std::string name = last_component(rule.action);
        const std::vector<ActionRef> &acts = *q.actions;
        size_t ai = acts.size();
        for (size_t j = 0; j < acts.size(); ++j)
            if (acts[j].name == name) ai = j;
        if (ai == acts.size())
            throw ControlPlaneError("cp-lookup", {}, "action '" + rule.action + "' is not in the table's action list");
        const auto &types = q.ctrlTypes[ai];
        if (rule.args.size() != types.size())
            throw ControlPlaneError("cp-lookup", {}, "action '" + name + "' takes " + std::to_string(types.size()) +
                                                         " control-plane arguments");
        ActionChoice c{name, {}};
        Delta d;
        for (size_t j = 0; j < types.size(); ++j) c.args.push_back(parse_cp_value(d, rule.args[j], types[j]));
        return c;
    }
    return q.fallback;
}

// ---------------------------------------------------------------------------

std::vector<bool> bytes_to_bits(const std::vector<uint8_t> &bytes) {
    std::vector<bool> bits;
    bits.reserve(bytes.size() * 8);
    for (uint8_t b : bytes)
        for (int i = 7; i >= 0; --i) bits.push_back((b >> i) & 1);
    return bits;
}

std::vector<uint8_t> bits_to_bytes(const std::vector<bool> &bits) {
    std::vector<uint8_t> out((bits.size() + 7) / 8, 0);
    for (size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) out[i / 8] |= static_cast<uint8_t>(1u << (7 - i % 8));
    return out;
}

std::vector<uint8_t> parse_hex(const std::string &hex) {
    std::string digits;
    for (char c : hex)
        if (!std::isspace(static_cast<unsigned char>(c))) digits.push_back(c);
    if (digits.size() % 2) throw std::invalid_argument("odd number of hex digits");
    std::vector<uint8_t> out;
    for (size_t i = 0; i < digits.size(); i += 2) {
        auto nib = [&](char c) {
            if (c >= '0' && c <= '9') return c - '0';
            if (c >= 'a' && c <= 'f') return c - 'a' + 10;
            if (c >= 'A' && c <= 'F') return c - 'A' + 10;
            throw std::invalid_argument(std::string("bad hex digit '") + c + "'");
        };
        out.push_back(static_cast<uint8_t>(nib(digits[i]) * 16 + nib(digits[i + 1])));
    }
    return out;
}

std::string to_hex(const std::vector<uint8_t> &bytes) {
    static const char *digits = "0123456789ABCDEF";
    std::string s;
    for (uint8_t b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 15]);
    }
    return s;
}

std::vector<uint8_t> packet_output(const PacketState &p) {
    std::vector<bool> bits = p.output;
    bits.insert(bits.end(), p.input.begin() + static_cast<std::ptrdiff_t>(std::min(p.cursor, p.input.size())),
                p.input.end());
    return bits_to_bytes(bits);
}

std::optional<uint64_t> wire_width(const TypePtr &t) {
    switch (t->kind) {
        case TypeKind::Bit: return t->width;
        case TypeKind::Bool: return 1;
        case TypeKind::Record:
        case TypeKind::Header: {
            uint64_t w = 0;
            for (const auto &f : t->fields) {
                auto fw = wire_width(f.type);
                if (!fw) return std::nullopt;
                w += *fw;
            }
            return w;
        }
        case TypeKind::Stack: {
            auto ew = wire_width(t->elem);
            if (!ew) return std::nullopt;
            return *ew * t->size;
        }
        default: return std::nullopt;
    }
}

std::vector<NativeFn> three_stage_lite_natives() {
    using D = Direction;
    std::vector<NativeFn> ns;
    ns.push_back(native("extract_bits", {"T"}, {{D::Out, "x", tvar()}}, ty::boolean(),
                        [](Machine &m, const std::vector<Loc> &args, const std::vector<TypePtr> &ts, const Delta &) {
                            PacketState &p = packet(m);
                            if (!wire_width(ts[0])) return val::boolean(false);
                            size_t cur = p.cursor;
                            ValuePtr v;
                            if (!read_bits(p.input, cur, ts[0], v)) return val::boolean(false);
                            p.cursor = cur;
                            m.set(args[0], v);
                            return val::boolean(true);
                        }));
    ns.push_back(native("emit_bits", {"T"}, {{D::In, "x", tvar()}}, ty::unit(),
                        [](Machine &m, const std::vector<Loc> &args, const std::vector<TypePtr> &, const Delta &) {
                            write_bits(packet(m).output, m.at(args[0]));
                            return val::unit();
                        }));
    ns.push_back(native("set_egress", {}, {{D::In, "port", ty::bit(8)}}, ty::unit(),
                        [](Machine &m, const std::vector<Loc> &args, const std::vector<TypePtr> &, const Delta &) {
                            packet(m).egress = static_cast<uint64_t>(m.at(args[0])->n);
                            return val::unit();
                        }));
    ns.push_back(native("get_ingress", {}, {}, ty::bit(8),
                        [](Machine &m, const std::vector<Loc> &, const std::vector<TypePtr> &, const Delta &) {
                            return val::integer(wrap_bits(packet(m).ingress, 8), 8);
                        }));
    ns.push_back(native("drop", {}, {}, ty::unit(),
                        [](Machine &m, const std::vector<Loc> &, const std::vector<TypePtr> &, const Delta &) {
                            packet(m).dropped = true;
                            return val::unit();
                        }));
    ns.push_back(native("is_valid", {"T"}, {{D::In, "h", tvar()}}, ty::boolean(),
                        [](Machine &m, const std::vector<Loc> &args, const std::vector<TypePtr> &, const Delta &) {
                            ValuePtr h = m.at(args[0]);
                            return val::boolean(h->kind == ValueKind::Header && h->b);
                        }));
    ns.push_back(native("set_valid", {"T"}, {{D::InOut, "h", tvar()}}, ty::unit(),
                        [](Machine &m, const std::vector<Loc> &args, const std::vector<TypePtr> &, const Delta &) {
                            m.set(args[0], with_validity(m.at(args[0]), true));
                            return val::unit();
                        }));
    ns.push_back(native("set_invalid", {"T"}, {{D::InOut, "h", tvar()}}, ty::unit(),
                        [](Machine &m, const std::vector<Loc> &args, const std::vector<TypePtr> &, const Delta &) {
                            m.set(args[0], with_validity(m.at(args[0]), false));
                            return val::unit();
                        }));
    ns.push_back(native("push_front", {"T"}, {{D::InOut, "s", tvar()}, {D::In, "n", ty::integer()}}, ty::unit(),
                        [](Machine &m, const std::vector<Loc> &args, const std::vector<TypePtr> &, const Delta &d) {
                            return shift_stack(m, args, d, true);
                        }));
    ns.push_back(native("pop_front", {"T"}, {{D::InOut, "s", tvar()}, {D::In, "n", ty::integer()}}, ty::unit(),
                        [](Machine &m, const std::vector<Loc> &args, const std::vector<TypePtr> &, const Delta &d) {
                            return shift_stack(m, args, d, false);
                        }));
    return ns;
}

ThreeStageLite::ThreeStageLite(ControlPlane cp, HavocOracle havoc)
    : cp_(std::move(cp)), havoc_(havoc), natives_(three_stage_lite_natives()) {}

ActionChoice ThreeStageLite::match_action(Machine &m, const TableQuery &q) {
    if (!m.target) throw TargetError("table", {}, "machine has no target state");
    return cp_lookup(cp_, *m.target, q);
}

ValuePtr ThreeStageLite::havoc(Machine &m, const Delta &delta, const TypePtr &t) {
    uint64_t index = m.target ? m.target->havocQueries++ : 0;
    return havoc_.draw(delta, t, index);
}

ValuePtr ThreeStageLite::call_native(Machine &m, const std::string &name, const std::vector<Loc> &args,
                                     const std::vector<TypePtr> &paramTypes, const Delta &delta) {
    for (const auto &n : natives_)
        if (n.name == name) return n.behavior(m, args, paramTypes, delta);
    throw TargetError("UnknownNative", {}, "no native named '" + name + "'");
}

void ThreeStageLite::on_table_decl(Machine &m, Loc id, const std::string &name) {
    if (!m.target) return;
    TableInfo info{name, "", ""};
    if (!m.target->scopes.empty()) {
        info.control = m.target->scopes.back().first;
        info.instance = m.target->scopes.back().second;
    }
    m.target->tables[id] = info;
}

void ThreeStageLite::enter_instance(Machine &m, const std::string &ctrl, const std::string &inst) {
    if (m.target) m.target->scopes.emplace_back(ctrl, inst);
}

void ThreeStageLite::leave_instance(Machine &m) {
    if (m.target && !m.target->scopes.empty()) m.target->scopes.pop_back();
}

Bootstrap three_stage_lite_bootstrap() {
    Bootstrap b;
    b.contexts = initial_contexts();
    b.runtimeDelta = b.contexts.delta;
    auto natives = three_stage_lite_natives();
    for (const auto &n : natives) b.contexts.gamma[n.name] = ty::function(n.typeParams, n.params, n.ret);
    b.make_machine = [natives](const std::vector<uint8_t> &pkt, uint64_t ingress) {
        Machine m;
        m.target = std::make_shared<TargetState>();
        m.target->packet.input = bytes_to_bits(pkt);
        m.target->packet.ingress = ingress;
        Env env;
        for (const auto &n : natives) {
            auto v = std::make_shared<Value>();
            v->kind = ValueKind::Native;
            v->name = n.name;
            v->typeParams = n.typeParams;
            v->params = n.params;
            v->ret = n.ret;
            Loc l = m.fresh(v, ty::function(n.typeParams, n.params, n.ret));
            env[n.name] = {l, false};
        }
        return std::make_pair(std::move(m), std::move(env));
    };
    return b;
}

}  // namespace pcore

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

#include "pcore/ops.hpp"

#include "pcore/errors.hpp"
#include "pcore/frontend.hpp"

namespace pcore {

namespace {

bool is_numeric(const Type &t) { return t.kind == TypeKind::Int || t.kind == TypeKind::Bit; }

bool same_numeric(const Type &a, const Type &b) {
    if (a.kind != b.kind) return false;
    if (a.kind == TypeKind::Int) return true;
    return a.kind == TypeKind::Bit && a.width == b.width;
}

[[noreturn]] void ill_typed(const std::string &op, const std::vector<TypePtr> &ts) {
    std::string msg = "operator " + op + " does not accept";
    for (size_t i = 0; i < ts.size(); ++i) msg += (i ? ", " : " ") + pretty_print(ts[i]);
    throw IllTypedOperator("T-Op", {}, msg);
}

BigInt pow2(uint64_t w) { return BigInt(1) << w; }

ValuePtr same_width(const BigInt &n, const std::optional<uint64_t> &w) {
    if (w) return val::integer(wrap_bits(n, *w), w);
    return val::integer(n, std::nullopt);
}

// Bitwise op on arbitrary-precision two's-complement integers: move both
// operands into a modulus wide enough to hold their sign, then reinterpret.
BigInt twos_bitwise(BinOp op, const BigInt &a, const BigInt &b) {
    uint64_t w = 2;
    for (const BigInt *x : {&a, &b}) {
        BigInt m = *x < 0 ? BigInt(-*x) : *x;
        if (m != 0) w = std::max<uint64_t>(w, boost::multiprecision::msb(m) + 2);
    }
    BigInt ua = wrap_bits(a, w), ub = wrap_bits(b, w), r;
    switch (op) {
        case BinOp::BAnd: r = ua & ub; break;
        case BinOp::BOr: r = ua | ub; break;
        default: r = ua ^ ub; break;
    }
    if (r >= pow2(w - 1)) r -= pow2(w);
    return r;
}

const char *member_type_name(const Type &t) {
    if (t.kind == TypeKind::Error) return kErrorName;
    return kMatchKindName;
}

}  // namespace

BigInt wrap_bits(const BigInt &n, uint64_t w) {
    if (w == 0) return 0;
    if (n >= 0 && n < pow2(w)) return n;
    BigInt m = pow2(w);
    BigInt r = n % m;
    if (r < 0) r += m;
    return r;
}

bool is_equality_type(const Type &t) {
    switch (t.kind) {
        case TypeKind::Bool:
        case TypeKind::Int:
        case TypeKind::Bit:
        case TypeKind::Enum:
        case TypeKind::Error:
        case TypeKind::MatchKind: return true;
        default: return false;
    }
}

TypePtr type_of_unop(const Delta &, UnOp op, const TypePtr &t) {
    switch (op) {
        case UnOp::Not:
            if (t->kind == TypeKind::Bool) return t;
            break;
        case UnOp::Neg:
            if (is_numeric(*t)) return t;
            break;
        case UnOp::BitNot:
            if (t->kind == TypeKind::Bit) return t;
            break;
    }
    ill_typed(unop_name(op), {t});
}

TypePtr type_of_binop(const Delta &, BinOp op, const TypePtr &t1, const TypePtr &t2) {
    const Type &a = *t1, &b = *t2;
    switch (op) {
        case BinOp::Add:
        case BinOp::Sub:
        case BinOp::Mul:
        case BinOp::Div:
        case BinOp::Mod:
        case BinOp::BAnd:
        case BinOp::BOr:
        case BinOp::BXor:
            if (same_numeric(a, b)) return t1;
            break;
        case BinOp::Shl:
        case BinOp::Shr:
            if (is_numeric(a) && is_numeric(b)) return t1;
            break;
        case BinOp::Concat:
            if (a.kind == TypeKind::Bit && b.kind == TypeKind::Bit) return ty::bit(*a.width + *b.width);
            break;
        case BinOp::Lt:
        case BinOp::Le:
        case BinOp::Gt:
        case BinOp::Ge:
            if (same_numeric(a, b)) return ty::boolean();
            break;
        case BinOp::Eq:
        case BinOp::Neq:
            if (is_equality_type(a) && type_equal(t1, t2)) return ty::boolean();
            break;
        case BinOp::LAnd:
        case BinOp::LOr:
            if (a.kind == TypeKind::Bool && b.kind == TypeKind::Bool) return t1;
            break;
    }
    ill_typed(binop_name(op), {t1, t2});
}

ValuePtr eval_unop(UnOp op, const ValuePtr &v) {
    switch (op) {
        case UnOp::Not:
            if (v->kind == ValueKind::Bool) return val::boolean(!v->b);
            break;
        case UnOp::Neg:
            if (v->kind == ValueKind::Int) return same_width(-v->n, v->width);
            break;
        case UnOp::BitNot:
            if (v->kind == ValueKind::Int && v->width) return val::integer(pow2(*v->width) - 1 - v->n, v->width);
            break;
    }
    throw EvalError("E-UOp", {}, std::string("operator ") + unop_name(op) + " applied to an unsuitable value");
}

ValuePtr eval_binop(BinOp op, const ValuePtr &v1, const ValuePtr &v2) {
    auto bad = [&]() -> ValuePtr {
        throw EvalError("E-BinOp", {}, std::string("operator ") + binop_name(op) + " applied to unsuitable values");
    };
    if (op == BinOp::LAnd || op == BinOp::LOr) {
        if (v1->kind != ValueKind::Bool || v2->kind != ValueKind::Bool) return bad();
        return val::boolean(op == BinOp::LAnd ? (v1->b && v2->b) : (v1->b || v2->b));
    }
    if (op == BinOp::Eq || op == BinOp::Neq) {
        if (v1->kind != v2->kind) return bad();
        bool eq;
        switch (v1->kind) {
            case ValueKind::Bool: eq = v1->b == v2->b; break;
            case ValueKind::Int: eq = v1->n == v2->n; break;
            case ValueKind::TypeMember: eq = v1->member == v2->member && v1->typeName == v2->typeName; break;
            default: return bad();
        }
        return val::boolean(op == BinOp::Eq ? eq : !eq);
    }
    if (v1->kind != ValueKind::Int || v2->kind != ValueKind::Int) return bad();
    const BigInt &a = v1->n, &b = v2->n;
    const auto &w = v1->width;
    switch (op) {
        case BinOp::Add: return same_width(a + b, w);
        case BinOp::Sub: return same_width(a - b, w);
        case BinOp::Mul: return same_width(a * b, w);
        case BinOp::Div:
        case BinOp::Mod:
            if (b == 0) throw ArithmeticError("E-BinOp", {}, "division by zero");
            if (a < 0 || b < 0) throw ArithmeticError("E-BinOp", {}, "division with a negative operand");
            return same_width(op == BinOp::Div ? BigInt(a / b) : BigInt(a % b), w);
        case BinOp::Shl:
        case BinOp::Shr: {
            if (b < 0) throw ArithmeticError("E-BinOp", {}, "negative shift amount");
            if (w) {
                if (b >= *w) return val::integer(0, w);
                auto s = static_cast<uint64_t>(b);
                return same_width(op == BinOp::Shl ? BigInt(a << s) : BigInt(a >> s), w);
            }
            if (b > kMaxIntShift) throw ArithmeticError("E-BinOp", {}, "shift amount too large for int");
            auto s = static_cast<uint64_t>(b);
            if (op == BinOp::Shl) return val::integer(a << s, std::nullopt);
            // Arithmetic shift: floor division by 2^s.
            BigInt q = a >= 0 ? BigInt(a >> s) : BigInt(-((-a + pow2(s) - 1) >> s));
            return val::integer(q, std::nullopt);
        }
        case BinOp::BAnd:
        case BinOp::BOr:
        case BinOp::BXor:
            if (w) {
                switch (op) {
                    case BinOp::BAnd: return val::integer(a & b, w);
                    case BinOp::BOr: return val::integer(a | b, w);
                    default: return val::integer(a ^ b, w);
                }
            }
            return val::integer(twos_bitwise(op, a, b), std::nullopt);
        case BinOp::Concat:
            if (!w || !v2->width) return bad();
            return val::integer((a << *v2->width) | b, *w + *v2->width);
        case BinOp::Lt: return val::boolean(a < b);
        case BinOp::Le: return val::boolean(a <= b);
        case BinOp::Gt: return val::boolean(a > b);
        case BinOp::Ge: return val::boolean(a >= b);
        default: return bad();
    }
}

bool check_cast(const Delta &, const TypePtr &from, const TypePtr &to) {
    if (is_numeric(*from) && is_numeric(*to)) return true;
    if (from->kind == TypeKind::Record && to->kind == TypeKind::Header) {
        Type asRecord = *to;
        asRecord.kind = TypeKind::Record;
        return type_equal(from, std::make_shared<const Type>(asRecord));
    }
    return false;
}

ValuePtr eval_cast(const Delta &, const ValuePtr &v, const TypePtr &to) {
    if (v->kind == ValueKind::Int) {
        if (to->kind == TypeKind::Bit) return val::integer(wrap_bits(v->n, *to->width), to->width);
        if (to->kind == TypeKind::Int) return val::integer(v->n, std::nullopt);
    }
    if (v->kind == ValueKind::Record && to->kind == TypeKind::Header && v->fields.size() == to->fields.size()) {
        std::vector<HeaderField> hf;
        for (size_t i = 0; i < to->fields.size(); ++i)
            hf.push_back({to->fields[i].name, to->fields[i].type, v->fields[i].value});
        return val::header(true, std::move(hf));
    }
    throw EvalError("E-Cast", {}, "illegal cast to " + pretty_print(to));
}

ValuePtr slice_bits(const ValuePtr &v, uint64_t hi, uint64_t lo) {
    if (v->kind != ValueKind::Int || !v->width || hi < lo || hi >= *v->width)
        throw EvalError("E-Slice", {}, "slice out of range");
    uint64_t w = hi - lo + 1;
    return val::integer(wrap_bits(v->n >> lo, w), w);
}

ValuePtr set_bits(const ValuePtr &target, uint64_t hi, uint64_t lo, const ValuePtr &v) {
    if (target->kind != ValueKind::Int || !target->width || hi < lo || hi >= *target->width ||
        v->kind != ValueKind::Int)
        throw EvalError("LW-Slice", {}, "bit range out of range");
    uint64_t w = hi - lo + 1;
    BigInt mask = (pow2(w) - 1) << lo;
    BigInt cleared = target->n & (pow2(*target->width) - 1 - mask);
    return val::integer(cleared | (wrap_bits(v->n, w) << lo), target->width);
}

ValuePtr init_value(const Delta &delta, const TypePtr &t) {
    switch (t->kind) {
        case TypeKind::Bool: return val::boolean(false);
        case TypeKind::Int: return val::integer(0, std::nullopt);
        case TypeKind::Bit:
            if (!t->width) throw InternalError("init", {}, "width not evaluated");
            return val::integer(0, t->width);
        case TypeKind::Enum:
            if (t->members.empty()) break;
            return val::type_member(t->name, t->members.front());
        case TypeKind::Error:
        case TypeKind::MatchKind: {
            auto ms = delta.open_enum_members(member_type_name(*t));
            if (ms.empty()) break;
            return val::type_member(member_type_name(*t), ms.front());
        }
        case TypeKind::Record: {
            std::vector<NamedValue> fs;
            for (const auto &f : t->fields) fs.push_back({f.name, init_value(delta, f.type)});
            return val::record(std::move(fs));
        }
        case TypeKind::Header: {
            std::vector<HeaderField> fs;
            for (const auto &f : t->fields) fs.push_back({f.name, f.type, init_value(delta, f.type)});
            return val::header(false, std::move(fs));
        }
        case TypeKind::Stack: {
            auto e = init_value(delta, t->elem);
            return val::stack(t->elem, std::vector<ValuePtr>(t->size, e));
        }
        case TypeKind::Union:
            if (t->fields.empty()) break;
        {
            auto u = std::make_shared<Value>(
                *val::union_(t->name, t->fields.front().name, init_value(delta, t->fields.front().type)));
            u->elemType = t;
            return u;
        }
        default: break;
    }
    throw Uninhabitable("init", {}, "type " + pretty_print(t) + " has no default value");
}

}  // namespace pcore

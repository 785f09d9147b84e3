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

#include <random>

#include <gtest/gtest.h>

#include "pcore/errors.hpp"
#include "pcore/ops.hpp"
#include "pcore/typecheck.hpp"

using namespace pcore;

namespace {

ValuePtr bits(BigInt n, uint64_t w) { return val::integer(std::move(n), w); }
ValuePtr num(BigInt n) { return val::integer(std::move(n), std::nullopt); }

TEST(OpTyping, Unary) {
    Delta d;
    EXPECT_TRUE(type_equal(type_of_unop(d, UnOp::Not, ty::boolean()), ty::boolean()));
    EXPECT_TRUE(type_equal(type_of_unop(d, UnOp::BitNot, ty::bit(8)), ty::bit(8)));
    EXPECT_TRUE(type_equal(type_of_unop(d, UnOp::Neg, ty::integer()), ty::integer()));
    EXPECT_THROW(type_of_unop(d, UnOp::Neg, ty::boolean()), IllTypedOperator);
    EXPECT_THROW(type_of_unop(d, UnOp::BitNot, ty::integer()), IllTypedOperator);
}

TEST(OpTyping, Binary) {
    Delta d;
    EXPECT_TRUE(type_equal(type_of_binop(d, BinOp::Add, ty::bit(8), ty::bit(8)), ty::bit(8)));
    EXPECT_TRUE(type_equal(type_of_binop(d, BinOp::Concat, ty::bit(4), ty::bit(12)), ty::bit(16)));
    EXPECT_TRUE(type_equal(type_of_binop(d, BinOp::Shl, ty::bit(8), ty::integer()), ty::bit(8)));
    EXPECT_TRUE(type_equal(type_of_binop(d, BinOp::Shr, ty::bit(8), ty::bit(3)), ty::bit(8)));
    EXPECT_TRUE(type_equal(type_of_binop(d, BinOp::Lt, ty::integer(), ty::integer()), ty::boolean()));
    EXPECT_TRUE(type_equal(type_of_binop(d, BinOp::LAnd, ty::boolean(), ty::boolean()), ty::boolean()));
    EXPECT_THROW(type_of_binop(d, BinOp::Add, ty::bit(8), ty::integer()), IllTypedOperator);
    EXPECT_THROW(type_of_binop(d, BinOp::Add, ty::bit(8), ty::bit(9)), IllTypedOperator);
    TypePtr h = ty::header({{"a", ty::bit(1)}});
    EXPECT_THROW(type_of_binop(d, BinOp::Eq, h, h), IllTypedOperator);
}

TEST(OpEval, Unary) {
    EXPECT_TRUE(value_equal(eval_unop(UnOp::Neg, num(5)), num(-5)));
    EXPECT_TRUE(value_equal(eval_unop(UnOp::Neg, bits(1, 8)), bits(255, 8)));
    EXPECT_TRUE(value_equal(eval_unop(UnOp::BitNot, bits(0xF0, 8)), bits(0x0F, 8)));
    EXPECT_TRUE(value_equal(eval_unop(UnOp::Not, val::boolean(false)), val::boolean(true)));
}

TEST(OpEval, Binary) {
    EXPECT_TRUE(value_equal(eval_binop(BinOp::Add, bits(200, 8), bits(100, 8)), bits(44, 8)));
    EXPECT_TRUE(value_equal(eval_binop(BinOp::Eq, val::boolean(true), val::boolean(true)), val::boolean(true)));
    EXPECT_TRUE(value_equal(eval_binop(BinOp::Concat, bits(0xA, 4), bits(0xBCD, 12)), bits(0xABCD, 16)));
    EXPECT_TRUE(value_equal(eval_binop(BinOp::Div, num(7), num(2)), num(3)));
    EXPECT_TRUE(value_equal(eval_binop(BinOp::Shl, bits(0x81, 8), num(1)), bits(0x02, 8)));
    EXPECT_THROW(eval_binop(BinOp::Div, num(7), num(0)), ArithmeticError);
    EXPECT_THROW(eval_binop(BinOp::Mod, num(-7), num(2)), ArithmeticError);
}

// Every accepted operator on every bit<1..3> operand pair yields a value of
// the predicted type.
TEST(OpEval, TypingImpliesSafeEvaluation) {
    Delta d;
    Xi xi;
    for (uint64_t w = 1; w <= 3; ++w) {
        TypePtr t = ty::bit(w);
        for (int op = 0; op <= static_cast<int>(BinOp::Ge); ++op) {
            BinOp b = static_cast<BinOp>(op);
            TypePtr rt = type_of_binop(d, b, t, t);
            for (int x = 0; x < (1 << w); ++x)
                for (int y = 0; y < (1 << w); ++y) {
                    if ((b == BinOp::Div || b == BinOp::Mod) && y == 0) continue;
                    ValuePtr v = eval_binop(b, bits(x, w), bits(y, w));
                    EXPECT_TRUE(check_value(xi, {}, d, v, rt)) << binop_name(b) << " " << x << " " << y;
                }
        }
        for (UnOp u : {UnOp::Neg, UnOp::BitNot})
            for (int x = 0; x < (1 << w); ++x)
                EXPECT_TRUE(check_value(xi, {}, d, eval_unop(u, bits(x, w)), type_of_unop(d, u, t)));
    }
}

TEST(Cast, Legality) {
    Delta d;
    TypePtr rec = ty::record({{"port", ty::bit(7)}, {"bos", ty::bit(1)}});
    TypePtr hdr = ty::header({{"port", ty::bit(7)}, {"bos", ty::bit(1)}});
    EXPECT_TRUE(check_cast(d, ty::bit(16), ty::bit(8)));
    EXPECT_TRUE(check_cast(d, ty::bit(8), ty::integer()));
    EXPECT_TRUE(check_cast(d, ty::integer(), ty::bit(8)));
    EXPECT_TRUE(check_cast(d, rec, hdr));
    EXPECT_FALSE(check_cast(d, hdr, rec));
    EXPECT_FALSE(check_cast(d, ty::boolean(), ty::bit(1)));
    EXPECT_FALSE(check_cast(d, ty::bit(1), ty::boolean()));
}

TEST(Cast, Evaluation) {
    Delta d;
    EXPECT_TRUE(value_equal(eval_cast(d, num(300), ty::bit(8)), bits(44, 8)));
    EXPECT_TRUE(value_equal(eval_cast(d, bits(5, 8), ty::bit(8)), bits(5, 8)));
    EXPECT_TRUE(value_equal(eval_cast(d, bits(0xFF, 8), ty::bit(16)), bits(0xFF, 16)));
    EXPECT_TRUE(value_equal(eval_cast(d, num(-1), ty::bit(4)), bits(15, 4)));
    EXPECT_TRUE(value_equal(eval_cast(d, bits(200, 8), ty::integer()), num(200)));
    TypePtr hdr = ty::header({{"port", ty::bit(7)}, {"bos", ty::bit(1)}});
    ValuePtr r = val::record({{"port", bits(1, 7)}, {"bos", bits(1, 1)}});
    ValuePtr want = val::header(true, {{"port", ty::bit(7), bits(1, 7)}, {"bos", ty::bit(1), bits(1, 1)}});
    EXPECT_TRUE(value_equal(eval_cast(d, r, hdr), want));
}

TEST(Bits, SliceExamples) {
    EXPECT_TRUE(value_equal(slice_bits(bits(0xABCD, 16), 7, 0), bits(0xCD, 8)));
    EXPECT_TRUE(value_equal(slice_bits(bits(0xABCD, 16), 15, 0), bits(0xABCD, 16)));
    EXPECT_TRUE(value_equal(slice_bits(bits(0x80, 8), 7, 7), bits(1, 1)));
}

TEST(Bits, SetExamples) {
    EXPECT_TRUE(value_equal(set_bits(bits(0xFF, 8), 3, 0, bits(0, 4)), bits(0xF0, 8)));
    EXPECT_TRUE(value_equal(set_bits(bits(0x12, 8), 7, 0, bits(0x34, 8)), bits(0x34, 8)));
}

// Read-after-write and write-back over random (w, hi, lo, v), against a
// shift and mask oracle.
TEST(Bits, Laws) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        uint64_t w = 1 + rng() % 40;
        uint64_t hi = rng() % w, lo = rng() % (hi + 1);
        uint64_t k = hi - lo + 1;
        BigInt t = BigInt(rng()) % (BigInt(1) << w);
        BigInt v = BigInt(rng()) % (BigInt(1) << k);
        ValuePtr tv = bits(t, w);
        EXPECT_TRUE(value_equal(slice_bits(tv, hi, lo), bits((t >> lo) % (BigInt(1) << k), k)));
        ValuePtr written = set_bits(tv, hi, lo, bits(v, k));
        EXPECT_TRUE(value_equal(slice_bits(written, hi, lo), bits(v, k)));
        BigInt mask = ((BigInt(1) << k) - 1) << lo;
        BigInt expect = (t & ~mask & ((BigInt(1) << w) - 1)) | (v << lo);
        EXPECT_TRUE(value_equal(written, bits(expect, w)));
        EXPECT_TRUE(value_equal(set_bits(tv, hi, lo, slice_bits(tv, hi, lo)), tv));
    }
}

TEST(Init, Examples) {
    Delta d;
    EXPECT_TRUE(value_equal(init_value(d, ty::bit(8)), bits(0, 8)));
    EXPECT_TRUE(value_equal(init_value(d, ty::integer()), num(0)));
    EXPECT_TRUE(value_equal(init_value(d, ty::boolean()), val::boolean(false)));
    TypePtr hdr = ty::header({{"port", ty::bit(7)}, {"bos", ty::bit(1)}});
    ValuePtr h = init_value(d, hdr);
    EXPECT_TRUE(value_equal(h, val::header(false, {{"port", ty::bit(7), bits(0, 7)}, {"bos", ty::bit(1), bits(0, 1)}})));
    ValuePtr s = init_value(d, ty::stack(ty::bit(1), 3));
    EXPECT_TRUE(value_equal(s, val::stack(ty::bit(1), {bits(0, 1), bits(0, 1), bits(0, 1)})));
    EXPECT_TRUE(value_equal(init_value(d, ty::enumeration("Suit", {"H", "S"})), val::type_member("Suit", "H")));
}

TEST(Init, Uninhabitable) {
    Delta d = Delta().with_var("X");
    EXPECT_THROW(init_value(d, ty::var("X")), Uninhabitable);
    EXPECT_THROW(init_value(Delta(), ty::error()), Uninhabitable);
}

}  // namespace

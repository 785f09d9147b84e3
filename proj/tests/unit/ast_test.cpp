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

#include <gtest/gtest.h>

#include "pcore/errors.hpp"
#include "pcore/generate.hpp"

using namespace pcore;

namespace {

TypePtr id_fn(const std::string &x) {
    return ty::function({x}, {{Direction::In, "x", ty::var(x)}}, ty::var(x));
}

TEST(TypeEqual, Literals) {
    EXPECT_TRUE(type_equal(ty::bit(8), ty::bit(8)));
    EXPECT_FALSE(type_equal(ty::bit(8), ty::bit(9)));
    EXPECT_FALSE(type_equal(ty::bit(8), ty::integer()));
}

TEST(TypeEqual, AlphaRenaming) {
    EXPECT_TRUE(type_equal(id_fn("X"), id_fn("Y")));
    TypePtr constY = ty::function({"X"}, {{Direction::In, "x", ty::var("X")}}, ty::var("Y"));
    EXPECT_FALSE(type_equal(id_fn("X"), constY));
}

TEST(TypeEqual, FieldOrderMatters) {
    TypePtr a = ty::record({{"a", ty::bit(8)}, {"b", ty::boolean()}});
    TypePtr b = ty::record({{"b", ty::boolean()}, {"a", ty::bit(8)}});
    EXPECT_FALSE(type_equal(a, b));
    EXPECT_FALSE(type_equal(a, ty::header({{"a", ty::bit(8)}, {"b", ty::boolean()}})));
}

TEST(TypeEqual, RejectsUnevaluatedWidth) {
    TypePtr w = ty::bit_expr(ex::var("w"));
    EXPECT_THROW(type_equal(w, ty::bit(8)), InternalError);
}

TEST(TypeEqual, EquivalenceOnGeneratedTypes) {
    std::vector<TypePtr> ts;
    for (uint64_t s = 1; s <= 40; ++s) ts.push_back(generate_type(s));
    for (const auto &a : ts) {
        EXPECT_TRUE(type_equal(a, a));
        for (const auto &b : ts) {
            EXPECT_EQ(type_equal(a, b), type_equal(b, a));
            if (!type_equal(a, b)) continue;
            for (const auto &c : ts)
                if (type_equal(b, c)) EXPECT_TRUE(type_equal(a, c));
        }
    }
}

TEST(FreeTypeVars, Examples) {
    EXPECT_TRUE(free_type_vars(ty::boolean()).empty());
    TypePtr f = ty::function({"X"}, {{Direction::In, "x", ty::var("X")}}, ty::var("Y"));
    EXPECT_EQ(free_type_vars(f), std::set<std::string>{"Y"});
    TypePtr r = ty::record({{"a", ty::bit(8)}, {"b", ty::var("X")}});
    EXPECT_EQ(free_type_vars(r), std::set<std::string>{"X"});
}

TEST(Substitute, AvoidsBoundNames) {
    TypePtr s = substitute(ty::record({{"a", ty::var("X")}}), {"X"}, {ty::bit(4)});
    EXPECT_TRUE(type_equal(s, ty::record({{"a", ty::bit(4)}})));
    TypePtr f = substitute(id_fn("X"), {"X"}, {ty::bit(4)});
    EXPECT_TRUE(type_equal(f, id_fn("X")));
}

}  // namespace

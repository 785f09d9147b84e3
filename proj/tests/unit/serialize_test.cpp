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

#include "pcore/frontend.hpp"
#include "pcore/generate.hpp"
#include "pcore/serialize.hpp"

using namespace pcore;

namespace {

TEST(Serialize, FrozenShapes) {
    EXPECT_EQ(dump_json(parse_expression("(bit<8>) 4")),
              R"({"arg":{"kind":"int","value":"4","width":null},"kind":"cast","type":{"kind":"bit","width":8}})");
    EXPECT_EQ(dump_json(parse_expression("x[3:0]")),
              R"({"base":{"kind":"var","name":"x"},"hi":{"kind":"int","value":"3","width":null},"kind":"slice",)"
              R"("lo":{"kind":"int","value":"0","width":null}})");
    EXPECT_EQ(dump_json(val::header(false, {{"v", ty::bit(1), val::integer(0, 1)}})),
              R"({"fields":[{"name":"v","type":{"kind":"bit","width":1},"value":{"kind":"int","value":"0","width":1}}],)"
              R"("kind":"header","valid":false})");
}

TEST(Serialize, IgnoresLayout) {
    Program a = parse_program("bit<8> f(in bit<8> x) { return x + 1w'8; }");
    Program b = parse_program("bit<8>   f(in bit<8> x)\n{\n  return x+1w'8;\n}\n");
    EXPECT_EQ(dump_json(a), dump_json(b));
}

TEST(Serialize, StableAcrossRoundTrip) {
    for (uint64_t s = 1; s <= 50; ++s) {
        GenConfig cfg;
        cfg.seed = s;
        cfg.unions = s % 2 == 1;
        Program p = generate_typed_program(cfg);
        EXPECT_EQ(dump_json(parse_program(pretty_print(p))), dump_json(p)) << "seed " << s;
    }
}

}  // namespace

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

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "pcore/errors.hpp"
#include "pcore/eval.hpp"
#include "pcore/frontend.hpp"
#include "pcore/generate.hpp"
#include "pcore/target.hpp"
#include "pcore/unions.hpp"

using namespace pcore;

namespace {

std::string fixture(const std::string &name) {
    std::ifstream in(std::string(PCORE_FIXTURE_DIR) + "/" + name);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const char *kDecls = "union X { bit<8> a; bool b; } X u; bit<8> x := 9w'8;";

Contexts union_contexts() { return check_program(parse_program(kDecls), three_stage_lite_bootstrap().contexts); }

TEST(TagWidth, Values) {
    EXPECT_EQ(tag_width(1), 1u);
    EXPECT_EQ(tag_width(2), 1u);
    EXPECT_EQ(tag_width(3), 2u);
    EXPECT_EQ(tag_width(4), 2u);
    EXPECT_EQ(tag_width(5), 3u);
    EXPECT_EQ(tag_width(256), 8u);
    EXPECT_EQ(tag_width(257), 9u);
}

TEST(UnionTyping, Statements) {
    Contexts c = union_contexts();
    EXPECT_NO_THROW(check_union_stmt(c, parse_statement("u.a := 5w'8;")));
    EXPECT_THROW(check_union_stmt(c, parse_statement("u.a := true;")), TypeError);
    EXPECT_THROW(check_union_stmt(c, parse_statement("u.c := 5w'8;")), TypeError);
    EXPECT_NO_THROW(check_union_stmt(c, parse_statement("switch (u) { case a: { x := a; } default: {} }")));
    EXPECT_THROW(check_union_stmt(c, parse_statement("switch (u) { case c: {} }")), TypeError);
    EXPECT_THROW(check_union_stmt(c, parse_statement("switch (u) { case a: { x := b; } }")), TypeError);
    CheckOptions off;
    off.allowUnions = false;
    EXPECT_THROW(check_statement(c, parse_statement("u.a := 5w'8;"), off), TypeError);
}

TEST(UnionTyping, NoMemberReads) {
    Contexts c = union_contexts();
    EXPECT_THROW(check_expression(c.sigma, c.gamma, c.delta, parse_expression("u.a")), TypeError);
}

// x after running `setup` then the switch.
ValuePtr run_switch(const std::string &setup, const std::string &sw) {
    std::string src = std::string(kDecls) + "{} main() { " + setup + " " + sw + " }";
    Program p = parse_program(src);
    Bootstrap boot = three_stage_lite_bootstrap();
    check_program(p, boot.contexts);
    auto [m, env] = boot.make_machine({}, 0);
    ThreeStageLite t;
    Evaluator ev(t, {}, 10000);
    RunResult r = run_program(ev, m, boot.runtimeDelta, env, p);
    return m.at(r.env.at("x").loc);
}

TEST(UnionEval, Switch) {
    const std::string sw = "switch (u) { case a: { x := a; } default: { x := 0w'8; } }";
    EXPECT_TRUE(value_equal(run_switch("u.a := 5w'8;", sw), val::integer(5, 8)));
    EXPECT_TRUE(value_equal(run_switch("u.b := true;", sw), val::integer(0, 8)));
    EXPECT_TRUE(value_equal(run_switch("u.b := true;", "switch (u) { case a: { x := a; } }"), val::integer(9, 8)));
}

TEST(Translate, Types) {
    TypePtr u = ty::union_("X", {{"a", ty::bit(8)}, {"b", ty::boolean()}});
    TypePtr want = ty::record({{"tag", ty::bit(1)}, {"a", ty::bit(8)}, {"b", ty::boolean()}});
    EXPECT_TRUE(type_equal(translate_type(u), want));
    EXPECT_TRUE(type_equal(translate_type(ty::record({{"f", u}})), ty::record({{"f", want}})));
    EXPECT_TRUE(type_equal(translate_type(ty::bit(3)), ty::bit(3)));
}

TEST(Translate, Values) {
    TypePtr u = ty::union_("X", {{"a", ty::bit(8)}, {"b", ty::boolean()}});
    Delta d = Delta().with_def("X", u);
    auto uv = std::make_shared<Value>(*val::union_("X", "a", val::integer(5, 8)));
    uv->elemType = u;
    ValuePtr got = translate_value(d, uv);
    ValuePtr want = val::record({{"tag", val::integer(0, 1)}, {"a", val::integer(5, 8)}, {"b", val::boolean(false)}});
    EXPECT_TRUE(value_equal(got, want)) << show_value(got);
}

TEST(Translate, UnionFreeProgramsAreUnchanged) {
    for (uint64_t s = 1; s <= 30; ++s) {
        GenConfig cfg;
        cfg.seed = s;
        Program p = generate_typed_program(cfg);
        Program t = translate_program(p, three_stage_lite_bootstrap().contexts);
        EXPECT_TRUE(equal(t, p)) << "seed " << s;
        EXPECT_TRUE(diff_union_semantics(p).pass) << "seed " << s;
    }
}

TEST(Translate, SwitchShape) {
    Program p = parse_program(std::string(kDecls) + "{} main() { switch (u) { case a: { x := a; } default: {} } }");
    Program t = translate_program(p, three_stage_lite_bootstrap().contexts);
    std::string text = pretty_print(t);
    EXPECT_NE(text.find("$tmp"), std::string::npos);
    EXPECT_NE(text.find(".tag == 0w'1"), std::string::npos) << text;
    EXPECT_EQ(text.find("union"), std::string::npos);
    LexOptions o;
    o.allowReserved = true;
    CheckOptions off;
    off.allowUnions = false;
    EXPECT_NO_THROW(check_program(parse_program(text, o), three_stage_lite_bootstrap().contexts, off));
}

TEST(Diff, DemoProgram) {
    Program p = parse_program(fixture("union_demo.pcore"));
    DiffVerdict ok = diff_union_semantics(p);
    EXPECT_TRUE(ok.pass) << ok.reason;
    DiffOptions wrong;
    wrong.translate.wrongTag = true;
    DiffVerdict bad = diff_union_semantics(p, wrong);
    EXPECT_FALSE(bad.pass);
    EXPECT_FALSE(bad.reason.empty());
}

TEST(EnvStore, Order) {
    Machine m1;
    Env e1;
    e1["x"] = {m1.fresh(val::integer(1, 8), ty::bit(8)), false};
    EXPECT_TRUE(env_store_le(m1, e1, m1, e1));
    Machine m2 = m1;
    Env e2 = e1;
    e2["tmp"] = {m2.fresh(val::boolean(true), ty::boolean()), false};
    EXPECT_TRUE(env_store_le(m1, e1, m2, e2));
    EXPECT_FALSE(env_store_le(m2, e2, m1, e1));
    Machine m3 = m1;
    m3.set(e1.at("x").loc, val::integer(2, 8));
    EXPECT_FALSE(env_store_le(m1, e1, m3, e1));
}

}  // namespace

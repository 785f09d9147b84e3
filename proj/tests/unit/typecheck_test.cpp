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
#include "pcore/frontend.hpp"
#include "pcore/target.hpp"
#include "pcore/typecheck.hpp"

using namespace pcore;

namespace {

Contexts checked(const std::string &src) { return check_program(parse_program(src), three_stage_lite_bootstrap().contexts); }

TEST(Simplify, NestedDefinitions) {
    Contexts c = check_program(parse_program("const int c = 7; typedef bool B;"));
    TypePtr fn = ty::function({}, {{Direction::In, "x", ty::bit_expr(parse_expression("c + 1"))}}, ty::var("B"));
    Delta d = c.delta.with_def("C", fn);
    TypePtr got = simplify_type(c.sigma, d, ty::var("C"));
    TypePtr want = ty::function({}, {{Direction::In, "x", ty::bit(8)}}, ty::boolean());
    EXPECT_TRUE(type_equal(got, want));
    EXPECT_TRUE(type_equal(simplify_type({}, {}, ty::bit(8)), ty::bit(8)));
    EXPECT_TRUE(type_equal(simplify_type({}, {}, parse_type("bit<3+5>")), ty::bit(8)));
    EXPECT_THROW(simplify_type({}, {}, ty::var("Nope")), UnboundTypeVar);
}

TEST(Cteval, Examples) {
    Sigma s{{"w", val::integer(8, std::nullopt)}};
    EXPECT_TRUE(value_equal(cteval(s, parse_expression("w")), val::integer(8, std::nullopt)));
    EXPECT_TRUE(value_equal(cteval({}, parse_expression("6*8-1")), val::integer(47, std::nullopt)));
    EXPECT_TRUE(value_equal(cteval({}, parse_expression("true")), val::boolean(true)));
    EXPECT_THROW(cteval({}, parse_expression("x")), NotCompileTime);
    EXPECT_THROW(cteval({}, parse_expression("f()")), NotCompileTime);
}

TEST(CheckExpression, SliceOfConstantWidth) {
    Contexts c = check_program(parse_program("const int n = 6; bit<48> bits := 0w'48;"));
    TypedExpr te = check_expression(c.sigma, c.gamma, c.delta, parse_expression("bits[n*8-1:(n-1)*8]"));
    EXPECT_TRUE(type_equal(te.type, ty::bit(8)));
    EXPECT_EQ(te.dir, Direction::InOut);
    EXPECT_THROW(check_expression(c.sigma, c.gamma, c.delta, parse_expression("bits[0:7]")), TypeError);
    EXPECT_THROW(check_expression(c.sigma, c.gamma, c.delta, parse_expression("bits[48:0]")), TypeError);
}

TEST(CheckExpression, Directions) {
    Gamma g{{"x", ty::bit(8)}, {"c", ty::integer()}};
    Sigma s{{"c", val::integer(1, std::nullopt)}};
    EXPECT_EQ(check_expression(s, g, {}, parse_expression("x")).dir, Direction::InOut);
    EXPECT_EQ(check_expression(s, g, {}, parse_expression("c")).dir, Direction::In);
    EXPECT_EQ(check_expression(s, g, {}, parse_expression("x + 1w'8")).dir, Direction::In);
    EXPECT_THROW(check_expression(s, g, {}, parse_expression("x + 1")), TypeError);
}

TEST(CheckStatement, Assignments) {
    Contexts c = check_program(parse_program("const int k = 1; bit<8> x := 0w'8;"));
    Contexts after = check_statement(c, parse_statement("x := 0w'8;"));
    EXPECT_EQ(after.gamma.size(), c.gamma.size());
    EXPECT_THROW(check_statement(c, parse_statement("k := 1;")), TypeError);
    EXPECT_THROW(check_statement(c, parse_statement("x := true;")), TypeError);
}

TEST(CheckStatement, TableCall) {
    Contexts c = checked(
        "control C()() { {} a() {} table acl { key = {} actions = { a(); } } apply { acl(); } }");
    EXPECT_EQ(c.gamma.count("C"), 1u);
    EXPECT_THROW(checked("control C()() { apply { acl(); } }"), TypeError);
}

TEST(CheckVarDecl, ConstantWidths) {
    Contexts c = check_program(parse_program("const int w = 8;"));
    EXPECT_TRUE(value_equal(c.sigma.at("w"), val::integer(8, std::nullopt)));
    EXPECT_TRUE(type_equal(c.gamma.at("w"), ty::integer()));
    c = check_program(parse_program("const int w = 8; bit<w> x := 1w'8; bit<8> y := x;"));
    EXPECT_TRUE(type_equal(c.gamma.at("x"), ty::bit(8)));
    EXPECT_THROW(check_program(parse_program("typedef bit<8> T; T(1w'8) z;")), TypeError);
}

TEST(CheckObjectDecl, ForwardTable) {
    Contexts c = checked(R"(
typedef record { bit<9> port; } meta_t;
control Fwd(inout meta_t meta)() {
    {} set_port(inout meta_t m, in bit<9> p) { m.port := p; }
    {} drop_it() { drop(); }
    table forward {
        key = { meta.port : exact; }
        actions = { set_port(meta, p: bit<9>); drop_it(); }
        default_action = drop_it();
    }
    apply { forward(); }
}
)");
    EXPECT_EQ(c.gamma.at("Fwd")->kind, TypeKind::Constructor);
}

TEST(CheckObjectDecl, ExitFunction) {
    Contexts c = checked(R"(
typedef header { bit<8> v; } ip_t;
typedef record { ip_t ip; } hdr_t;
{} f(in hdr_t h) {
    if (!is_valid<:ip_t:>(h.ip)) {
        exit;
    } else {
        drop();
    }
}
)");
    TypePtr want = ty::function({}, {{Direction::In, "h", ty::record({{"ip", ty::header({{"v", ty::bit(8)}})}})}},
                                ty::unit());
    EXPECT_TRUE(type_equal(c.gamma.at("f"), want));
}

TEST(CheckObjectDecl, MissingReturn) {
    EXPECT_THROW(checked("bit<8> f(in bool c) { if (c) { return 1w'8; } else {} }"), MissingReturn);
    EXPECT_NO_THROW(checked("bit<8> f(in bool c) { if (c) { return 1w'8; } else { exit; } }"));
}

TEST(CheckObjectDecl, NoRecursion) {
    EXPECT_THROW(checked("bit<8> f(in bit<8> x) { return f(x); }"), TypeError);
}

TEST(CheckAction, ControlPlaneParams) {
    EXPECT_NO_THROW(checked("control C()() { {} allow() {} table t { key = {} actions = { allow(); } } apply {} }"));
    EXPECT_THROW(
        checked("control C()() { {} a(out bit<9> p) {} table t { key = {} actions = { a(p: bit<9>); } } apply {} }"),
        TypeError);
}

TEST(CheckTypeDecl, OpenEnumsExtend) {
    Contexts c = check_program(parse_program("error {Overflow} error {BadHeader}"));
    auto m = c.delta.open_enum_members(kErrorName);
    EXPECT_EQ(m, (std::vector<std::string>{"Overflow", "BadHeader"}));
    EXPECT_THROW(check_program(parse_program("error {A, A}")), DuplicateEnumMember);
    c = check_program(parse_program("error {A, B} error {B, C}"));
    EXPECT_EQ(c.delta.open_enum_members(kErrorName), (std::vector<std::string>{"A", "B", "C"}));
}

TEST(CheckTypeDecl, Typedefs) {
    Contexts c = check_program(parse_program("typedef bit<4+4> T;"));
    const DeltaNode *n = c.delta.lookup("T");
    ASSERT_NE(n, nullptr);
    EXPECT_TRUE(type_equal(n->def, ty::bit(8)));
    EXPECT_THROW(check_program(parse_program("enum Suit {H, H}")), DuplicateEnumMember);
}

TEST(Returns, Analysis) {
    EXPECT_TRUE(returns_analysis(parse_statement("{ return 1; }")));
    EXPECT_TRUE(returns_analysis(parse_statement("{ if (c) { return 1; } else { exit; } }")));
    EXPECT_FALSE(returns_analysis(parse_statement("{ if (c) { return 1; } else {} }")));
    EXPECT_FALSE(returns_analysis(parse_statement("{}")));
    EXPECT_TRUE(returns_analysis(parse_statement("{ {} return 1; }")));
}

TEST(CheckValue, Examples) {
    Xi xi;
    TypePtr hdr = ty::header({{"port", ty::bit(7)}, {"bos", ty::bit(1)}});
    ValuePtr h = val::header(true, {{"port", ty::bit(7), val::integer(1, 7)}, {"bos", ty::bit(1), val::integer(1, 1)}});
    EXPECT_TRUE(check_value(xi, {}, {}, h, hdr));
    ValuePtr s2 = val::stack(ty::bit(1), {val::integer(0, 1), val::integer(0, 1)});
    EXPECT_FALSE(check_value(xi, {}, {}, s2, ty::stack(ty::bit(1), 3)));
    EXPECT_TRUE(check_value(xi, {}, {}, s2, ty::stack(ty::bit(1), 2)));
    EXPECT_FALSE(check_value(xi, {}, {}, val::integer(256, 8), ty::bit(8)));
    EXPECT_FALSE(check_value(xi, {}, {}, val::boolean(true), ty::bit(1)));
}

TEST(CheckMachine, Examples) {
    Machine m;
    Env env;
    EXPECT_TRUE(check_machine({}, {}, {}, m, env));
    Gamma g{{"x", ty::bit(8)}};
    EXPECT_FALSE(check_machine({}, g, {}, m, env));
    env["x"] = {m.fresh(val::integer(3, 8), ty::bit(8)), false};
    EXPECT_TRUE(check_machine({}, g, {}, m, env));
    m.set(env["x"].loc, val::boolean(true));
    EXPECT_FALSE(check_machine({}, g, {}, m, env));
}

TEST(CheckProgram, Rejections) {
    EXPECT_THROW(checked("bit<8> x := 0w'8; bit<8> x := 1w'8;"), TypeError);
    EXPECT_THROW(checked("{} main() { nope(); }"), TypeError);
    EXPECT_THROW(checked("bit<8> x := true;"), TypeError);
}

}  // namespace

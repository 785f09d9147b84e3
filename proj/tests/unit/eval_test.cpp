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
#include "pcore/target.hpp"
#include "pcore/typecheck.hpp"

using namespace pcore;

namespace {

std::string fixture(const std::string &name) {
    std::ifstream in(std::string(PCORE_FIXTURE_DIR) + "/" + name);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// A checked program evaluated under three-stage-lite with zero havoc.
struct Session {
    Bootstrap boot = three_stage_lite_bootstrap();
    Machine m;
    Env env;
    ThreeStageLite target;
    Evaluator ev;
    RunResult result;

    explicit Session(const std::string &src, EvalHooks hooks = {}, bool check = true)
        : ev(target, std::move(hooks), 100000) {
        Program p = parse_program(src);
        if (check) check_program(p, boot.contexts);
        std::tie(m, env) = boot.make_machine({}, 0);
        result = run_program(ev, m, boot.runtimeDelta, env, p);
    }
    ValuePtr read(const std::string &name) const { return m.at(result.env.at(name).loc); }
    ExprOutcome eval(const std::string &e) { return ev.eval_expression(m, result.delta, result.env, parse_expression(e)); }
};

TEST(Eval, CopyOutAliasing) {
    Session normal(fixture("aliasing.pcore"));
    EXPECT_TRUE(value_equal(normal.result.mainResult, val::integer(2, 8)));
    EXPECT_TRUE(value_equal(normal.read("x"), val::integer(2, 8)));
    EvalHooks rev;
    rev.copyOutReverse = true;
    Session reversed(fixture("aliasing.pcore"), rev);
    EXPECT_TRUE(value_equal(reversed.result.mainResult, val::integer(0, 8)));
}

TEST(Eval, InvalidHeaderReadUsesHavoc) {
    Session r("typedef header { bit<7> port; bit<1> bos; } hop; hop h;");
    ExprOutcome o = r.eval("h.port");
    ASSERT_FALSE(o.exit);
    EXPECT_TRUE(value_equal(o.value, val::integer(0, 7)));
}

TEST(Eval, ExitSkipsTheRest) {
    Session r(R"(
typedef header { bit<8> v; } ip_t;
typedef record { ip_t ip; } hdr_t;
bit<8> calls := 0w'8;
{} f(in hdr_t h) {
    calls := calls + 1w'8;
    if (!is_valid<:ip_t:>(h.ip)) {
        exit;
    } else {}
}
{} main() {
    hdr_t h;
    f(h);
    f(h);
}
)");
    EXPECT_EQ(r.result.sig.kind, Signal::Kind::Exit);
    EXPECT_TRUE(value_equal(r.read("calls"), val::integer(1, 8)));
}

TEST(Eval, LValues) {
    Session r("const int i = 2; bit<8>[4] hops; bit<16> b := 0xFFFFw'16;");
    auto lv = r.ev.eval_lvalue(r.m, r.result.delta, r.result.env, parse_expression("hops[i]"));
    ASSERT_TRUE(lv);
    EXPECT_EQ(lv->kind, LValue::Kind::Elem);
    EXPECT_EQ(lv->index, 2);
    EXPECT_EQ(lv->base->kind, LValue::Kind::Var);
    EXPECT_EQ(lv->base->loc, r.result.env.at("hops").loc);
    lv = r.ev.eval_lvalue(r.m, r.result.delta, r.result.env, parse_expression("b[7:0]"));
    ASSERT_TRUE(lv);
    EXPECT_EQ(lv->kind, LValue::Kind::BitRange);
    EXPECT_EQ(lv->hi, 7u);
    EXPECT_EQ(lv->lo, 0u);
    r.ev.write_lvalue(r.m, r.result.delta, *lv, val::integer(0, 8));
    EXPECT_TRUE(value_equal(r.read("b"), val::integer(0xFF00, 16)));
}

TEST(Eval, WriteToInvalidHeaderIsDropped) {
    Session r("typedef header { bit<8> v; } h_t; h_t h; bit<8> x := 1w'8;");
    ValuePtr before = r.read("h");
    StmtOutcome o = r.ev.eval_statement(r.m, r.result.delta, r.result.env, parse_statement("h.v := 5w'8;"));
    EXPECT_TRUE(o.sig.is_continue());
    EXPECT_TRUE(value_equal(r.read("h"), before));
    auto lv = r.ev.eval_lvalue(r.m, r.result.delta, r.result.env, parse_expression("x"));
    r.ev.write_lvalue(r.m, r.result.delta, *lv, val::integer(5, 8));
    EXPECT_TRUE(value_equal(r.read("x"), val::integer(5, 8)));
    EXPECT_TRUE(value_equal(r.read("h"), before));
}

TEST(Eval, CopyOutOrder) {
    Session r("bit<8> x := 0w'8;");
    Loc l1 = r.m.fresh(val::integer(0, 8), ty::bit(8));
    Loc l2 = r.m.fresh(val::integer(2, 8), ty::bit(8));
    auto lv = *r.ev.eval_lvalue(r.m, r.result.delta, r.result.env, parse_expression("x"));
    r.ev.copy_out(r.m, r.result.delta, {{lv, l1}, {lv, l2}});
    EXPECT_TRUE(value_equal(r.read("x"), val::integer(2, 8)));
    size_t n = r.m.store.size();
    r.ev.copy_out(r.m, r.result.delta, {});
    EXPECT_EQ(r.m.store.size(), n);
    EXPECT_TRUE(value_equal(r.read("x"), val::integer(2, 8)));
}

TEST(Eval, Statements) {
    Session r("bit<8> x := 0w'8;");
    StmtOutcome o = r.ev.eval_statement(r.m, r.result.delta, r.result.env, parse_statement("{}"));
    EXPECT_TRUE(o.sig.is_continue());
    o = r.ev.eval_statement(r.m, r.result.delta, r.result.env, parse_statement("{ bit<8> t := 1w'8; x := t; }"));
    EXPECT_TRUE(o.sig.is_continue());
    EXPECT_TRUE(env_equal(o.env, r.result.env));
    EXPECT_TRUE(value_equal(r.read("x"), val::integer(1, 8)));
    o = r.ev.eval_statement(r.m, r.result.delta, r.result.env, parse_statement("exit;"));
    EXPECT_EQ(o.sig.kind, Signal::Kind::Exit);
}

TEST(Eval, Declarations) {
    Session r(R"(
const int w = 8;
control C()(bit<8> k) {
    {} a() {}
    table t { key = {} actions = { a(); } }
    apply { t(); }
}
C(1w'8) i1;
C(2w'8) i2;
)");
    EXPECT_TRUE(value_equal(r.read("w"), val::integer(8, std::nullopt)));
    ValuePtr c1 = r.read("i1"), c2 = r.read("i2");
    ASSERT_TRUE(c1->env && c2->env);
    ASSERT_TRUE(c1->env->count("k") && c2->env->count("k"));
    Loc k1 = c1->env->at("k").loc, k2 = c2->env->at("k").loc;
    EXPECT_NE(k1, k2);
    EXPECT_TRUE(value_equal(r.m.at(k1), val::integer(1, 8)));
    EXPECT_TRUE(value_equal(r.m.at(k2), val::integer(2, 8)));
}

TEST(Eval, TableDeclaration) {
    Session r("control C()() { {} a() {} table acl { key = {} actions = { a(); } } apply { acl(); } } C() i; "
          "{} main() { i(); }");
    EXPECT_TRUE(r.result.sig.is_continue() || r.result.sig.kind == Signal::Kind::Return);
    EXPECT_EQ(r.m.target->tables.size(), 1u);
}

TEST(Budget, EmptyBlock) {
    Session r("");
    BudgetOutcome b = run_with_budget(
        r.ev, [&] { r.ev.eval_statement(r.m, r.result.delta, r.result.env, parse_statement("{}")); }, 10);
    EXPECT_FALSE(b.exhausted);
    EXPECT_EQ(b.steps, 1u);
    EXPECT_EQ(r.ev.max_steps(), 100000u);
}

// The checker rejects recursion, so the loop is tied by hand: the closure's
// environment is patched to see its own location.
TEST(Budget, HandTiedRecursion) {
    Session r("bit<8> g(in bit<8> x) { return x; }");
    Loc self = r.result.env.at("g").loc;
    auto patched = std::make_shared<Value>(*r.m.at(self));
    auto env = std::make_shared<Env>(*patched->env);
    (*env)["f"] = {self, false};
    patched->env = env;
    patched->body = parse_statement("{ return f(x); }");
    r.m.set(self, patched);
    BudgetOutcome b = run_with_budget(
        r.ev, [&] { r.eval("g(1w'8)"); }, 10000);
    EXPECT_TRUE(b.exhausted);
}

}  // namespace

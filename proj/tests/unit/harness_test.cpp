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
#include "pcore/frontend.hpp"
#include "pcore/generate.hpp"
#include "pcore/soundness.hpp"
#include "pcore/stf.hpp"
#include "pcore/typecheck.hpp"

using namespace pcore;

namespace {

std::string fixture(const std::string &name) {
    std::ifstream in(std::string(PCORE_FIXTURE_DIR) + "/" + name);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Program routing() { return parse_program(fixture("source_routing.pcore")); }

TEST(Stf, Parse) {
    StfScript s = parse_stf(fixture("source_routing.stf"));
    ASSERT_EQ(s.commands.size(), 3u);
    EXPECT_EQ(s.commands[0].kind, StfCommand::Kind::Add);
    EXPECT_EQ(s.commands[0].rule.table, "MyPipe.acl");
    EXPECT_EQ(s.commands[0].rule.keys.size(), 2u);
    EXPECT_EQ(s.commands[1].kind, StfCommand::Kind::Packet);
    EXPECT_EQ(s.commands[1].bytes, (std::vector<uint8_t>{0x03, 0xFF}));
    EXPECT_EQ(s.commands[2].port, 1u);
}

TEST(Stf, ParseErrors) {
    EXPECT_THROW(parse_stf("frobnicate 1 2"), StfParseError);
    EXPECT_THROW(parse_stf("packet 0 0G"), StfParseError);
    EXPECT_THROW(parse_stf("packet x 00"), StfParseError);
    EXPECT_THROW(parse_stf("add acl 1 allow("), StfParseError);
    try {
        parse_stf("packet 0 00\nexpect");
        FAIL() << "expected StfParseError";
    } catch (const StfParseError &e) {
        EXPECT_EQ(e.pos().line, 2);
    }
}

TEST(Stf, SourceRouting) {
    RunReport r = run_stf(routing(), parse_stf(fixture("source_routing.stf")));
    EXPECT_TRUE(r.passed()) << report_text(r);
    ASSERT_EQ(r.packets.size(), 1u);
    EXPECT_EQ(r.packets[0].egress, 1u);
    EXPECT_EQ(r.packets[0].output, std::vector<uint8_t>{0xFF});
}

TEST(Stf, WithoutTheRuleTheDefaultDenies) {
    RunReport r = run_stf(routing(), parse_stf("packet 0 03FF\nexpect 1 FF\n"));
    EXPECT_FALSE(r.passed());
    ASSERT_EQ(r.packets.size(), 1u);
    EXPECT_EQ(r.packets[0].egress, 0xFFu);
}

TEST(Stf, EmptyScript) {
    RunReport r = run_stf(routing(), parse_stf(""));
    EXPECT_TRUE(r.packets.empty());
    EXPECT_TRUE(r.expects.empty());
    EXPECT_TRUE(r.passed());
}

TEST(Stf, Deterministic) {
    StfScript s = parse_stf(fixture("source_routing.stf") + "packet 0 0102FF\npacket 2 81AA\n");
    StfOptions o;
    o.havoc = HavocOracle::seeded(3);
    EXPECT_EQ(report_json(run_stf(routing(), s, o)), report_json(run_stf(routing(), s, o)));
}

TEST(Stf, IllTypedProgram) {
    EXPECT_THROW(run_stf(parse_program(fixture("ill_typed.pcore")), parse_stf("")), TypeError);
}

TEST(Generator, DepthOneIsConstants) {
    GenConfig cfg;
    cfg.maxDepth = 1;
    Program p = generate_typed_program(cfg);
    ASSERT_FALSE(p.decls.empty());
    for (const auto &d : p.decls) EXPECT_EQ(d->kind, DeclKind::Const);
    EXPECT_NO_THROW(check_program(p, three_stage_lite_bootstrap().contexts));
    cfg.maxDepth = 0;
    EXPECT_THROW(generate_typed_program(cfg), std::invalid_argument);
}

TEST(Generator, Deterministic) {
    GenConfig cfg;
    cfg.seed = 77;
    cfg.unions = true;
    EXPECT_EQ(pretty_print(generate_typed_program(cfg)), pretty_print(generate_typed_program(cfg)));
    GenConfig other = cfg;
    other.seed = 78;
    EXPECT_NE(pretty_print(generate_typed_program(cfg)), pretty_print(generate_typed_program(other)));
}

TEST(Generator, ProgramsTypecheck) {
    CheckOptions o;
    o.allowUnions = true;
    for (uint64_t s = 1; s <= 200; ++s) {
        GenConfig cfg;
        cfg.seed = s;
        cfg.unions = s % 3 == 0;
        EXPECT_NO_THROW(check_program(generate_typed_program(cfg), three_stage_lite_bootstrap().contexts, o))
            << "seed " << s;
    }
}

TEST(Generator, OutCallCoverage) {
    int withOut = 0;
    for (uint64_t s = 1; s <= 1000; ++s) {
        GenConfig cfg;
        cfg.seed = s;
        if (has_out_call(generate_typed_program(cfg))) ++withOut;
    }
    EXPECT_GE(withOut, 100);
}

TEST(Soundness, SmallSuite) {
    GenConfig cfg;
    cfg.unions = true;
    SoundnessStats st = run_soundness_suite(100, cfg);
    EXPECT_TRUE(st.ok()) << st.failures[0].seed << ": " << st.failures[0].reason;
    EXPECT_EQ(st.programs, 100u);
    EXPECT_EQ(st.exhausted, 0u);
}

TEST(Soundness, IllTypedHavocIsCaught) {
    SoundnessOptions o;
    o.makeTarget = make_ill_typed_havoc_target;
    SoundnessStats st = run_soundness_suite(100, GenConfig{}, o);
    EXPECT_FALSE(st.ok());
}

TEST(Soundness, RejectsEmptySuite) { EXPECT_THROW(run_soundness_suite(0, GenConfig{}), std::invalid_argument); }

TEST(Soundness, TinyBudgetIsReported) {
    SoundnessOptions o;
    o.maxSteps = 3;
    GenConfig cfg;
    cfg.seed = 5;
    SoundnessStats st = run_soundness_suite(20, cfg, o);
    EXPECT_GT(st.exhausted, 0u);
    EXPECT_FALSE(st.ok());
}

}  // namespace

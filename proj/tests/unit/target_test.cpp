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
#include "pcore/eval.hpp"
#include "pcore/frontend.hpp"
#include "pcore/generate.hpp"
#include "pcore/ops.hpp"
#include "pcore/target.hpp"
#include "pcore/typecheck.hpp"

using namespace pcore;

namespace {

struct AclQuery {
    TargetState ts;
    std::vector<ActionRef> actions;
    TableQuery q;

    AclQuery(uint64_t in, uint64_t out) {
        ts.tables[5] = {"acl", "MyPipe", "pipe"};
        actions.push_back({"allow", {}, {}, {}});
        actions.push_back({"deny", {}, {}, {}});
        q.id = 5;
        q.keys = {val::integer(in, 8), val::integer(out, 8)};
        q.keyNames = {"meta.ingress_port", "meta.egress_port"};
        q.matchKinds = {"exact", "exact"};
        q.actions = &actions;
        q.ctrlTypes = {{}, {}};
        q.fallback = {"deny", {}};
    }
};

CpRule rule(std::string table, std::string a, std::string b, std::string action) {
    return {std::move(table), {{"", std::move(a)}, {"", std::move(b)}}, std::move(action), {}};
}

TEST(ControlPlane, Lookup) {
    ControlPlane cp;
    cp.add(rule("MyPipe.acl", "0", "1", "MyPipe.allow"));
    AclQuery hit(0, 1), miss(3, 3);
    EXPECT_EQ(cp_lookup(cp, hit.ts, hit.q).action, "allow");
    EXPECT_EQ(cp_lookup(cp, miss.ts, miss.q).action, "deny");
}

TEST(ControlPlane, FirstInsertedWins) {
    ControlPlane cp;
    cp.add(rule("acl", "0", "1", "deny"));
    cp.add(rule("acl", "0", "1", "allow"));
    AclQuery q(0, 1);
    EXPECT_EQ(cp_lookup(cp, q.ts, q.q).action, "deny");
}

TEST(ControlPlane, Errors) {
    AclQuery q(0, 1);
    ControlPlane unknownTable;
    unknownTable.add(rule("nope", "0", "1", "allow"));
    EXPECT_EQ(cp_lookup(unknownTable, q.ts, q.q).action, "deny");
    TargetState empty;
    EXPECT_THROW(cp_lookup(unknownTable, empty, q.q), ControlPlaneError);
    ControlPlane unknownAction;
    unknownAction.add(rule("acl", "0", "1", "launch"));
    EXPECT_THROW(cp_lookup(unknownAction, q.ts, q.q), ControlPlaneError);
    q.q.matchKinds = {"lpm", "exact"};
    ControlPlane ok;
    ok.add(rule("acl", "0", "1", "allow"));
    EXPECT_THROW(cp_lookup(ok, q.ts, q.q), ControlPlaneError);
}

TEST(ControlPlane, Json) {
    ControlPlane cp = ControlPlane::from_json(
        R"([{"table":"MyPipe.acl","keys":["0",{"name":"egress_port","value":"0x01"}],"action":"allow","args":[]}])");
    ASSERT_EQ(cp.rules().size(), 1u);
    EXPECT_EQ(cp.rules()[0].keys[1].name, "egress_port");
    AclQuery q(0, 1);
    EXPECT_EQ(cp_lookup(cp, q.ts, q.q).action, "allow");
    EXPECT_THROW(ControlPlane::from_json("{"), ControlPlaneError);
}

TEST(Havoc, Modes) {
    Delta d;
    HavocOracle zero = HavocOracle::zero();
    EXPECT_TRUE(value_equal(zero.draw(d, ty::bit(8), 0), val::integer(0, 8)));
    HavocOracle s = HavocOracle::seeded(42);
    EXPECT_TRUE(value_equal(s.draw(d, ty::bit(8), 3), s.draw(d, ty::bit(8), 3)));
    TypePtr hdr = ty::header({{"port", ty::bit(7)}, {"bos", ty::bit(1)}});
    for (uint64_t i = 0; i < 50; ++i) {
        EXPECT_TRUE(check_value(Xi{}, {}, d, s.draw(d, hdr, i), hdr));
        EXPECT_TRUE(check_value(Xi{}, {}, d, zero.draw(d, hdr, i), hdr));
    }
    EXPECT_THROW(zero.draw(d.with_var("X"), ty::var("X"), 0), Uninhabitable);
    EXPECT_EQ(parse_havoc_mode("seed:9").seed(), 9u);
    EXPECT_EQ(parse_havoc_mode("zero").mode(), HavocOracle::Mode::Zero);
}

TEST(Havoc, SeededDrawsAreTyped) {
    for (uint64_t i = 1; i <= 200; ++i) {
        TypePtr t = generate_type(i);
        EXPECT_TRUE(check_value(Xi{}, {}, Delta(), HavocOracle::seeded(i).draw(Delta(), t, i), t)) << pretty_print(t);
        EXPECT_TRUE(value_equal(HavocOracle::zero().draw(Delta(), t, i), init_value(Delta(), t)));
    }
}

TEST(Packet, Helpers) {
    EXPECT_EQ(parse_hex("03FF"), (std::vector<uint8_t>{0x03, 0xFF}));
    EXPECT_EQ(to_hex({0x03, 0xFF}), "03FF");
    auto bits = bytes_to_bits({0x80});
    ASSERT_EQ(bits.size(), 8u);
    EXPECT_TRUE(bits[0]);
    EXPECT_FALSE(bits[7]);
    EXPECT_EQ(bits_to_bytes(bits), std::vector<uint8_t>{0x80});
    EXPECT_EQ(wire_width(ty::header({{"a", ty::bit(7)}, {"b", ty::bit(1)}})), 8u);
    EXPECT_FALSE(wire_width(ty::integer()));
}

// Runs the program's declarations on a machine holding `packet`.
struct NativeRun {
    Bootstrap boot = three_stage_lite_bootstrap();
    Machine m;
    Env env;
    ThreeStageLite target;
    RunResult r;

    NativeRun(const std::string &src, std::vector<uint8_t> packet) {
        Program p = parse_program(src);
        check_program(p, boot.contexts);
        std::tie(m, env) = boot.make_machine(packet, 0);
        Evaluator ev(target, {}, 100000);
        r = run_program(ev, m, boot.runtimeDelta, env, p);
    }
    ValuePtr read(const std::string &n) const { return m.at(r.env.at(n).loc); }
};

TEST(Natives, ExtractBits) {
    NativeRun n("bit<8> v; bool ok := extract_bits<:bit<8>:>(v);", {0x03, 0xFF});
    EXPECT_TRUE(value_equal(n.read("v"), val::integer(3, 8)));
    EXPECT_TRUE(value_equal(n.read("ok"), val::boolean(true)));
    EXPECT_EQ(n.m.target->packet.cursor, 8u);
}

TEST(Natives, ExtractPastTheEnd) {
    NativeRun n("bit<16> v; bool ok := extract_bits<:bit<16>:>(v);", {0x03});
    EXPECT_TRUE(value_equal(n.read("ok"), val::boolean(false)));
    EXPECT_EQ(n.m.target->packet.cursor, 0u);
}

TEST(Natives, EmitSkipsInvalidHeaders) {
    NativeRun n(
        "typedef header { bit<8> v; } h_t; h_t h; h_t g := (h_t) {v = 0xABw'8};"
        "{} main() { emit_bits<:h_t:>(h); emit_bits<:h_t:>(g); set_egress(4w'8); }",
        {});
    EXPECT_EQ(bits_to_bytes(n.m.target->packet.output), std::vector<uint8_t>{0xAB});
    EXPECT_EQ(n.m.target->packet.egress, 4u);
}

TEST(Natives, Stacks) {
    NativeRun n(R"(
typedef header { bit<8> v; } h_t;
h_t[3] s;
bool before := is_valid<:h_t:>(s[0w'32]);
{} main() {
    s[0w'32] := (h_t) {v = 0w'8};
    s[1w'32] := (h_t) {v = 1w'8};
    s[2w'32] := (h_t) {v = 2w'8};
    pop_front<:h_t[3]:>(s, 1);
}
)",
                {});
    EXPECT_TRUE(value_equal(n.read("before"), val::boolean(false)));
    ValuePtr s = n.read("s");
    ASSERT_EQ(s->elems.size(), 3u);
    auto hv = [](uint64_t v) { return val::header(true, {{"v", ty::bit(8), val::integer(v, 8)}}); };
    EXPECT_TRUE(value_equal(s->elems[0], hv(1)));
    EXPECT_TRUE(value_equal(s->elems[1], hv(2)));
    EXPECT_FALSE(s->elems[2]->b);
}

TEST(Bootstrap, ChecksTheSourceRoutingProgram) {
    Program p = parse_program(R"(
typedef header { bit<7> port; bit<1> bos; } hop;
{} main() {
    hop h;
    set_valid<:hop:>(h);
    bit<8> p := get_ingress();
    set_egress(p);
    drop();
}
)");
    EXPECT_NO_THROW(check_program(p, three_stage_lite_bootstrap().contexts));
    EXPECT_THROW(check_program(p), TypeError);
}

}  // namespace

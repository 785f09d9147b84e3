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

// Acceptance criteria 1-9. One PASS/FAIL line each; exit status 1 if any fail.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "pcore/errors.hpp"
#include "pcore/eval.hpp"
#include "pcore/frontend.hpp"
#include "pcore/generate.hpp"
#include "pcore/ops.hpp"
#include "pcore/soundness.hpp"
#include "pcore/stf.hpp"
#include "pcore/target.hpp"
#include "pcore/typecheck.hpp"
#include "pcore/unions.hpp"

using namespace pcore;

namespace {

std::string fixture(const std::string &name) {
    std::ifstream in(std::string(PCORE_FIXTURE_DIR) + "/" + name);
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Result {
    bool pass = false;
    std::string detail;
};

Result c1_source_routing() {
    auto t0 = std::chrono::steady_clock::now();
    Program p = parse_program(fixture("source_routing.pcore"));
    RunReport r = run_stf(p, parse_stf(fixture("source_routing.stf")));
    double s = seconds_since(t0);
    bool out = r.packets.size() == 1 && r.packets[0].egress == 1u && r.packets[0].output == std::vector<uint8_t>{0xFF};
    std::ostringstream d;
    d << "expects " << (r.passed() ? "pass" : "fail") << ", port "
      << (r.packets.empty() || !r.packets[0].egress ? std::string("-") : std::to_string(*r.packets[0].egress))
      << " output " << (r.packets.empty() ? "" : to_hex(r.packets[0].output)) << ", " << s << "s";
    return {r.passed() && out && s < 1.0, d.str()};
}

ValuePtr run_main(const Program &p, EvalHooks hooks) {
    Bootstrap boot = three_stage_lite_bootstrap();
    check_program(p, boot.contexts);
    auto [m, env] = boot.make_machine({}, 0);
    ThreeStageLite target;
    Evaluator ev(target, std::move(hooks), 1000000);
    return run_program(ev, m, boot.runtimeDelta, env, p).mainResult;
}

Result c2_aliasing() {
    Program p = parse_program(fixture("aliasing.pcore"));
    ValuePtr normal = run_main(p, {});
    EvalHooks rev;
    rev.copyOutReverse = true;
    ValuePtr reversed = run_main(p, rev);
    bool ok = value_equal(normal, val::integer(2, 8)) && value_equal(reversed, val::integer(0, 8));
    return {ok, "x = " + show_value(normal) + ", reversed copy-out x = " + show_value(reversed)};
}

SoundnessStats soundness_run(double &secs) {
    static SoundnessStats stats;
    static double elapsed = -1;
    if (elapsed < 0) {
        GenConfig cfg;
        cfg.seed = 1;
        cfg.maxDepth = 5;
        cfg.tables = cfg.calls = cfg.stacks = cfg.unions = true;
        auto t0 = std::chrono::steady_clock::now();
        stats = run_soundness_suite(1000, cfg);
        elapsed = seconds_since(t0);
    }
    secs = elapsed;
    return stats;
}

Result c3_soundness() {
    double s;
    SoundnessStats st = soundness_run(s);
    std::ostringstream d;
    d << st.passed << "/" << st.programs << " pass, " << st.returnsChecked << " returns checked, max " << st.maxSteps
      << " steps, " << s << "s";
    if (!st.failures.empty()) d << "; first failure seed " << st.failures[0].seed << ": " << st.failures[0].reason;
    return {st.programs == 1000 && st.passed == 1000 && s < 120.0, d.str()};
}

Result c4_budget() {
    double s;
    SoundnessStats st = soundness_run(s);
    return {st.programs == 1000 && st.exhausted == 0, std::to_string(st.exhausted) + " budget exhaustions"};
}

Result c5_cte() {
    int agree = 0;
    const int n = 10000;
    std::string first;
    for (int i = 1; i <= n; ++i) {
        CteCase c = generate_cte_case(i);
        Contexts ctx = check_program(c.constants);
        ValuePtr a = cteval(ctx.sigma, c.expr);
        Machine m;
        Env env;
        ThreeStageLite target;
        Evaluator ev(target);
        RunResult r = run_program(ev, m, Delta(), env, c.constants);
        ExprOutcome b = ev.eval_expression(m, r.delta, r.env, c.expr);
        if (!b.exit && value_equal(a, b.value)) ++agree;
        else if (first.empty()) first = "seed " + std::to_string(i) + ": " + pretty_print(c.expr);
    }
    return {agree == n, std::to_string(agree) + "/" + std::to_string(n) + " agree" + (first.empty() ? "" : "; " + first)};
}

// Oracle: plain 64-bit arithmetic reduced mod 2^w.
Result c6_binop_grid() {
    struct Op {
        BinOp op;
        std::function<std::optional<int64_t>(int64_t, int64_t)> f;  // nullopt marks an error
        bool boolean;
    };
    std::vector<Op> ops = {
        {BinOp::Add, [](int64_t a, int64_t b) -> std::optional<int64_t> { return a + b; }, false},
        {BinOp::Sub, [](int64_t a, int64_t b) -> std::optional<int64_t> { return a - b; }, false},
        {BinOp::Mul, [](int64_t a, int64_t b) -> std::optional<int64_t> { return a * b; }, false},
        {BinOp::Div, [](int64_t a, int64_t b) -> std::optional<int64_t> { if (b == 0) return std::nullopt; return a / b; }, false},
        {BinOp::Mod, [](int64_t a, int64_t b) -> std::optional<int64_t> { if (b == 0) return std::nullopt; return a % b; }, false},
        {BinOp::BAnd, [](int64_t a, int64_t b) -> std::optional<int64_t> { return a & b; }, false},
        {BinOp::BOr, [](int64_t a, int64_t b) -> std::optional<int64_t> { return a | b; }, false},
        {BinOp::BXor, [](int64_t a, int64_t b) -> std::optional<int64_t> { return a ^ b; }, false},
        {BinOp::Shl, [](int64_t a, int64_t b) -> std::optional<int64_t> { return a << b; }, false},
        {BinOp::Shr, [](int64_t a, int64_t b) -> std::optional<int64_t> { return a >> b; }, false},
        {BinOp::Eq, [](int64_t a, int64_t b) -> std::optional<int64_t> { return int64_t(a == b); }, true},
        {BinOp::Neq, [](int64_t a, int64_t b) -> std::optional<int64_t> { return int64_t(a != b); }, true},
        {BinOp::Lt, [](int64_t a, int64_t b) -> std::optional<int64_t> { return int64_t(a < b); }, true},
        {BinOp::Le, [](int64_t a, int64_t b) -> std::optional<int64_t> { return int64_t(a <= b); }, true},
        {BinOp::Gt, [](int64_t a, int64_t b) -> std::optional<int64_t> { return int64_t(a > b); }, true},
        {BinOp::Ge, [](int64_t a, int64_t b) -> std::optional<int64_t> { return int64_t(a >= b); }, true},
    };
    int checked = 0, bad = 0;
    std::string first;
    for (int64_t w = 1; w <= 4; ++w) {
        int64_t mod = int64_t(1) << w;
        for (const auto &op : ops)
            for (int64_t a = 0; a < mod; ++a)
                for (int64_t b = 0; b < mod; ++b) {
                    ++checked;
                    std::optional<int64_t> want = op.f(a, b);
                    bool ok;
                    try {
                        ValuePtr got = eval_binop(op.op, val::integer(a, w), val::integer(b, w));
                        if (!want) ok = false;
                        else if (op.boolean) ok = value_equal(got, val::boolean(*want != 0));
                        else ok = value_equal(got, val::integer(((*want % mod) + mod) % mod, w));
                    } catch (const ArithmeticError &) {
                        ok = !want;
                    }
                    if (!ok) {
                        ++bad;
                        if (first.empty())
                            first = std::string(binop_name(op.op)) + " " + std::to_string(a) + " " + std::to_string(b) +
                                    " at bit<" + std::to_string(w) + ">";
                    }
                }
    }
    return {bad == 0, std::to_string(checked - bad) + "/" + std::to_string(checked) + " grid points match" +
                          (first.empty() ? "" : "; first mismatch " + first)};
}

Result c7_unions() {
    const int n = 200;
    int pass = 0, caught = 0;
    std::string first;
    for (int i = 1; i <= n; ++i) {
        GenConfig cfg;
        cfg.seed = i;
        cfg.unions = true;
        Program p = generate_typed_program(cfg);
        DiffVerdict v = diff_union_semantics(p);
        if (v.pass) ++pass;
        else if (first.empty()) first = "seed " + std::to_string(i) + ": " + v.reason;
        DiffOptions wrong;
        wrong.translate.wrongTag = true;
        if (!diff_union_semantics(p, wrong).pass) ++caught;
    }
    std::ostringstream d;
    d << pass << "/" << n << " pass, wrong-tag translator fails " << caught << "/" << n;
    if (!first.empty()) d << "; " << first;
    return {pass == n && caught * 100 >= 95 * n, d.str()};
}

Result c8_havoc() {
    const int n = 1000;
    int typed = 0, zero = 0;
    Delta delta;
    HavocOracle zeroMode = HavocOracle::zero();
    for (int i = 0; i < n; ++i) {
        TypePtr t = generate_type(i + 1);
        HavocOracle seeded = HavocOracle::seeded(i + 1);
        if (check_value(Xi{}, Sigma{}, delta, seeded.draw(delta, t, i), t)) ++typed;
        if (value_equal(zeroMode.draw(delta, t, i), init_value(delta, t))) ++zero;
    }
    return {typed == n && zero == n, std::to_string(typed) + "/" + std::to_string(n) + " seeded draws typed, " +
                                         std::to_string(zero) + "/" + std::to_string(n) + " zero draws equal init"};
}

Result c9_round_trip() {
    const int n = 1000;
    int same = 0;
    std::string first;
    for (int i = 1; i <= n; ++i) {
        GenConfig cfg;
        cfg.seed = i;
        cfg.unions = i % 2 == 0;
        Program p = generate_typed_program(cfg);
        std::string text = pretty_print(p);
        try {
            if (equal(parse_program(text), p)) ++same;
            else if (first.empty()) first = "seed " + std::to_string(i) + " differs";
        } catch (const Error &e) {
            if (first.empty()) first = "seed " + std::to_string(i) + ": " + e.what();
        }
    }
    return {same == n, std::to_string(same) + "/" + std::to_string(n) + " identical" + (first.empty() ? "" : "; " + first)};
}

}  // namespace

int main() {
    std::vector<std::pair<const char *, std::function<Result()>>> criteria = {
        {"source routing STF", c1_source_routing},
        {"copy-in/copy-out aliasing", c2_aliasing},
        {"type soundness on 1000 programs", c3_soundness},
        {"no budget exhaustion", c4_budget},
        {"cteval agrees with evaluation", c5_cte},
        {"bit<1..4> operator grid", c6_binop_grid},
        {"union translation differential", c7_unions},
        {"havoc draws", c8_havoc},
        {"print/parse round-trip", c9_round_trip},
    };
    int failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        Result r;
        try {
            r = criteria[i].second();
        } catch (const std::exception &e) {
            r = {false, std::string("threw: ") + e.what()};
        }
        if (!r.pass) ++failed;
        std::cout << (r.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << r.detail
                  << std::endl;
    }
    return failed ? 1 : 0;
}

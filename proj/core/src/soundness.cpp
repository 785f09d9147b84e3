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

#include "pcore/soundness.hpp"

#include <stdexcept>

#include "pcore/errors.hpp"
#include "pcore/frontend.hpp"
#include "pcore/typecheck.hpp"

namespace pcore {

ProgramVerdict check_soundness(const Program &p, const SoundnessOptions &opts) {
    ProgramVerdict v;
    Bootstrap boot = three_stage_lite_bootstrap();
    auto [m, env] = boot.make_machine({}, 0);
    std::unique_ptr<Target> target =
        opts.makeTarget ? opts.makeTarget() : std::make_unique<ThreeStageLite>(ControlPlane{}, HavocOracle::zero());
    Contexts ctx = boot.contexts;
    CheckOptions copts;
    copts.allowUnions = true;

    EvalHooks hooks;
    hooks.copyOutReverse = opts.hooks.copyOutReverse;
    hooks.skipCopyOut = opts.hooks.skipCopyOut;
    std::string badReturn;
    hooks.onReturn = [&](const Machine &mm, const ValuePtr &val, const TypePtr &t, const Delta &d) {
        ++v.returnsChecked;
        if (badReturn.empty() && !check_value(mm, ctx.sigma, d, val, t))
            badReturn = "returned " + show_value(val) + " at type " + pretty_print(t);
    };
    Evaluator ev(*target, hooks, opts.maxSteps);

    auto finish = [&](std::string reason) {
        v.steps = ev.steps();
        v.reason = std::move(reason);
        v.ok = v.reason.empty();
        return v;
    };
    auto machine_ok = [&](const Contexts &c, const Env &e) {
        std::string why = explain_machine(c.sigma, c.gamma, c.delta, m, e);
        return why;
    };

    Delta delta = boot.runtimeDelta;
    try {
        for (const auto &d : p.decls) {
            Contexts next = check_declaration(ctx, d, copts);
            DeclOutcome o = ev.eval_declaration(m, delta, env, d);
            if (!badReturn.empty()) return finish(badReturn);
            if (o.sig.kind == Signal::Kind::Exit) {
                v.exited = true;
                if (auto why = machine_ok(ctx, env); !why.empty()) return finish("after exit: " + why);
                return finish("");
            }
            ctx = next;
            delta = o.delta;
            env = o.env;
            if (auto why = machine_ok(ctx, env); !why.empty())
                return finish("after '" + d->name + "': " + why);
        }
        auto it = env.find("main");
        auto gt = ctx.gamma.find("main");
        if (it == env.end() || gt == ctx.gamma.end() || gt->second->kind != TypeKind::Function ||
            !gt->second->params.empty())
            return finish("");
        ExprOutcome r = ev.call(m, delta, env, m.at(it->second.loc), {}, {});
        if (!badReturn.empty()) return finish(badReturn);
        if (r.exit) {
            v.exited = true;
        } else if (!check_value(m, ctx.sigma, ctx.delta, r.value, gt->second->ret)) {
            return finish("main returned " + show_value(r.value) + " at type " + pretty_print(gt->second->ret));
        }
        if (auto why = machine_ok(ctx, env); !why.empty()) return finish("after main: " + why);
    } catch (const BudgetExhausted &e) {
        v.exhausted = true;
        return finish(std::string("budget exhausted: ") + e.what());
    } catch (const Error &e) {
        return finish(e.what());
    }
    return finish("");
}

namespace {

class IllTypedHavoc : public ThreeStageLite {
 public:
    ValuePtr havoc(Machine &, const Delta &, const TypePtr &t) override {
        if (t->kind == TypeKind::Bool) return val::integer(0, 1);
        return val::boolean(true);
    }
};

}  // namespace

std::unique_ptr<Target> make_ill_typed_havoc_target() { return std::make_unique<IllTypedHavoc>(); }

SoundnessStats run_soundness_suite(uint64_t n, const GenConfig &cfg, const SoundnessOptions &opts) {
    if (n == 0) throw std::invalid_argument("the soundness suite needs at least one program");
    SoundnessStats s;
    for (uint64_t i = 0; i < n; ++i) {
        GenConfig c = cfg;
        c.seed = cfg.seed + i;
        Program p = generate_typed_program(c);
        ProgramVerdict v = check_soundness(p, opts);
        ++s.programs;
        if (has_out_call(p)) ++s.outCalls;
        s.returnsChecked += v.returnsChecked;
        s.totalSteps += v.steps;
        s.maxSteps = std::max(s.maxSteps, v.steps);
        if (v.exhausted) ++s.exhausted;
        if (v.exited) ++s.exited;
        if (v.ok) ++s.passed;
        else s.failures.push_back({c.seed, v.reason});
    }
    return s;
}

}  // namespace pcore

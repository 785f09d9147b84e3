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

#ifndef PCORE_EVAL_HPP_
#define PCORE_EVAL_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pcore/ast.hpp"
#include "pcore/target.hpp"
#include "pcore/value.hpp"

namespace pcore {

/// An evaluated l-value: every index and slice bound is a literal.
struct LValue {
    enum class Kind { Var, Field, Elem, BitRange } kind = Kind::Var;
    Loc loc = 0;                          // Var
    std::shared_ptr<const LValue> base;   // Field, Elem, BitRange
    std::string field;                    // Field
    BigInt index;                         // Elem
    uint64_t hi = 0, lo = 0;              // BitRange
};

struct CopyOutTask {
    LValue lval;
    Loc loc = 0;
};

struct ExprOutcome {
    ValuePtr value;  // null on exit
    bool exit = false;
};

struct StmtOutcome {
    Env env;
    Signal sig;
};

struct DeclOutcome {
    Delta delta;
    Env env;
    Signal sig;
};

/// Instrumentation. `trace` receives one line per rule applied. `onReturn`
/// sees every value returned by a closure together with the closure's
/// runtime return type. The copy-out switches exist for mutation tests.
struct EvalHooks {
    std::function<void(const std::string &)> trace;
    std::function<void(const Machine &, const ValuePtr &, const TypePtr &, const Delta &)> onReturn;
    bool copyOutReverse = false;
    bool skipCopyOut = false;
};

/// A call argument: an expression, or a value supplied by the control plane.
struct CallArg {
    ExprPtr expr;
    ValuePtr value;
};

class Evaluator {
 public:
    explicit Evaluator(Target &target, EvalHooks hooks = {}, uint64_t maxSteps = 0);

    Target &target() { return target_; }
    EvalHooks &hooks() { return hooks_; }

    /// Zero means unlimited. Exceeding the budget throws BudgetExhausted.
    void set_max_steps(uint64_t n) { maxSteps_ = n; }
    uint64_t max_steps() const { return maxSteps_; }
    uint64_t steps() const { return steps_; }
    void reset_steps() { steps_ = 0; }

    /// Runtime type evaluation. Widths read the constants bound in `env`.
    TypePtr eval_type(const Delta &delta, const Machine &m, const Env &env, const TypePtr &t) const;

    ExprOutcome eval_expression(Machine &m, const Delta &delta, const Env &env, const ExprPtr &e);
    /// nullopt when evaluating an index or bound exits.
    std::optional<LValue> eval_lvalue(Machine &m, const Delta &delta, const Env &env, const ExprPtr &e);
    ValuePtr read_lvalue(Machine &m, const Delta &delta, const LValue &lv);
    void write_lvalue(Machine &m, const Delta &delta, const LValue &lv, const ValuePtr &v);
    void copy_out(Machine &m, const Delta &delta, const std::vector<CopyOutTask> &tasks);

    StmtOutcome eval_statement(Machine &m, const Delta &delta, const Env &env, const StmtPtr &s);
    DeclOutcome eval_declaration(Machine &m, const Delta &delta, const Env &env, const DeclPtr &d);

    /// Applies the table bound at `table` (a TableV). Signal is Continue or Exit.
    Signal eval_table_apply(Machine &m, const Delta &delta, const ValuePtr &table);

    /// Calls a closure or native with evaluated type arguments.
    ExprOutcome call(Machine &m, const Delta &delta, const Env &callerEnv, const ValuePtr &fn,
                     const std::vector<TypePtr> &typeArgs, const std::vector<CallArg> &args);

 private:
    struct ExitUnwind {};

    Target &target_;
    EvalHooks hooks_;
    uint64_t maxSteps_;
    uint64_t steps_ = 0;

    void step();
    bool tracing() const { return static_cast<bool>(hooks_.trace); }
    ValuePtr expr(Machine &m, const Delta &delta, const Env &env, const ExprPtr &e);
    LValue lvalue(Machine &m, const Delta &delta, const Env &env, const ExprPtr &e);
    ValuePtr invoke(Machine &m, const Delta &delta, const Env &callerEnv, const ValuePtr &fn,
                    const std::vector<TypePtr> &typeArgs, const std::vector<CallArg> &args);
    StmtOutcome stmt(Machine &m, const Delta &delta, const Env &env, const StmtPtr &s);
    DeclOutcome decl(Machine &m, const Delta &delta, const Env &env, const DeclPtr &d);
};

struct RunResult {
    Delta delta;
    Env env;
    Signal sig;
    /// The value returned by `main()`, when the program binds one.
    ValuePtr mainResult;
};

/// Evaluates the declarations in order, stopping at the first Exit, then
/// calls `main()` if the program declares a parameterless `main`.
RunResult run_program(Evaluator &ev, Machine &m, const Delta &delta, const Env &env, const Program &p);

struct BudgetOutcome {
    bool exhausted = false;
    uint64_t steps = 0;
};

/// Runs `thunk` with a step budget of `maxSteps`, restoring the previous
/// budget afterwards.
BudgetOutcome run_with_budget(Evaluator &ev, const std::function<void()> &thunk, uint64_t maxSteps);

}  // namespace pcore

#endif  // PCORE_EVAL_HPP_

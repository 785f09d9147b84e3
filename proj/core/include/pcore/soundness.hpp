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

#ifndef PCORE_SOUNDNESS_HPP_
#define PCORE_SOUNDNESS_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pcore/eval.hpp"
#include "pcore/generate.hpp"
#include "pcore/target.hpp"

namespace pcore {

struct SoundnessOptions {
    uint64_t maxSteps = 1000000;
    /// Copy-out switches for mutation runs; trace and onReturn are ignored.
    EvalHooks hooks;
    /// Target factory; three-stage-lite with zero havoc when empty.
    std::function<std::unique_ptr<Target>()> makeTarget;
};

/// Result of one program: declarations are checked and evaluated one at a
/// time, the machine is checked against the contexts after each, then
/// `main()` is called. Every value a closure returns is checked at its
/// return type.
struct ProgramVerdict {
    bool ok = false;
    bool exhausted = false;
    bool exited = false;
    uint64_t steps = 0;
    uint64_t returnsChecked = 0;
    std::string reason;
};

ProgramVerdict check_soundness(const Program &p, const SoundnessOptions &opts = {});

struct SoundnessFailure {
    uint64_t seed = 0;
    std::string reason;
};

struct SoundnessStats {
    uint64_t programs = 0;
    uint64_t passed = 0;
    uint64_t exhausted = 0;
    uint64_t exited = 0;
    uint64_t outCalls = 0;  // programs with a call to an out or inout parameter
    uint64_t returnsChecked = 0;
    uint64_t totalSteps = 0;
    uint64_t maxSteps = 0;
    std::vector<SoundnessFailure> failures;

    bool ok() const { return failures.empty(); }
};

/// Mutation target: three-stage-lite whose havoc answers every query with a
/// value of the wrong type (bool for non-bool types, bit<1> for bool).
std::unique_ptr<Target> make_ill_typed_havoc_target();

/// Runs seeds cfg.seed .. cfg.seed + n - 1. Throws std::invalid_argument
/// when n is 0.
SoundnessStats run_soundness_suite(uint64_t n, const GenConfig &cfg, const SoundnessOptions &opts = {});

}  // namespace pcore

#endif  // PCORE_SOUNDNESS_HPP_

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

#ifndef PCORE_UNIONS_HPP_
#define PCORE_UNIONS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "pcore/ast.hpp"
#include "pcore/typecheck.hpp"
#include "pcore/value.hpp"

namespace pcore {

/// Statement typing with unions enabled (union assignment and switch).
Contexts check_union_stmt(const Contexts &ctx, const StmtPtr &s, UnionSites *sites = nullptr);

/// Width of the tag field: max(1, ceil(log2(alternatives))).
uint64_t tag_width(size_t alternatives);

struct TranslateOptions {
    /// Fault injection: union assignments store tag (i+1) mod #alternatives.
    bool wrongTag = false;
};

/// Union types become records `{bit<n> tag; alternatives...}`. Works on
/// source types as well as normalized ones.
TypePtr translate_type(const TypePtr &t);

/// Rewrites unions away. The program must typecheck from `initial` with
/// unions enabled (throws TypeError otherwise). Temporaries are named
/// `$tmpN`, which source programs cannot spell.
Program translate_program(const Program &p, const Contexts &initial, const TranslateOptions &opts = {});

/// Structural value translation. Union values become tagged records.
ValuePtr translate_value(const Delta &delta, const ValuePtr &v);

/// Translates every stored value and its store type.
Machine translate_store(const Delta &delta, const Machine &m);

/// dom(e1) is included in dom(e2) and every name reads equal values through
/// both. Closures, tables and natives compare by kind and name, since their
/// environments point at different locations in the two runs.
bool env_store_le(const Machine &m1, const Env &e1, const Machine &m2, const Env &e2);

struct DiffVerdict {
    bool pass = false;
    std::string reason;  // first divergence, empty on success
    std::string extendedSignal, translatedSignal;
    uint64_t extendedSteps = 0, translatedSteps = 0;
};

struct DiffOptions {
    TranslateOptions translate;
    uint64_t maxSteps = 1000000;
    std::vector<uint8_t> packet;
    uint64_t ingress = 0;
};

/// Runs the program with unions and its translation without, both under the
/// three-stage-lite target with zero havoc, and compares signals, the
/// returned value of `main`, packet results and the final top-level state.
DiffVerdict diff_union_semantics(const Program &p, const DiffOptions &opts = {});

}  // namespace pcore

#endif  // PCORE_UNIONS_HPP_

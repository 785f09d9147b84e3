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

#ifndef PCORE_GENERATE_HPP_
#define PCORE_GENERATE_HPP_

#include <cstdint>

#include "pcore/ast.hpp"

namespace pcore {

struct GenConfig {
    uint64_t seed = 1;
    int maxDepth = 5;  // statement nesting and expression depth, at least 1
    int maxDecls = 8;
    bool tables = true;
    bool calls = true;
    bool stacks = true;
    bool unions = false;
};

/// A program the checker accepts under the three-stage-lite bootstrap
/// contexts (with unions enabled when cfg.unions is set). Deterministic in
/// cfg. Depth 1 yields constant declarations only. Programs with unions
/// declare top-level union variables and assign each of them at the start
/// of `main`.
Program generate_typed_program(const GenConfig &cfg);

/// A normalized, inhabited base type without unions, type variables or
/// open enums.
TypePtr generate_type(uint64_t seed, int maxDepth = 3);

/// Constant declarations and an expression over them that cteval accepts.
struct CteCase {
    Program constants;
    ExprPtr expr;
};
CteCase generate_cte_case(uint64_t seed, int maxDepth = 5);

/// True when some call passes an argument to an out or inout parameter.
bool has_out_call(const Program &p);

}  // namespace pcore

#endif  // PCORE_GENERATE_HPP_

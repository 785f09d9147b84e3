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

#ifndef PCORE_SERIALIZE_HPP_
#define PCORE_SERIALIZE_HPP_

#include <string>

#include "pcore/ast.hpp"
#include "pcore/value.hpp"

namespace pcore {

/// Canonical JSON for AST nodes and values. Every node is an object whose
/// "kind" names the alternative; integers are decimal strings and an `int`
/// width is null. Field names and kinds are stable. Source positions are
/// omitted. `indent` < 0 gives one line.
std::string dump_json(const Program &p, int indent = 2);
std::string dump_json(const TypePtr &t, int indent = -1);
std::string dump_json(const ExprPtr &e, int indent = -1);
std::string dump_json(const StmtPtr &s, int indent = -1);
std::string dump_json(const ValuePtr &v, int indent = -1);

}  // namespace pcore

#endif  // PCORE_SERIALIZE_HPP_

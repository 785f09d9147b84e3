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

#ifndef PCORE_OPS_HPP_
#define PCORE_OPS_HPP_

#include <cstdint>

#include "pcore/ast.hpp"
#include "pcore/value.hpp"

namespace pcore {

/// Largest shift amount accepted on `int` operands.
inline constexpr uint64_t kMaxIntShift = 4096;

/// n mod 2^w, always nonnegative.
BigInt wrap_bits(const BigInt &n, uint64_t w);

TypePtr type_of_unop(const Delta &delta, UnOp op, const TypePtr &t);
TypePtr type_of_binop(const Delta &delta, BinOp op, const TypePtr &t1, const TypePtr &t2);

ValuePtr eval_unop(UnOp op, const ValuePtr &v);
/// Throws ArithmeticError on division or modulo by zero, negative division
/// operands and negative shift amounts.
ValuePtr eval_binop(BinOp op, const ValuePtr &v1, const ValuePtr &v2);

bool check_cast(const Delta &delta, const TypePtr &from, const TypePtr &to);
ValuePtr eval_cast(const Delta &delta, const ValuePtr &v, const TypePtr &to);

ValuePtr slice_bits(const ValuePtr &v, uint64_t hi, uint64_t lo);
ValuePtr set_bits(const ValuePtr &target, uint64_t hi, uint64_t lo, const ValuePtr &v);

/// Default value of a normalized type. Throws Uninhabitable for type
/// variables, empty open enums and non-base types.
ValuePtr init_value(const Delta &delta, const TypePtr &t);

/// True for types eq/neq accept: bool, numbers, enums, error, match_kind.
bool is_equality_type(const Type &t);

}  // namespace pcore

#endif  // PCORE_OPS_HPP_

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

#ifndef PCORE_TYPECHECK_HPP_
#define PCORE_TYPECHECK_HPP_

#include <map>
#include <vector>

#include "pcore/ast.hpp"
#include "pcore/value.hpp"

namespace pcore {

/// Expression type with its direction (In or InOut) and the annotations of
/// the subexpressions, in evaluation order.
struct TypedExpr {
    TypePtr type;
    Direction dir = Direction::In;
    std::vector<TypedExpr> sub;
};

struct Contexts {
    Sigma sigma;
    Gamma gamma;
    Delta delta;
};

/// Union bookkeeping filled while checking: the union type behind every
/// union assignment, union switch and union-typed statement-level variable
/// declaration.
using UnionSites = std::map<const Stmt *, TypePtr>;

struct CheckOptions {
    bool allowUnions = true;
    UnionSites *unionSites = nullptr;
};

/// Delta with `match_kind {exact}`; Sigma and Gamma empty.
Contexts initial_contexts();

TypePtr simplify_type(const Sigma &sigma, const Delta &delta, const TypePtr &t);
ValuePtr cteval(const Sigma &sigma, const ExprPtr &e);

TypedExpr check_expression(const Sigma &sigma, const Gamma &gamma, const Delta &delta, const ExprPtr &e,
                           const CheckOptions &opts = {});

/// Statement typing. Blocks and ifs return their entry contexts.
Contexts check_statement(const Contexts &ctx, const StmtPtr &s, const CheckOptions &opts = {});

/// Any declaration: variables, types and objects.
Contexts check_declaration(const Contexts &ctx, const DeclPtr &d, const CheckOptions &opts = {});
Contexts check_var_declaration(const Contexts &ctx, const DeclPtr &d, const CheckOptions &opts = {});
Contexts check_type_declaration(const Contexts &ctx, const DeclPtr &d, const CheckOptions &opts = {});
Contexts check_object_declaration(const Contexts &ctx, const DeclPtr &d, const CheckOptions &opts = {});
void check_action_ok(const Contexts &ctx, const ActionRef &a, const CheckOptions &opts = {});

/// True iff every control path through `body` ends in return or exit.
bool returns_analysis(const StmtPtr &body);

/// Folds the declaration checks over the program, starting from `initial`.
/// Top-level names may not be redefined, except the open enums.
Contexts check_program(const Program &p, const Contexts &initial, const CheckOptions &opts = {});
Contexts check_program(const Program &p);

/// Value typing. The machine supplies Xi and, for closures, the constants
/// captured in their environments.
bool check_value(const Machine &m, const Sigma &sigma, const Delta &delta, const ValuePtr &v, const TypePtr &t);
/// Value typing without a store; closures, tables and constructor closures
/// are rejected.
bool check_value(const Xi &xi, const Sigma &sigma, const Delta &delta, const ValuePtr &v, const TypePtr &t);

/// Store and environment typing: every location types at Xi, every name of
/// Gamma is bound in `env` at a location of that type, and constants agree
/// with the store.
bool check_machine(const Sigma &sigma, const Gamma &gamma, const Delta &delta, const Machine &m, const Env &env);

/// The first reason check_machine fails, or an empty string.
std::string explain_machine(const Sigma &sigma, const Gamma &gamma, const Delta &delta, const Machine &m,
                            const Env &env);

/// True when every default value of the type exists (no type variables, no
/// empty open enums, no unions without alternatives).
bool is_inhabitable(const Delta &delta, const TypePtr &t);

}  // namespace pcore

#endif  // PCORE_TYPECHECK_HPP_

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

#ifndef PCORE_FRONTEND_HPP_
#define PCORE_FRONTEND_HPP_

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pcore/ast.hpp"

namespace pcore {

enum class TokenKind { Ident, IntLit, Keyword, Punct, End };

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    BigInt value;                   // IntLit
    std::optional<uint64_t> width;  // IntLit `w'N` suffix
    Pos pos;
};

struct LexOptions {
    /// Accept `$name` identifiers, which the union translation uses for
    /// its temporaries.
    bool allowReserved = false;
};

std::vector<Token> lex(std::string_view text, LexOptions opts = {});

/// Parses a whole program. Type names (typedef, enum, union, control and
/// type parameters) are tracked while parsing; they disambiguate casts,
/// declarations and `X.f` members.
Program parse_program(const std::vector<Token> &tokens);
Program parse_program(std::string_view text, LexOptions opts = {});

/// Parses one expression. `typeNames` seeds the set of known type names.
ExprPtr parse_expression(const std::vector<Token> &tokens, const std::set<std::string> &typeNames = {});
ExprPtr parse_expression(std::string_view text, const std::set<std::string> &typeNames = {});

StmtPtr parse_statement(std::string_view text, const std::set<std::string> &typeNames = {});
TypePtr parse_type(std::string_view text, const std::set<std::string> &typeNames = {});

std::string pretty_print(const Program &p);
std::string pretty_print(const Decl &d);
std::string pretty_print(const Stmt &s);
std::string pretty_print(const Expr &e);
std::string pretty_print(const Type &t);
std::string pretty_print(const TypePtr &t);
std::string pretty_print(const ExprPtr &e);

}  // namespace pcore

#endif  // PCORE_FRONTEND_HPP_

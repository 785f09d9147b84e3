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

#ifndef PCORE_ERRORS_HPP_
#define PCORE_ERRORS_HPP_

#include <stdexcept>
#include <string>

#include "pcore/ast.hpp"

namespace pcore {

/// Base of every error the library throws. `rule` names the rule or stage
/// that failed; what() renders `RULE at LINE:COL: message`.
class Error : public std::runtime_error {
 public:
    Error(std::string rule, Pos pos, std::string message);
    const std::string &rule() const { return rule_; }
    const Pos &pos() const { return pos_; }
    const std::string &message() const { return message_; }

 private:
    std::string rule_;
    Pos pos_;
    std::string message_;
};

#define PCORE_ERROR_KIND(Name)                                  \
    class Name : public Error {                                 \
     public:                                                    \
        Name(std::string rule, Pos pos, std::string message)    \
            : Error(std::move(rule), pos, std::move(message)) {} \
    };

// Front end.
PCORE_ERROR_KIND(LexError)
PCORE_ERROR_KIND(ParseError)
// Static semantics. Subclasses keep the kind distinguishable in tests.
PCORE_ERROR_KIND(TypeError)
class NotCompileTime : public TypeError {
 public:
    using TypeError::TypeError;
};
class UnboundTypeVar : public TypeError {
 public:
    using TypeError::TypeError;
};
class IllTypedOperator : public TypeError {
 public:
    using TypeError::TypeError;
};
class DuplicateEnumMember : public TypeError {
 public:
    using TypeError::TypeError;
};
class MissingReturn : public TypeError {
 public:
    using TypeError::TypeError;
};
// Dynamic semantics and targets.
PCORE_ERROR_KIND(RuntimeError)
class EvalError : public RuntimeError {
 public:
    using RuntimeError::RuntimeError;
};
class ArithmeticError : public RuntimeError {
 public:
    using RuntimeError::RuntimeError;
};
class IndexOutOfBounds : public RuntimeError {
 public:
    using RuntimeError::RuntimeError;
};
class Uninhabitable : public RuntimeError {
 public:
    using RuntimeError::RuntimeError;
};
class BudgetExhausted : public RuntimeError {
 public:
    using RuntimeError::RuntimeError;
};
class ControlPlaneError : public RuntimeError {
 public:
    using RuntimeError::RuntimeError;
};
class TargetError : public RuntimeError {
 public:
    using RuntimeError::RuntimeError;
};
// Harness.
PCORE_ERROR_KIND(StfParseError)
PCORE_ERROR_KIND(InternalError)

#undef PCORE_ERROR_KIND

}  // namespace pcore

#endif  // PCORE_ERRORS_HPP_

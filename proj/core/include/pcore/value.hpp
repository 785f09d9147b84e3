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

#ifndef PCORE_VALUE_HPP_
#define PCORE_VALUE_HPP_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pcore/ast.hpp"

namespace pcore {

using Loc = uint64_t;

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

/// Environment entry. `constant` records that the name was bound by a
/// constant declaration; evaluation ignores it, value typing uses it to
/// rebuild the constant context of a closure.
struct EnvEntry {
    Loc loc = 0;
    bool constant = false;
};
using Env = std::map<std::string, EnvEntry>;

/// Delta: ordered type definitions. A null `def` is an `X var` entry.
/// Persistent list, newest entry first; later entries shadow earlier ones.
struct DeltaNode {
    std::string name;
    TypePtr def;
    std::shared_ptr<const DeltaNode> next;
};

class Delta {
 public:
    Delta() = default;
    Delta with_var(const std::string &name) const;
    Delta with_def(const std::string &name, TypePtr def) const;
    /// The entry for `name` or nullptr.
    const DeltaNode *lookup(const std::string &name) const;
    /// Delta as it was just before `node` was added.
    static Delta suffix(const DeltaNode *node);
    bool empty() const { return !head_; }
    std::vector<std::string> names() const;
    /// Members of the open enums `error` and `match_kind`.
    std::vector<std::string> open_enum_members(const std::string &which) const;

 private:
    explicit Delta(std::shared_ptr<const DeltaNode> h) : head_(std::move(h)) {}
    std::shared_ptr<const DeltaNode> head_;
};

inline constexpr const char *kErrorName = "error";
inline constexpr const char *kMatchKindName = "match_kind";
inline constexpr const char *kReturnName = "return";

enum class ValueKind {
    Bool,
    Int,
    Record,
    Header,
    TypeMember,
    Stack,
    Closure,
    Native,
    Table,
    CtorClosure,
    Union,
};

struct NamedValue {
    std::string name;
    ValuePtr value;
};

struct HeaderField {
    std::string name;
    TypePtr type;
    ValuePtr value;
};

struct Value {
    ValueKind kind = ValueKind::Bool;
    bool b = false;                  // Bool; Header validity
    BigInt n;                        // Int
    std::optional<uint64_t> width;   // Int; nullopt is the int width
    std::vector<NamedValue> fields;  // Record
    std::vector<HeaderField> hfields;  // Header
    std::string typeName;            // TypeMember, Union
    std::string member;              // TypeMember member, Union active field
    TypePtr elemType;                // Stack element; Union type
    std::vector<ValuePtr> elems;     // Stack
    ValuePtr payload;                // Union
    // Closures, constructor closures and tables.
    std::shared_ptr<const Env> env;
    std::vector<std::string> typeParams;
    std::vector<Param> params;
    std::vector<Param> ctorParams;
    TypePtr ret;
    std::vector<DeclPtr> locals;
    StmtPtr body;
    std::string name;                // Native name, table name
    Loc id = 0;                      // Table
    std::vector<KeyEntry> keys;
    std::vector<ActionRef> actions;
    std::optional<ActionRef> defaultAction;
    // Annotations, excluded from equality: the type definitions in scope
    // at the definition site and the control instance a closure came from.
    std::shared_ptr<const Delta> defDelta;
    std::string ctorName;
    std::string instName;
};

namespace val {
ValuePtr boolean(bool b);
ValuePtr integer(BigInt n, std::optional<uint64_t> width);
ValuePtr record(std::vector<NamedValue> fields);
ValuePtr header(bool valid, std::vector<HeaderField> fields);
ValuePtr type_member(std::string type, std::string member);
ValuePtr stack(TypePtr elem, std::vector<ValuePtr> elems);
ValuePtr union_(std::string type, std::string member, ValuePtr payload);
ValuePtr unit();
}  // namespace val

bool value_equal(const ValuePtr &a, const ValuePtr &b);
/// Human-readable rendering, e.g. `{port = 1w'7, bos = 1w'1}`.
std::string show_value(const ValuePtr &v);
bool env_equal(const Env &a, const Env &b);

/// Signals: Continue, Return(v), Exit.
struct Signal {
    enum class Kind { Continue, Return, Exit } kind = Kind::Continue;
    ValuePtr value;
    static Signal cont() { return {}; }
    static Signal ret(ValuePtr v) { return {Kind::Return, std::move(v)}; }
    static Signal exit() { return {Kind::Exit, nullptr}; }
    bool is_continue() const { return kind == Kind::Continue; }
};
bool signal_equal(const Signal &a, const Signal &b);
std::string signal_name(const Signal &s);

/// Typing contexts.
using Gamma = std::map<std::string, TypePtr>;
using Sigma = std::map<std::string, ValuePtr>;
using Xi = std::vector<TypePtr>;  // Loc -> type

struct TargetState;

/// Store, store typing, location counter and target state.
struct Machine {
    std::vector<ValuePtr> store;
    Xi xi;
    std::shared_ptr<TargetState> target;

    Loc fresh(ValuePtr v, TypePtr t);
    Loc next_loc() const { return store.size(); }
    const ValuePtr &at(Loc l) const;
    void set(Loc l, ValuePtr v);
};

}  // namespace pcore

#endif  // PCORE_VALUE_HPP_

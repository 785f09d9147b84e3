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

#ifndef PCORE_TARGET_HPP_
#define PCORE_TARGET_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcore/typecheck.hpp"
#include "pcore/value.hpp"

namespace pcore {

struct PacketState {
    std::vector<bool> input;
    size_t cursor = 0;
    std::vector<bool> output;
    uint64_t ingress = 0;
    std::optional<uint64_t> egress;
    bool dropped = false;
};

struct TableInfo {
    std::string name;
    std::string control;   // empty outside controls
    std::string instance;  // empty outside controls
};

/// Target-owned part of a Machine.
struct TargetState {
    PacketState packet;
    std::map<Loc, TableInfo> tables;
    /// (control, instance) of the control instances being applied.
    std::vector<std::pair<std::string, std::string>> scopes;
    uint64_t havocQueries = 0;
};

/// An action invocation: name plus control-plane argument values.
struct ActionChoice {
    std::string action;
    std::vector<ValuePtr> args;
};

struct TableQuery {
    Loc id = 0;
    std::vector<ValuePtr> keys;
    std::vector<std::string> keyNames;  // pretty-printed key expressions
    std::vector<std::string> matchKinds;
    const std::vector<ActionRef> *actions = nullptr;
    /// Runtime types of each action's control-plane parameters.
    std::vector<std::vector<TypePtr>> ctrlTypes;
    ActionChoice fallback;  // returned on a miss; an empty action name defers to the table default
};

using NativeBehavior = std::function<ValuePtr(Machine &m, const std::vector<Loc> &args,
                                              const std::vector<TypePtr> &paramTypes, const Delta &delta)>;

struct NativeFn {
    std::string name;
    std::vector<std::string> typeParams;
    std::vector<Param> params;
    TypePtr ret;
    NativeBehavior behavior;
};

/// The plug-in boundary between the calculus and an architecture.
class Target {
 public:
    virtual ~Target() = default;
    /// Control-plane oracle: picks an action from the table's action list.
    virtual ActionChoice match_action(Machine &m, const TableQuery &q) = 0;
    /// An arbitrary value of a normalized, inhabited type.
    virtual ValuePtr havoc(Machine &m, const Delta &delta, const TypePtr &t) = 0;
    /// Runs a native. Arguments live at `args`; out and inout effects are
    /// written there.
    virtual ValuePtr call_native(Machine &m, const std::string &name, const std::vector<Loc> &args,
                                 const std::vector<TypePtr> &paramTypes, const Delta &delta) = 0;
    virtual void on_table_decl(Machine &, Loc, const std::string &) {}
    virtual void enter_instance(Machine &, const std::string &, const std::string &) {}
    virtual void leave_instance(Machine &) {}
};

// ---------------------------------------------------------------------------
// Havoc

class HavocOracle {
 public:
    enum class Mode { Zero, Seeded };

    static HavocOracle zero() { return HavocOracle(Mode::Zero, 0); }
    static HavocOracle seeded(uint64_t seed) { return HavocOracle(Mode::Seeded, seed); }

    Mode mode() const { return mode_; }
    uint64_t seed() const { return seed_; }

    /// Pure in (mode, seed, index, type). Throws Uninhabitable.
    ValuePtr draw(const Delta &delta, const TypePtr &t, uint64_t index) const;

 private:
    HavocOracle(Mode m, uint64_t s) : mode_(m), seed_(s) {}
    Mode mode_;
    uint64_t seed_;
};

/// Parses `zero` or `seed:N`.
HavocOracle parse_havoc_mode(const std::string &text);

// ---------------------------------------------------------------------------
// Control plane

struct KeyBinding {
    std::string name;  // empty for positional keys
    std::string value;
};

struct CpRule {
    std::string table;  // `acl`, `Control.acl` or `instance.acl`
    std::vector<KeyBinding> keys;
    std::string action;  // a leading `Control.` prefix is ignored
    std::vector<std::string> args;
};

class ControlPlane {
 public:
    void add(CpRule r) { rules_.push_back(std::move(r)); }
    const std::vector<CpRule> &rules() const { return rules_; }
    bool empty() const { return rules_.empty(); }

    /// `[{"table": "acl", "keys": ["0","1"], "action": "allow", "args": []}]`.
    /// Keys may also be objects `{"name": "...", "value": "..."}`; a named key
    /// matches a table key whose last path component agrees.
    static ControlPlane from_json(const std::string &text);

 private:
    std::vector<CpRule> rules_;
};

/// First rule in insertion order whose table path names the queried table
/// and whose keys all match exactly; otherwise the query's fallback.
/// Throws ControlPlaneError (UnknownTable, UnsupportedMatchKind, bad
/// action or arguments).
ActionChoice cp_lookup(const ControlPlane &cp, const TargetState &ts, const TableQuery &q);

/// Reads a control-plane literal at a type: numbers (decimal or 0x hex),
/// booleans and enum, error or match_kind member names.
ValuePtr parse_cp_value(const Delta &delta, const std::string &text, const TypePtr &t);

// ---------------------------------------------------------------------------
// The three-stage-lite target

/// Packet helpers. Bits pack big-endian: the first bit is the most
/// significant bit of the first byte.
std::vector<bool> bytes_to_bits(const std::vector<uint8_t> &bytes);
std::vector<uint8_t> bits_to_bytes(const std::vector<bool> &bits);
std::vector<uint8_t> parse_hex(const std::string &hex);
std::string to_hex(const std::vector<uint8_t> &bytes);
/// Emitted bits followed by the unparsed rest of the input.
std::vector<uint8_t> packet_output(const PacketState &p);

/// Width of the wire image of a type, or nullopt when the type has none
/// (int, enums, error, match_kind, unions).
std::optional<uint64_t> wire_width(const TypePtr &t);

std::vector<NativeFn> three_stage_lite_natives();

class ThreeStageLite : public Target {
 public:
    ThreeStageLite(ControlPlane cp = {}, HavocOracle havoc = HavocOracle::zero());

    ActionChoice match_action(Machine &m, const TableQuery &q) override;
    ValuePtr havoc(Machine &m, const Delta &delta, const TypePtr &t) override;
    ValuePtr call_native(Machine &m, const std::string &name, const std::vector<Loc> &args,
                         const std::vector<TypePtr> &paramTypes, const Delta &delta) override;
    void on_table_decl(Machine &m, Loc id, const std::string &name) override;
    void enter_instance(Machine &m, const std::string &ctrl, const std::string &inst) override;
    void leave_instance(Machine &m) override;

    ControlPlane &control_plane() { return cp_; }
    const HavocOracle &havoc_oracle() const { return havoc_; }
    const std::vector<NativeFn> &natives() const { return natives_; }

 private:
    ControlPlane cp_;
    HavocOracle havoc_;
    std::vector<NativeFn> natives_;
};

/// Initial typing contexts, runtime Delta and a Machine factory binding the
/// natives.
struct Bootstrap {
    Contexts contexts;
    Delta runtimeDelta;
    std::function<std::pair<Machine, Env>(const std::vector<uint8_t> &packet, uint64_t ingress)> make_machine;
};

Bootstrap three_stage_lite_bootstrap();

}  // namespace pcore

#endif  // PCORE_TARGET_HPP_

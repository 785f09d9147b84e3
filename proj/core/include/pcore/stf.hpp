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

#ifndef PCORE_STF_HPP_
#define PCORE_STF_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcore/ast.hpp"
#include "pcore/eval.hpp"
#include "pcore/target.hpp"

namespace pcore {

/// One line of a packet test script:
///   add TABLE [name:]VALUE... ACTION(ARGS)
///   packet PORT HEX
///   expect PORT HEX
struct StfCommand {
    enum class Kind { Add, Packet, Expect } kind = Kind::Add;
    int line = 0;
    CpRule rule;                 // Add
    uint64_t port = 0;           // Packet, Expect
    std::vector<uint8_t> bytes;  // Packet, Expect
};

struct StfScript {
    std::vector<StfCommand> commands;
};

/// `#` starts a comment. Throws StfParseError.
StfScript parse_stf(const std::string &text);

struct PacketOutcome {
    int line = 0;
    uint64_t ingress = 0;
    std::vector<uint8_t> input;
    std::optional<uint64_t> egress;
    std::vector<uint8_t> output;
    bool dropped = false;
    bool exited = false;
    uint64_t steps = 0;
    std::string error;  // runtime error, if the run failed
    std::string result;  // the value main() returned, rendered; empty if none

    /// A packet leaves the switch when it has an egress port and was
    /// neither dropped nor stopped by an error.
    bool forwarded() const { return egress && !dropped && error.empty(); }
};

struct ExpectVerdict {
    int line = 0;
    uint64_t port = 0;
    std::vector<uint8_t> expected;
    bool pass = false;
    std::optional<std::vector<uint8_t>> actual;
};

struct RunReport {
    std::vector<PacketOutcome> packets;
    std::vector<ExpectVerdict> expects;

    bool passed() const;
    bool has_errors() const;
};

struct StfOptions {
    HavocOracle havoc = HavocOracle::zero();
    uint64_t maxSteps = 1000000;
    EvalHooks hooks;
    /// Rules installed before the script's own.
    ControlPlane controlPlane;
};

/// Checks the program under the three-stage-lite bootstrap (throws
/// TypeError), installs every `add`, then runs each packet on a fresh
/// machine. Expects are matched in order against the packets forwarded to
/// the same port.
RunReport run_stf(const Program &p, const StfScript &script, const StfOptions &opts = {});

/// Runs one packet. The program must already be known to typecheck.
PacketOutcome run_packet(const Program &p, const ControlPlane &cp, uint64_t ingress, const std::vector<uint8_t> &bytes,
                         const StfOptions &opts = {});

std::string report_text(const RunReport &r);
std::string report_json(const RunReport &r);

}  // namespace pcore

#endif  // PCORE_STF_HPP_

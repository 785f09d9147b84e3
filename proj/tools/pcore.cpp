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

// pcore: check, run and test pcore programs.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pcore/errors.hpp"
#include "pcore/eval.hpp"
#include "pcore/frontend.hpp"
#include "pcore/serialize.hpp"
#include "pcore/generate.hpp"
#include "pcore/soundness.hpp"
#include "pcore/stf.hpp"
#include "pcore/target.hpp"
#include "pcore/typecheck.hpp"
#include "pcore/unions.hpp"

namespace {

using namespace pcore;

enum Exit { kOk = 0, kTypeError = 1, kRuntimeError = 2, kTestFailure = 3, kUsage = 4 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_output(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << text;
}

struct Common {
    bool allowReserved = false;
};

Program load(const std::string &path, const Common &c) {
    return parse_program(read_file(path), LexOptions{c.allowReserved});
}

int cmd_check(const std::string &file, bool dumpAst, const Common &c) {
    Program p = load(file, c);
    if (dumpAst) std::cout << dump_json(p) << "\n";
    check_program(p, three_stage_lite_bootstrap().contexts);
    if (!dumpAst) std::cout << "ok\n";
    return kOk;
}

struct RunArgs {
    std::string file, stf, cp, havoc = "zero", packet, out;
    uint64_t port = 0, maxSteps = 1000000;
    bool trace = false, json = false;
};

StfOptions stf_options(const RunArgs &a) {
    StfOptions o;
    o.havoc = parse_havoc_mode(a.havoc);
    o.maxSteps = a.maxSteps;
    if (a.trace) o.hooks.trace = [](const std::string &line) { std::cerr << line << "\n"; };
    if (!a.cp.empty()) o.controlPlane = ControlPlane::from_json(read_file(a.cp));
    return o;
}

int stf_report(const RunReport &r, bool json) {
    std::cout << (json ? report_json(r) + "\n" : report_text(r));
    if (r.has_errors()) return kRuntimeError;
    return r.passed() ? kOk : kTestFailure;
}

int cmd_run(const RunArgs &a, const Common &c) {
    Program p = load(a.file, c);
    StfOptions o = stf_options(a);
    if (!a.stf.empty()) return stf_report(run_stf(p, parse_stf(read_file(a.stf)), o), a.json);
    check_program(p, three_stage_lite_bootstrap().contexts);
    std::vector<uint8_t> bytes;
    try {
        bytes = parse_hex(a.packet);
    } catch (const std::invalid_argument &e) {
        throw UsageError(std::string("--packet: ") + e.what());
    }
    PacketOutcome out = run_packet(p, o.controlPlane, a.port, bytes, o);
    RunReport r;
    r.packets.push_back(out);
    if (a.json) {
        std::cout << report_json(r) << "\n";
    } else {
        std::cout << "signal: " << (out.exited ? "exit" : "cont") << "\n"
                  << "egress: " << (out.egress ? std::to_string(*out.egress) : "unset") << "\n"
                  << "dropped: " << (out.dropped ? "true" : "false") << "\n"
                  << "output: " << to_hex(out.output) << "\n"
                  << "steps: " << out.steps << "\n";
        if (!out.result.empty()) std::cout << "result: " << out.result << "\n";
        if (!out.error.empty()) std::cerr << "error: " << out.error << "\n";
    }
    return out.error.empty() ? kOk : kRuntimeError;
}

int cmd_translate(const std::string &file, const std::string &out, bool wrongTag, const Common &c) {
    Program p = load(file, c);
    TranslateOptions o;
    o.wrongTag = wrongTag;
    write_output(out, pretty_print(translate_program(p, three_stage_lite_bootstrap().contexts, o)));
    return kOk;
}

int cmd_diff(const std::string &file, const std::string &packet, uint64_t port, bool wrongTag, const Common &c) {
    Program p = load(file, c);
    DiffOptions o;
    o.translate.wrongTag = wrongTag;
    o.packet = parse_hex(packet);
    o.ingress = port;
    DiffVerdict v = diff_union_semantics(p, o);
    std::cout << "extended: " << v.extendedSignal << ", " << v.extendedSteps << " steps\n"
              << "translated: " << v.translatedSignal << ", " << v.translatedSteps << " steps\n";
    if (!v.pass) std::cout << "differs: " << v.reason << "\n";
    std::cout << (v.pass ? "PASS" : "FAIL") << "\n";
    return v.pass ? kOk : kTestFailure;
}

int cmd_gen(const GenConfig &cfg, const std::string &out) {
    write_output(out, pretty_print(generate_typed_program(cfg)));
    return kOk;
}

int cmd_soundness(uint64_t n, const GenConfig &cfg, const std::string &mutate, bool json) {
    SoundnessOptions o;
    if (mutate == "skip-copy-out") o.hooks.skipCopyOut = true;
    else if (mutate == "reverse-copy-out") o.hooks.copyOutReverse = true;
    else if (mutate == "ill-typed-havoc") o.makeTarget = make_ill_typed_havoc_target;
    else if (!mutate.empty()) throw UsageError("unknown mutation '" + mutate + "'");
    SoundnessStats s = run_soundness_suite(n, cfg, o);
    if (json) {
        nlohmann::json j = {{"programs", s.programs},     {"passed", s.passed},
                            {"exhausted", s.exhausted},   {"exited", s.exited},
                            {"outCalls", s.outCalls},     {"returnsChecked", s.returnsChecked},
                            {"totalSteps", s.totalSteps}, {"maxSteps", s.maxSteps}};
        j["failures"] = nlohmann::json::array();
        for (const auto &f : s.failures) j["failures"].push_back({{"seed", f.seed}, {"reason", f.reason}});
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "programs: " << s.programs << "\npassed: " << s.passed << "\nexhausted: " << s.exhausted
                  << "\nexited: " << s.exited << "\nout/inout calls: " << s.outCalls
                  << "\nreturns checked: " << s.returnsChecked << "\nmax steps: " << s.maxSteps << "\n";
        for (const auto &f : s.failures) std::cout << "FAIL seed " << f.seed << ": " << f.reason << "\n";
        std::cout << (s.ok() ? "PASS" : "FAIL") << "\n";
    }
    return s.ok() ? kOk : kTestFailure;
}

void gen_options(CLI::App *cmd, GenConfig &cfg) {
    cmd->add_option("--seed", cfg.seed, "First seed");
    cmd->add_option("--depth", cfg.maxDepth, "Maximum depth")->check(CLI::PositiveNumber);
    cmd->add_option("--decls", cfg.maxDecls, "Maximum number of declarations");
    cmd->add_flag("--unions", cfg.unions, "Generate unions");
    cmd->add_flag("!--no-tables", cfg.tables, "No controls or tables");
    cmd->add_flag("!--no-calls", cfg.calls, "No function declarations");
    cmd->add_flag("!--no-stacks", cfg.stacks, "No header stacks");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"pcore: typechecker and interpreter for the P4 core calculus"};
    app.require_subcommand(1);
    Common common;
    app.add_flag("--allow-reserved", common.allowReserved, "Accept $-prefixed identifiers in source");

    std::string checkFile;
    auto *check = app.add_subcommand("check", "Typecheck a program");
    check->add_option("file", checkFile, "Program")->required();
    bool dumpAst = false;
    check->add_flag("--dump-ast", dumpAst, "Print the program as JSON, then typecheck it");

    RunArgs run;
    auto *runCmd = app.add_subcommand("run", "Run a program on one packet or an STF script");
    runCmd->add_option("file", run.file, "Program")->required();
    runCmd->add_option("--stf", run.stf, "Packet test script");
    runCmd->add_option("--cp", run.cp, "Control-plane rules (JSON)");
    runCmd->add_option("--havoc", run.havoc, "Havoc mode: zero or seed:N");
    runCmd->add_option("--max-steps", run.maxSteps, "Step budget (0 = unlimited)");
    runCmd->add_option("--packet", run.packet, "Input packet (hex)");
    runCmd->add_option("--port", run.port, "Ingress port");
    runCmd->add_flag("--trace", run.trace, "Print one line per rule applied (stderr)");
    runCmd->add_flag("--json", run.json, "Structured report");

    RunArgs stf;
    auto *stfCmd = app.add_subcommand("stf", "Run a packet test script");
    stfCmd->add_option("file", stf.file, "Program")->required();
    stfCmd->add_option("script", stf.stf, "Packet test script")->required();
    stfCmd->add_option("--cp", stf.cp, "Control-plane rules (JSON)");
    stfCmd->add_option("--havoc", stf.havoc, "Havoc mode: zero or seed:N");
    stfCmd->add_option("--max-steps", stf.maxSteps, "Step budget (0 = unlimited)");
    stfCmd->add_flag("--trace", stf.trace, "Print one line per rule applied (stderr)");
    stfCmd->add_flag("--json", stf.json, "Structured report");

    std::string trFile, trOut;
    bool trWrong = false;
    auto *trCmd = app.add_subcommand("translate-unions", "Rewrite unions into tagged records");
    trCmd->add_option("file", trFile, "Program")->required();
    trCmd->add_option("-o,--output", trOut, "Output file (default stdout)");
    trCmd->add_flag("--wrong-tag", trWrong, "Store a wrong tag at union assignments (fault injection)");

    std::string dfFile, dfPacket;
    uint64_t dfPort = 0;
    bool dfWrong = false;
    auto *dfCmd = app.add_subcommand("diff-unions", "Run a program and its union translation and compare");
    dfCmd->add_option("file", dfFile, "Program")->required();
    dfCmd->add_option("--packet", dfPacket, "Input packet (hex)");
    dfCmd->add_option("--port", dfPort, "Ingress port");
    dfCmd->add_flag("--wrong-tag", dfWrong, "Store a wrong tag at union assignments (fault injection)");

    GenConfig genCfg;
    std::string genOut;
    auto *genCmd = app.add_subcommand("gen", "Print a generated well-typed program");
    gen_options(genCmd, genCfg);
    genCmd->add_option("-o,--output", genOut, "Output file (default stdout)");

    GenConfig sCfg;
    uint64_t sN = 100;
    std::string sMutate;
    bool sJson = false;
    auto *sCmd = app.add_subcommand("soundness", "Check type soundness on generated programs");
    gen_options(sCmd, sCfg);
    sCmd->add_option("-n,--count", sN, "Number of programs");
    sCmd->add_option("--mutate", sMutate, "Mutation: skip-copy-out, reverse-copy-out or ill-typed-havoc");
    sCmd->add_flag("--json", sJson, "Structured report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*check) return cmd_check(checkFile, dumpAst, common);
        if (*runCmd) return cmd_run(run, common);
        if (*stfCmd) return cmd_run(stf, common);
        if (*trCmd) return cmd_translate(trFile, trOut, trWrong, common);
        if (*dfCmd) return cmd_diff(dfFile, dfPacket, dfPort, dfWrong, common);
        if (*genCmd) return cmd_gen(genCfg, genOut);
        if (*sCmd) return cmd_soundness(sN, sCfg, sMutate, sJson);
    } catch (const UsageError &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const LexError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kTypeError;
    } catch (const ParseError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kTypeError;
    } catch (const TypeError &e) {
        std::cerr << "type error: " << e.what() << "\n";
        return kTypeError;
    } catch (const StfParseError &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const RuntimeError &e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kRuntimeError;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
    return kUsage;
}

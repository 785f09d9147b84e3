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

#include "pcore/stf.hpp"

#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pcore/errors.hpp"
#include "pcore/typecheck.hpp"

namespace pcore {

namespace {

std::vector<std::string> words(const std::string &line) {
    std::istringstream in(line);
    std::vector<std::string> ws;
    std::string w;
    while (in >> w) ws.push_back(w);
    return ws;
}

uint64_t parse_port(const std::string &w, int line) {
    if (w.empty() || w.find_first_not_of("0123456789") != std::string::npos || w.size() > 18)
        throw StfParseError("stf", {line, 1}, "bad port '" + w + "'");
    return std::stoull(w);
}

std::vector<uint8_t> parse_payload(const std::vector<std::string> &ws, size_t from, int line) {
    std::string hex;
    for (size_t i = from; i < ws.size(); ++i) hex += ws[i];
    try {
        return parse_hex(hex);
    } catch (const std::invalid_argument &e) {
        throw StfParseError("stf", {line, 1}, e.what());
    }
}

// `MyPipe.allow(1, 2)` split over whitespace is rejoined before parsing.
void parse_action(const std::string &text, CpRule &rule, int line) {
    auto open = text.find('(');
    if (open == std::string::npos || text.back() != ')')
        throw StfParseError("stf", {line, 1}, "expected an action call, got '" + text + "'");
    rule.action = text.substr(0, open);
    std::string inside = text.substr(open + 1, text.size() - open - 2);
    std::string cur;
    for (char c : inside) {
        if (c == ',') {
            rule.args.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) rule.args.push_back(cur);
    else if (!rule.args.empty()) throw StfParseError("stf", {line, 1}, "empty action argument");
}

std::string hex_or_none(const std::optional<std::vector<uint8_t>> &b) { return b ? to_hex(*b) : "(none)"; }

}  // namespace

StfScript parse_stf(const std::string &text) {
    StfScript s;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        auto ws = words(raw);
        if (ws.empty()) continue;
        StfCommand c;
        c.line = line;
        if (ws[0] == "add") {
            c.kind = StfCommand::Kind::Add;
            if (ws.size() < 3) throw StfParseError("stf", {line, 1}, "add needs a table and an action");
            c.rule.table = ws[1];
            size_t i = 2;
            for (; i < ws.size() && ws[i].find('(') == std::string::npos; ++i) {
                auto colon = ws[i].rfind(':');
                if (colon == std::string::npos) c.rule.keys.push_back({"", ws[i]});
                else c.rule.keys.push_back({ws[i].substr(0, colon), ws[i].substr(colon + 1)});
            }
            std::string action;
            for (; i < ws.size(); ++i) action += (action.empty() ? "" : " ") + ws[i];
            if (action.empty()) throw StfParseError("stf", {line, 1}, "add needs an action call");
            parse_action(action, c.rule, line);
        } else if (ws[0] == "packet" || ws[0] == "expect") {
            c.kind = ws[0] == "packet" ? StfCommand::Kind::Packet : StfCommand::Kind::Expect;
            if (ws.size() < 2) throw StfParseError("stf", {line, 1}, ws[0] + " needs a port");
            c.port = parse_port(ws[1], line);
            c.bytes = parse_payload(ws, 2, line);
        } else {
            throw StfParseError("stf", {line, 1}, "unknown command '" + ws[0] + "'");
        }
        s.commands.push_back(std::move(c));
    }
    return s;
}

bool RunReport::passed() const {
    if (has_errors()) return false;
    for (const auto &e : expects)
        if (!e.pass) return false;
    return true;
}

bool RunReport::has_errors() const {
    for (const auto &p : packets)
        if (!p.error.empty()) return true;
    return false;
}

PacketOutcome run_packet(const Program &p, const ControlPlane &cp, uint64_t ingress, const std::vector<uint8_t> &bytes,
                         const StfOptions &opts) {
    PacketOutcome out;
    out.ingress = ingress;
    out.input = bytes;
    Bootstrap boot = three_stage_lite_bootstrap();
    auto [m, env] = boot.make_machine(bytes, ingress);
    ThreeStageLite target(cp, opts.havoc);
    Evaluator ev(target, opts.hooks, opts.maxSteps);
    try {
        auto r = run_program(ev, m, boot.runtimeDelta, env, p);
        out.exited = r.sig.kind == Signal::Kind::Exit;
        if (r.mainResult) out.result = show_value(r.mainResult);
    } catch (const Error &e) {
        out.error = e.what();
    }
    out.steps = ev.steps();
    const PacketState &ps = m.target->packet;
    out.egress = ps.egress;
    out.dropped = ps.dropped;
    if (out.forwarded()) out.output = packet_output(ps);
    return out;
}

RunReport run_stf(const Program &p, const StfScript &script, const StfOptions &opts) {
    check_program(p, three_stage_lite_bootstrap().contexts);
    ControlPlane cp = opts.controlPlane;
    for (const auto &c : script.commands)
        if (c.kind == StfCommand::Kind::Add) cp.add(c.rule);

    RunReport r;
    std::map<uint64_t, std::vector<std::vector<uint8_t>>> forwarded;
    std::map<uint64_t, size_t> consumed;
    for (const auto &c : script.commands) {
        if (c.kind != StfCommand::Kind::Packet) continue;
        PacketOutcome o = run_packet(p, cp, c.port, c.bytes, opts);
        o.line = c.line;
        if (o.forwarded()) forwarded[*o.egress].push_back(o.output);
        r.packets.push_back(std::move(o));
    }
    for (const auto &c : script.commands) {
        if (c.kind != StfCommand::Kind::Expect) continue;
        ExpectVerdict v;
        v.line = c.line;
        v.port = c.port;
        v.expected = c.bytes;
        size_t &k = consumed[c.port];
        const auto &q = forwarded[c.port];
        if (k < q.size()) {
            v.actual = q[k++];
            v.pass = *v.actual == c.bytes;
        }
        r.expects.push_back(std::move(v));
    }
    return r;
}

std::string report_text(const RunReport &r) {
    std::ostringstream out;
    for (const auto &p : r.packets) {
        out << "packet line " << p.line << ": in port " << p.ingress << " " << to_hex(p.input) << " -> ";
        if (!p.error.empty()) out << "error: " << p.error;
        else if (p.dropped) out << "dropped";
        else if (!p.egress) out << "no egress port";
        else out << "out port " << *p.egress << " " << to_hex(p.output);
        out << (p.exited ? " (exit)" : "") << ", " << p.steps << " steps\n";
    }
    for (const auto &e : r.expects)
        out << "expect line " << e.line << ": port " << e.port << " " << to_hex(e.expected) << " "
            << (e.pass ? "PASS" : "FAIL") << (e.pass ? "" : " (got " + hex_or_none(e.actual) + ")") << "\n";
    out << (r.passed() ? "PASS" : "FAIL") << "\n";
    return out.str();
}

std::string report_json(const RunReport &r) {
    nlohmann::json j;
    j["packets"] = nlohmann::json::array();
    for (const auto &p : r.packets) {
        nlohmann::json o = {{"line", p.line},        {"ingress", p.ingress}, {"input", to_hex(p.input)},
                            {"dropped", p.dropped},  {"exited", p.exited},   {"steps", p.steps},
                            {"output", to_hex(p.output)}};
        o["egress"] = p.egress ? nlohmann::json(*p.egress) : nlohmann::json(nullptr);
        if (!p.error.empty()) o["error"] = p.error;
        if (!p.result.empty()) o["result"] = p.result;
        j["packets"].push_back(o);
    }
    j["expects"] = nlohmann::json::array();
    for (const auto &e : r.expects) {
        nlohmann::json o = {{"line", e.line}, {"port", e.port}, {"expected", to_hex(e.expected)}, {"pass", e.pass}};
        o["actual"] = e.actual ? nlohmann::json(to_hex(*e.actual)) : nlohmann::json(nullptr);
        j["expects"].push_back(o);
    }
    j["pass"] = r.passed();
    return j.dump(2);
}

}  // namespace pcore

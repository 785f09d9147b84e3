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

#include <array>
#include <cctype>
#include <string>

#include "pcore/errors.hpp"
#include "pcore/frontend.hpp"

namespace pcore {

namespace {

const std::set<std::string> &keywords() {
    static const std::set<std::string> kw = {
        "bool",    "int",    "bit",   "error", "match_kind", "enum",   "header",  "record",
        "typedef", "const",  "control", "table", "exit",     "return", "if",      "else",
        "init",    "union",  "switch", "case", "default",    "apply",  "in",      "out",
        "inout",   "true",   "false",
    };
    return kw;
}

// Longest match first.
constexpr std::array<const char *, 35> kPuncts = {
    ":=", "<:", ":>", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "++",
    "{",  "}",  "(",  ")",  "[",  "]",  "<",  ">",  "=",  ":",  ";",  ",",
    ".",  "+",  "-",  "*",  "/",  "%",  "&",  "|",  "^",  "~",  "!",
};

int digit_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::vector<Token> lex(std::string_view text, LexOptions opts) {
    std::vector<Token> out;
    size_t i = 0;
    int line = 1, col = 1;
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n && i < text.size(); ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        Token tok;
        tok.pos = {line, col};
        bool reserved = c == '$' && opts.allowReserved && i + 1 < text.size() &&
                        (std::isalpha(static_cast<unsigned char>(text[i + 1])) || text[i + 1] == '_');
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || reserved) {
            size_t j = i + 1;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
            tok.text = std::string(text.substr(i, j - i));
            tok.kind = keywords().count(tok.text) ? TokenKind::Keyword : TokenKind::Ident;
            advance(j - i);
            out.push_back(std::move(tok));
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            int base = 10;
            if (c == '0' && i + 1 < text.size() && (text[i + 1] == 'x' || text[i + 1] == 'X')) {
                base = 16;
                j += 2;
            }
            size_t start = j;
            BigInt v = 0;
            while (j < text.size()) {
                int d = digit_value(text[j]);
                if (d < 0 || d >= base) break;
                v = v * base + d;
                ++j;
            }
            if (j == start) throw LexError("lex", tok.pos, "malformed integer literal");
            if (j + 1 < text.size() && text[j] == 'w' && text[j + 1] == '\'') {
                size_t k = j + 2, ws = k;
                uint64_t w = 0;
                while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
                    w = w * 10 + static_cast<uint64_t>(text[k] - '0');
                    if (w > (1u << 20)) throw LexError("lex", tok.pos, "width too large");
                    ++k;
                }
                if (k == ws) throw LexError("lex", tok.pos, "missing width after w'");
                if (v >= (BigInt(1) << w)) throw LexError("lex", tok.pos, "literal does not fit its width");
                tok.width = w;
                j = k;
            }
            if (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                throw LexError("lex", {line, col + static_cast<int>(j - i)}, "malformed integer literal");
            tok.kind = TokenKind::IntLit;
            tok.text = std::string(text.substr(i, j - i));
            tok.value = v;
            advance(j - i);
            out.push_back(std::move(tok));
            continue;
        }
        bool matched = false;
        for (const char *p : kPuncts) {
            std::string_view ps(p);
            if (text.substr(i, ps.size()) == ps) {
                tok.kind = TokenKind::Punct;
                tok.text = std::string(ps);
                advance(ps.size());
                out.push_back(std::move(tok));
                matched = true;
                break;
            }
        }
        if (!matched) {
            throw LexError("lex", tok.pos, std::string("unrecognized character '") + c + "'");
        }
    }
    Token end;
    end.kind = TokenKind::End;
    end.pos = {line, col};
    out.push_back(end);
    return out;
}

}  // namespace pcore

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

#include <gtest/gtest.h>

#include "pcore/errors.hpp"
#include "pcore/frontend.hpp"
#include "pcore/generate.hpp"

using namespace pcore;

namespace {

std::vector<std::pair<TokenKind, std::string>> kinds(const std::vector<Token> &ts) {
    std::vector<std::pair<TokenKind, std::string>> out;
    for (const auto &t : ts) out.emplace_back(t.kind, t.text);
    return out;
}

TEST(Lex, ConstDecl) {
    auto ts = lex("const int w = 8; // trailing comment");
    std::vector<std::pair<TokenKind, std::string>> want = {
        {TokenKind::Keyword, "const"}, {TokenKind::Keyword, "int"}, {TokenKind::Ident, "w"},
        {TokenKind::Punct, "="},       {TokenKind::IntLit, "8"},    {TokenKind::Punct, ";"},
        {TokenKind::End, ""},
    };
    ASSERT_EQ(ts.size(), want.size());
    for (size_t i = 0; i + 1 < ts.size(); ++i) {
        EXPECT_EQ(ts[i].kind, want[i].first) << i;
        EXPECT_EQ(ts[i].text, want[i].second) << i;
    }
    EXPECT_EQ(ts.back().kind, TokenKind::End);
    EXPECT_EQ(ts[4].value, 8);
    EXPECT_FALSE(ts[4].width);
}

TEST(Lex, BitType) {
    auto ts = lex("bit<7>");
    ASSERT_EQ(ts.size(), 5u);
    EXPECT_EQ(ts[0].text, "bit");
    EXPECT_EQ(ts[1].text, "<");
    EXPECT_EQ(ts[2].value, 7);
    EXPECT_EQ(ts[3].text, ">");
}

TEST(Lex, WidthSuffixAndHex) {
    auto ts = lex("0xFFw'8 3w'2");
    EXPECT_EQ(ts[0].value, 255);
    EXPECT_EQ(ts[0].width, 8u);
    EXPECT_EQ(ts[1].value, 3);
    EXPECT_EQ(ts[1].width, 2u);
}

TEST(Lex, RejectsUnknownCharacter) {
    EXPECT_THROW(lex("@"), LexError);
    EXPECT_THROW(lex("$tmp0"), LexError);
    LexOptions o;
    o.allowReserved = true;
    EXPECT_NO_THROW(lex("$tmp0", o));
}

TEST(Parse, PipelineBody) {
    StmtPtr s = parse_statement("{ meta.egress_port := (bit<8>) hops[0]; pop_front<:hop[9]:>(hops, 1); acl(); }",
                                {"hop"});
    ASSERT_EQ(s->kind, StmtKind::Block);
    ASSERT_EQ(s->stmts.size(), 3u);
    EXPECT_EQ(s->stmts[0]->kind, StmtKind::Assign);
    EXPECT_EQ(s->stmts[1]->kind, StmtKind::Call);
    EXPECT_EQ(s->stmts[2]->kind, StmtKind::Call);
}

TEST(Parse, ConstantWidth) {
    Program p = parse_program("const int w = 8; bit<w> x := 1w'8; bit<8> y := x;");
    ASSERT_EQ(p.decls.size(), 3u);
    EXPECT_EQ(p.decls[0]->kind, DeclKind::Const);
    EXPECT_EQ(p.decls[1]->kind, DeclKind::VarInit);
    EXPECT_EQ(p.decls[2]->kind, DeclKind::VarInit);
    EXPECT_TRUE(p.decls[1]->type->widthExpr);
}

TEST(Parse, TableNeedsAnAction) {
    EXPECT_THROW(parse_program("control C() { table t { key = {} actions = {} } apply {} }"), ParseError);
}

TEST(Parse, Expressions) {
    ExprPtr s = parse_expression("bits[n*8-1:(n-1)*8]");
    ASSERT_EQ(s->kind, ExprKind::Slice);
    EXPECT_EQ(s->sub.size(), 3u);
    EXPECT_EQ(parse_expression("x")->kind, ExprKind::Var);
    ExprPtr c = parse_expression("f<:bit<8>:>(y)");
    ASSERT_EQ(c->kind, ExprKind::Call);
    EXPECT_EQ(c->typeArgs.size(), 1u);
    EXPECT_EQ(c->args.size(), 1u);
}

TEST(Parse, ReportsPosition) {
    try {
        parse_program("bit<8> x := ;");
        FAIL() << "expected ParseError";
    } catch (const ParseError &e) {
        EXPECT_EQ(e.pos().line, 1);
        EXPECT_GT(e.pos().col, 1);
    }
}

TEST(Print, Examples) {
    EXPECT_EQ(pretty_print(ex::var("x")), "x");
    EXPECT_EQ(pretty_print(ex::cast(ty::bit(8), ex::integer(4))), "(bit<8>) 4");
}

TEST(Print, RoundTripsFixtures) {
    Program p = parse_program(
        "typedef header { bit<7> port; bit<1> bos; } hop;"
        "bool f(inout hop h, in bit<8> n) { if (h.bos == 0w'1) { return true; } else { exit; } }");
    EXPECT_TRUE(equal(parse_program(pretty_print(p)), p));
}

TEST(Print, RoundTripsGeneratedPrograms) {
    for (uint64_t s = 1; s <= 100; ++s) {
        GenConfig cfg;
        cfg.seed = s;
        cfg.unions = s % 2 == 0;
        Program p = generate_typed_program(cfg);
        std::string text = pretty_print(p);
        EXPECT_TRUE(equal(parse_program(text), p)) << "seed " << s;
        EXPECT_EQ(pretty_print(parse_program(text)), text) << "seed " << s;
    }
}

}  // namespace

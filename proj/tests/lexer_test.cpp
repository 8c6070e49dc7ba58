#include "a4/token.hpp"

#include <gtest/gtest.h>

#include <random>
#include <string>

namespace a4 {
namespace {

std::string concat(const TokenStream& ts) {
  std::string out;
  for (const Token& t : ts) out += t.text;
  return out;
}

TEST(Lexer, RoundTripsSimpleMethod) {
  std::string src =
      "class A {\n"
      "  int f(int x) { return x + 1; }\n"
      "}\n";
  TokenStream ts = tokenize(src);
  EXPECT_EQ(concat(ts), src);
}

TEST(Lexer, SpansAreContiguousAndExact) {
  std::string src = "int a = b.get(0x1F, \"s\\\"t\") /* c */ // eol\n";
  TokenStream ts = tokenize(src);
  std::size_t expect = 0;
  for (const Token& t : ts) {
    EXPECT_EQ(t.span.begin, expect);
    EXPECT_EQ(t.span.end, expect + t.text.size());
    EXPECT_EQ(src.substr(t.span.begin, t.text.size()), t.text);
    expect = t.span.end;
  }
  EXPECT_EQ(expect, src.size());
}

TEST(Lexer, ClassifiesKinds) {
  TokenStream ts = tokenize("final x = 12.5f; // done");
  ASSERT_GE(ts.size(), 8u);
  EXPECT_EQ(ts[0].kind, TokenKind::Keyword);
  EXPECT_EQ(ts[2].kind, TokenKind::Identifier);
  EXPECT_EQ(ts[4].kind, TokenKind::Punctuation);
  EXPECT_EQ(ts[6].kind, TokenKind::Literal);
  EXPECT_EQ(ts[6].text, "12.5f");
  EXPECT_EQ(ts.back().kind, TokenKind::Comment);
}

TEST(Lexer, BooleanAndNullAreLiterals) {
  TokenStream ts = tokenize("true false null");
  ASSERT_EQ(significant_texts("true false null").size(), 3u);
  for (const Token& t : ts) {
    if (!t.is_trivia()) EXPECT_EQ(t.kind, TokenKind::Literal);
  }
}

TEST(Lexer, MultiCharOperatorsStayWhole) {
  TokenStream ts = tokenize("a >>= b >>> c != d -> e::f");
  std::vector<std::string> ops;
  for (const Token& t : ts) {
    if (t.kind == TokenKind::Punctuation) ops.push_back(t.text);
  }
  EXPECT_EQ(ops, (std::vector<std::string>{">>=", ">>>", "!=", "->", "::"}));
}

TEST(Lexer, UnterminatedStringRunsToEndOfLine) {
  std::string src = "String s = \"oops;\nint x = 1;\n";
  TokenStream ts = tokenize(src);
  EXPECT_EQ(concat(ts), src);
  bool found = false;
  for (const Token& t : ts) {
    if (t.kind == TokenKind::Literal && t.text == "\"oops;") found = true;
  }
  EXPECT_TRUE(found);
}

TEST(Lexer, UnterminatedBlockCommentRunsToEof) {
  std::string src = "int x; /* trailing";
  TokenStream ts = tokenize(src);
  EXPECT_EQ(concat(ts), src);
  EXPECT_EQ(ts.back().kind, TokenKind::Comment);
}

TEST(Lexer, RoundTripsRandomBytes) {
  std::mt19937 rng(20240817);
  const char alphabet[] =
      "abcXYZ_$0129 \t\n.;,(){}[]<>+-*/%&|^!~?:=\"'\\@#`";
  for (int iter = 0; iter < 300; ++iter) {
    std::uniform_int_distribution<int> len_dist(0, 120);
    std::uniform_int_distribution<int> ch_dist(0, sizeof(alphabet) - 2);
    std::string src;
    int len = len_dist(rng);
    for (int i = 0; i < len; ++i) src += alphabet[ch_dist(rng)];
    TokenStream ts = tokenize(src);
    ASSERT_EQ(concat(ts), src) << "round trip failed on: " << src;
  }
}

TEST(JoinTokens, RebuildsReadableStatement) {
  std::vector<std::string> toks = {"int", "color", "=",   "res", ".",
                                   "getColor", "(", "colorId", ")", ";"};
  EXPECT_EQ(join_tokens(toks), "int color = res.getColor(colorId);");
}

TEST(JoinTokens, HandlesArgumentLists) {
  std::vector<std::string> toks = {"f", "(", "a", ",", "b", ",", "null", ")"};
  EXPECT_EQ(join_tokens(toks), "f(a, b, null)");
}

TEST(NormalizeSnippet, IsIdempotentOverItsOwnOutput) {
  std::string src = "  int   color=res . getColor( colorId ) ;  ";
  std::string once = normalize_snippet(src);
  EXPECT_EQ(once, "int color = res.getColor(colorId);");
  EXPECT_EQ(normalize_snippet(once), once);
}

}  // namespace
}  // namespace a4

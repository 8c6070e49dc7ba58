#include "a4/parser.hpp"

#include <gtest/gtest.h>

#include <random>
#include <string>

namespace a4 {
namespace {

NodeId first_of(const Ast& ast, NodeKind kind) {
  auto found = ast.collect(kind);
  return found.empty() ? kInvalidNode : found.front();
}

TEST(Parser, ParsesCompilationUnitShape) {
  auto r = parse(
      "package com.example.app;\n"
      "import android.content.res.Resources;\n"
      "class Painter {\n"
      "  int tint;\n"
      "  int shade(Resources res, int id) {\n"
      "    int color = res.getColor(id);\n"
      "    return color + tint;\n"
      "  }\n"
      "}\n");
  EXPECT_EQ(r.completeness, Completeness::Full) << (r.diagnostics.empty()
      ? "" : r.diagnostics.front().message);
  const Ast& ast = r.ast;
  EXPECT_EQ(ast.node(ast.root()).name, "com.example.app");
  ASSERT_NE(first_of(ast, NodeKind::ImportDecl), kInvalidNode);
  EXPECT_EQ(ast.node(first_of(ast, NodeKind::ImportDecl)).name,
            "android.content.res.Resources");
  NodeId cls = first_of(ast, NodeKind::ClassDecl);
  ASSERT_NE(cls, kInvalidNode);
  EXPECT_EQ(ast.node(cls).name, "Painter");
  NodeId method = first_of(ast, NodeKind::MethodDecl);
  ASSERT_NE(method, kInvalidNode);
  EXPECT_EQ(ast.node(method).name, "shade");
  EXPECT_EQ(ast.node(method).declared_type, "int");
}

TEST(Parser, MethodParamsAreLocalVarDeclChildren) {
  auto r = parse("class A { void f(String s, int n) {} }");
  NodeId method = first_of(r.ast, NodeKind::MethodDecl);
  ASSERT_NE(method, kInvalidNode);
  std::vector<std::pair<std::string, std::string>> params;
  for (NodeId c : r.ast.node(method).children) {
    const AstNode& n = r.ast.node(c);
    if (n.kind == NodeKind::LocalVarDecl) params.push_back({n.name, n.declared_type});
  }
  ASSERT_EQ(params.size(), 2u);
  EXPECT_EQ(params[0], (std::pair<std::string, std::string>{"s", "String"}));
  EXPECT_EQ(params[1], (std::pair<std::string, std::string>{"n", "int"}));
}

TEST(Parser, InvocationCarriesReceiverNameAndArgs) {
  auto r = parse("class A { void f(Resources res) { res.getColor(1, null); } }");
  NodeId call = first_of(r.ast, NodeKind::MethodInvocation);
  ASSERT_NE(call, kInvalidNode);
  const AstNode& n = r.ast.node(call);
  EXPECT_EQ(n.name, "getColor");
  EXPECT_TRUE(n.has_receiver);
  NodeId recv = invocation_receiver(r.ast, call);
  ASSERT_NE(recv, kInvalidNode);
  EXPECT_EQ(r.ast.node(recv).name, "res");
  EXPECT_EQ(invocation_arg_count(r.ast, call), 2u);
  EXPECT_EQ(r.ast.text_of(invocation_arg(r.ast, call, 0)), "1");
  EXPECT_EQ(r.ast.text_of(invocation_arg(r.ast, call, 1)), "null");
  EXPECT_EQ(r.ast.text_of(call), "res.getColor(1, null)");
}

TEST(Parser, NodeSpansSliceSourceExactly) {
  std::string src =
      "class A { int f() { int x = g(1 + 2); return x * 3; } }";
  auto r = parse(src);
  r.ast.walk([&](NodeId, const AstNode& n) {
    ASSERT_LE(n.span.begin, n.span.end);
    ASSERT_LE(n.span.end, src.size());
  });
  NodeId decl = first_of(r.ast, NodeKind::LocalVarDecl);
  ASSERT_NE(decl, kInvalidNode);
  EXPECT_EQ(r.ast.text_of(decl), "int x = g(1 + 2);");
  NodeId ret = first_of(r.ast, NodeKind::ReturnStmt);
  ASSERT_NE(ret, kInvalidNode);
  EXPECT_EQ(r.ast.text_of(ret), "return x * 3;");
}

TEST(Parser, ChildSpansNestInsideParents) {
  auto r = parse(
      "class A { void f(int n) { if (n > 0) { n = n - 1; } else { n = 0; } } }");
  ASSERT_EQ(r.completeness, Completeness::Full);
  r.ast.walk([&](NodeId id, const AstNode& n) {
    for (NodeId c : n.children) {
      const AstNode& child = r.ast.node(c);
      EXPECT_GE(child.span.begin, n.span.begin)
          << r.ast.text_of(id) << " vs child " << r.ast.text_of(c);
      EXPECT_LE(child.span.end, n.span.end);
    }
  });
}

TEST(Parser, IfWhileForCaptureHeaderSpans) {
  std::string src =
      "class A { void f(int n) {\n"
      "  while (n > 0) { n--; }\n"
      "  if (n == 0) { n = 1; }\n"
      "  for (int i = 0; i < n; i++) { n += i; }\n"
      "} }";
  auto r = parse(src);
  auto header_text = [&](NodeKind k) {
    NodeId id = first_of(r.ast, k);
    const ByteSpan& h = r.ast.node(id).header_span;
    return std::string(src.substr(h.begin, h.end - h.begin));
  };
  EXPECT_EQ(header_text(NodeKind::WhileStmt), "(n > 0)");
  EXPECT_EQ(header_text(NodeKind::IfStmt), "(n == 0)");
  EXPECT_EQ(header_text(NodeKind::ForStmt), "(int i = 0; i < n; i++)");
}

TEST(Parser, EnhancedForBindsLoopVariable) {
  auto r = parse("class A { void f(int[] xs) { for (int x : xs) { g(x); } } }");
  NodeId loop = first_of(r.ast, NodeKind::ForStmt);
  ASSERT_NE(loop, kInvalidNode);
  EXPECT_TRUE(r.ast.node(loop).is_enhanced_for);
  EXPECT_EQ(r.ast.node(loop).name, "x");
  EXPECT_EQ(r.ast.node(loop).declared_type, "int");
}

TEST(Parser, TryCatchFinallyStructure) {
  auto r = parse(
      "class A { void f() {\n"
      "  try { g(); } catch (Exception e) { h(e); } finally { k(); }\n"
      "} }");
  ASSERT_EQ(r.completeness, Completeness::Full);
  NodeId tryStmt = first_of(r.ast, NodeKind::TryStmt);
  ASSERT_NE(tryStmt, kInvalidNode);
  const AstNode& t = r.ast.node(tryStmt);
  ASSERT_EQ(t.children.size(), 3u);
  EXPECT_EQ(r.ast.node(t.children[0]).op, "try");
  EXPECT_EQ(r.ast.node(t.children[1]).op, "catch");
  EXPECT_EQ(r.ast.node(t.children[2]).op, "finally");
  ASSERT_EQ(t.extra_names.size(), 1u);
  EXPECT_EQ(t.extra_names[0], "e");
  const AstNode& catch_block = r.ast.node(t.children[1]);
  ASSERT_FALSE(catch_block.children.empty());
  const AstNode& param = r.ast.node(catch_block.children[0]);
  EXPECT_EQ(param.kind, NodeKind::LocalVarDecl);
  EXPECT_EQ(param.name, "e");
  EXPECT_EQ(param.declared_type, "Exception");
}

TEST(Parser, CastNodeKeepsTypeText) {
  auto r = parse("class A { void f(Object o) { String s = (String) o; } }");
  NodeId cast = first_of(r.ast, NodeKind::Cast);
  ASSERT_NE(cast, kInvalidNode);
  EXPECT_EQ(r.ast.node(cast).declared_type, "String");
  EXPECT_EQ(r.completeness, Completeness::Full);
}

TEST(Parser, ParenthesizedArithmeticIsNotACast) {
  auto r = parse("class A { int f(int a, int b) { return (a) + b * (a - b); } }");
  EXPECT_EQ(r.ast.collect(NodeKind::Cast).size(), 0u);
  EXPECT_EQ(r.completeness, Completeness::Full);
}

TEST(Parser, LambdaBecomesOpaqueWithDiagnostic) {
  auto r = parse("class A { void f(Runnable r) { run(() -> doIt()); } }");
  EXPECT_EQ(r.completeness, Completeness::Partial);
  EXPECT_FALSE(r.ast.collect(NodeKind::OpaqueExpr).empty());
  EXPECT_FALSE(r.diagnostics.empty());
}

TEST(Parser, AnonymousClassBecomesOpaque) {
  auto r = parse(
      "class A { void f() { attach(new Runnable() { public void run() {} }); } }");
  EXPECT_EQ(r.completeness, Completeness::Partial);
  EXPECT_FALSE(r.ast.collect(NodeKind::OpaqueExpr).empty());
}

TEST(Parser, SwitchBecomesOpaqueStatement) {
  auto r = parse(
      "class A { void f(int n) { switch (n) { case 1: g(); break; } h(); } }");
  EXPECT_EQ(r.completeness, Completeness::Partial);
  // the statement after the switch still parses
  bool found_h = false;
  r.ast.walk([&](NodeId, const AstNode& n) {
    if (n.kind == NodeKind::MethodInvocation && n.name == "h") found_h = true;
  });
  EXPECT_TRUE(found_h);
}

TEST(Parser, UndeclaredHelperTypeMakesResultPartial) {
  auto r = parse("class A { void f() { Widget w = make(); } }");
  EXPECT_EQ(r.completeness, Completeness::Partial);
  NodeId decl = first_of(r.ast, NodeKind::LocalVarDecl);
  ASSERT_NE(decl, kInvalidNode);
  EXPECT_TRUE(r.ast.node(decl).resolved_partially);
}

TEST(Parser, ImportedTypeKeepsResultFull) {
  auto r = parse(
      "import com.widgets.Widget;\n"
      "class A { void f() { Widget w = make(); } }");
  EXPECT_EQ(r.completeness, Completeness::Full);
}

TEST(Parser, GenericTypeArgumentsAreErasedFromDeclaredType) {
  auto r = parse(
      "import java.util.List;\n"
      "class A { void f(List<String> xs) { } }");
  NodeId method = first_of(r.ast, NodeKind::MethodDecl);
  ASSERT_NE(method, kInvalidNode);
  std::string param_type;
  for (NodeId c : r.ast.node(method).children) {
    if (r.ast.node(c).kind == NodeKind::LocalVarDecl) {
      param_type = r.ast.node(c).declared_type;
    }
  }
  EXPECT_EQ(param_type, "List");
}

TEST(Parser, ComparisonChainsDoNotTriggerGenericsPath) {
  auto r = parse("class A { boolean f(int a, int b) { return a < b; } }");
  EXPECT_EQ(r.completeness, Completeness::Full);
  NodeId bin = first_of(r.ast, NodeKind::BinaryExpr);
  ASSERT_NE(bin, kInvalidNode);
  EXPECT_EQ(r.ast.node(bin).op, "<");
}

TEST(Parser, OpaqueRegionsKeepSourceCoverage) {
  std::string src =
      "class A { void f() { weird!!; int ok = 1; } }";
  auto r = parse(src);
  EXPECT_EQ(r.completeness, Completeness::Partial);
  NodeId decl = kInvalidNode;
  r.ast.walk([&](NodeId id, const AstNode& n) {
    if (n.kind == NodeKind::LocalVarDecl) decl = id;
  });
  ASSERT_NE(decl, kInvalidNode);
  EXPECT_EQ(r.ast.text_of(decl), "int ok = 1;");
}

TEST(Parser, NeverThrowsOnFuzzedTokenSoup) {
  std::mt19937 rng(991237);
  const std::vector<std::string> vocab = {
      "class", "A", "{", "}", "(", ")", ";", "int", "x", "=", "f", ".", ",",
      "if", "while", "for", "try", "catch", "return", "new", "[", "]", "+",
      "\"s\"", "1", "->", "::", "<", ">", "@", "import", "static"};
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::uniform_int_distribution<int> len_dist(0, 60);
  for (int iter = 0; iter < 400; ++iter) {
    std::string src;
    int len = len_dist(rng);
    for (int i = 0; i < len; ++i) {
      src += vocab[pick(rng)];
      src += ' ';
    }
    auto r = parse(src);
    ASSERT_NE(r.ast.root(), kInvalidNode) << src;
    r.ast.walk([&](NodeId, const AstNode& n) {
      ASSERT_LE(n.span.begin, n.span.end) << src;
      ASSERT_LE(n.span.end, src.size()) << src;
    });
  }
}

TEST(Parser, FieldDeclWithMultipleDeclarators) {
  auto r = parse("class A { int a = 1, b, c = 3; }");
  NodeId field = first_of(r.ast, NodeKind::FieldDecl);
  ASSERT_NE(field, kInvalidNode);
  const AstNode& n = r.ast.node(field);
  EXPECT_EQ(n.name, "a");
  EXPECT_EQ(n.extra_names, (std::vector<std::string>{"b", "c"}));
}

TEST(Parser, StaticCallWithoutReceiverObject) {
  auto r = parse(
      "import android.util.Log;\n"
      "class A { void f(String m) { Log.d(\"tag\", m); } }");
  NodeId call = first_of(r.ast, NodeKind::MethodInvocation);
  ASSERT_NE(call, kInvalidNode);
  const AstNode& n = r.ast.node(call);
  EXPECT_EQ(n.name, "d");
  EXPECT_TRUE(n.has_receiver);
  EXPECT_EQ(r.ast.node(invocation_receiver(r.ast, call)).name, "Log");
}

TEST(Parser, DottedNameHelperReadsChains) {
  auto r = parse("class A { void f() { obj.field.sub.call(); } }");
  NodeId call = first_of(r.ast, NodeKind::MethodInvocation);
  ASSERT_NE(call, kInvalidNode);
  NodeId recv = invocation_receiver(r.ast, call);
  EXPECT_EQ(dotted_name(r.ast, recv), "obj.field.sub");
}

}  // namespace
}  // namespace a4

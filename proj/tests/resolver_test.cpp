#include "a4/type_resolver.hpp"

#include <gtest/gtest.h>

#include "a4/parser.hpp"

namespace a4 {
namespace {

NodeId find_call(const Ast& ast, const std::string& name) {
  NodeId out = kInvalidNode;
  ast.walk([&](NodeId id, const AstNode& n) {
    if (n.kind == NodeKind::MethodInvocation && n.name == name) out = id;
  });
  return out;
}

TEST(TypeResolver, ParameterAndLocalLookup) {
  auto r = parse(
      "import android.content.res.Resources;\n"
      "class A { void f(Resources res) { int id = 3; use(res, id); } }");
  TypeResolver resolver(r.ast);
  NodeId call = find_call(r.ast, "use");
  ASSERT_NE(call, kInvalidNode);
  EXPECT_EQ(resolver.resolve("res", call).value_or(""),
            "android.content.res.Resources");
  EXPECT_EQ(resolver.resolve("id", call).value_or(""), "int");
  EXPECT_FALSE(resolver.resolve("nothing", call).has_value());
}

TEST(TypeResolver, LocalsShadowFields) {
  auto r = parse(
      "class A { String v; void f() { int v = 1; use(v); } }");
  TypeResolver resolver(r.ast);
  NodeId call = find_call(r.ast, "use");
  EXPECT_EQ(resolver.resolve("v", call).value_or(""), "int");
}

TEST(TypeResolver, FieldVisibleFromMethod) {
  auto r = parse("class A { long total; void f() { use(total); } }");
  TypeResolver resolver(r.ast);
  NodeId call = find_call(r.ast, "use");
  EXPECT_EQ(resolver.resolve("total", call).value_or(""), "long");
}

TEST(TypeResolver, DeclarationAfterUseSiteIsInvisible) {
  auto r = parse("class A { void f() { use(x); int x = 1; } }");
  TypeResolver resolver(r.ast);
  NodeId call = find_call(r.ast, "use");
  EXPECT_FALSE(resolver.resolve("x", call).has_value());
}

TEST(TypeResolver, EnhancedForVariableVisibleInBody) {
  auto r = parse(
      "import com.example.Item;\n"
      "class A { void f(Item[] items) { for (Item it : items) { use(it); } } }");
  TypeResolver resolver(r.ast);
  NodeId call = find_call(r.ast, "use");
  EXPECT_EQ(resolver.resolve("it", call).value_or(""), "com.example.Item");
}

TEST(TypeResolver, CatchParameterVisibleInCatchBlockOnly) {
  auto r = parse(
      "class A { void f() {\n"
      "  try { g(); } catch (Exception e) { use(e); }\n"
      "  after(1);\n"
      "} }");
  TypeResolver resolver(r.ast);
  NodeId inside = find_call(r.ast, "use");
  EXPECT_EQ(resolver.resolve("e", inside).value_or(""), "java.lang.Exception");
  NodeId outside = find_call(r.ast, "after");
  EXPECT_FALSE(resolver.resolve("e", outside).has_value());
}

TEST(TypeResolver, QualifiesThroughWildcardImportWhenUnique) {
  auto r = parse(
      "import android.graphics.*;\n"
      "class A { void f(Bitmap b) { use(b); } }");
  TypeResolver resolver(r.ast);
  NodeId call = find_call(r.ast, "use");
  EXPECT_EQ(resolver.resolve("b", call).value_or(""), "android.graphics.Bitmap");
}

TEST(TypeResolver, CastAssignmentActsAsWeakEvidence) {
  auto r = parse(
      "import android.view.View;\n"
      "class A { Object raw; void f() { v = (View) raw; use(v); } Object v; }");
  TypeResolver resolver(r.ast);
  NodeId call = find_call(r.ast, "use");
  // the field declaration says Object; the resolver prefers declarations
  EXPECT_EQ(resolver.resolve("v", call).value_or(""), "java.lang.Object");
}

TEST(TypeResolver, CastEvidenceUsedWhenNoDeclarationExists) {
  auto r = parse(
      "import android.view.View;\n"
      "class A { void f() { v = (View) fetch(); use(v); } }");
  TypeResolver resolver(r.ast);
  NodeId call = find_call(r.ast, "use");
  EXPECT_EQ(resolver.resolve("v", call).value_or(""), "android.view.View");
}

TEST(TypeResolver, HasImportOfExactAndWildcard) {
  auto r = parse(
      "import android.content.res.Resources;\n"
      "import android.graphics.*;\n"
      "class A { }");
  TypeResolver resolver(r.ast);
  EXPECT_TRUE(resolver.has_import_of("android.content.res.Resources"));
  EXPECT_TRUE(resolver.has_import_of("android.graphics.Bitmap"));
  EXPECT_FALSE(resolver.has_import_of("android.widget.TextView"));
}

TEST(TypeResolver, VisibleDeclsNearestFirst) {
  auto r = parse(
      "class A { int far; void f(int mid) { int near = 1; use(near); } }");
  TypeResolver resolver(r.ast);
  NodeId call = find_call(r.ast, "use");
  auto decls = resolver.visible_decls(call);
  ASSERT_GE(decls.size(), 3u);
  EXPECT_EQ(decls[0].name, "near");
  EXPECT_EQ(decls[1].name, "mid");
  EXPECT_EQ(decls[2].name, "far");
}

TEST(TypeResolver, PrimitiveAndJavaLangPassThrough) {
  auto r = parse("class A { }");
  TypeResolver resolver(r.ast);
  EXPECT_EQ(resolver.qualify("int"), "int");
  EXPECT_EQ(resolver.qualify("String"), "java.lang.String");
  EXPECT_EQ(resolver.qualify("com.already.Qualified"), "com.already.Qualified");
  EXPECT_EQ(resolver.qualify("String[]"), "java.lang.String[]");
}

}  // namespace
}  // namespace a4

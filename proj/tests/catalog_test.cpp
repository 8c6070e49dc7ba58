#include "a4/catalog.hpp"

#include <gtest/gtest.h>

#include "a4/parser.hpp"

namespace a4 {
namespace {

const char* kGetColorCatalog = R"([
  {
    "owner": "android.content.res.Resources",
    "method": "getColor",
    "paramTypes": ["int"],
    "returnType": "int",
    "introducedIn": 1,
    "deprecatedIn": 23,
    "replacement": {
      "owner": "android.content.res.Resources",
      "method": "getColor",
      "paramTypes": ["int", "android.content.res.Resources.Theme"]
    }
  }
])";

NodeId find_call(const Ast& ast, const std::string& name) {
  NodeId out = kInvalidNode;
  ast.walk([&](NodeId id, const AstNode& n) {
    if (n.kind == NodeKind::MethodInvocation && n.name == name) out = id;
  });
  return out;
}

TEST(CatalogLoad, SingleRowWithReplacement) {
  ApiCatalog c = parse_catalog_json(kGetColorCatalog);
  ASSERT_EQ(c.entries.size(), 1u);
  const ApiDeclaration& e = c.entries[0];
  EXPECT_EQ(e.owner, "android.content.res.Resources");
  EXPECT_EQ(e.method, "getColor");
  EXPECT_EQ(e.param_types, std::vector<std::string>{"int"});
  EXPECT_EQ(e.return_type, "int");
  EXPECT_EQ(e.introduced_in, 1);
  ASSERT_TRUE(e.deprecated_in.has_value());
  EXPECT_EQ(*e.deprecated_in, 23);
  ASSERT_TRUE(e.replacement.has_value());
  EXPECT_EQ(e.replacement->method, "getColor");
  ASSERT_EQ(e.replacement->param_types.size(), 2u);
  EXPECT_EQ(c.version_range, (std::pair<int, int>{1, 23}));
  EXPECT_EQ(e.key(), "android.content.res.Resources.getColor(int)");
}

TEST(CatalogLoad, EmptyArrayGivesEmptyCatalog) {
  ApiCatalog c = parse_catalog_json("[]");
  EXPECT_TRUE(c.entries.empty());
}

TEST(CatalogLoad, DeprecatedBeforeIntroducedRejected) {
  std::string row = R"([{ "owner": "a.B", "method": "m", "paramTypes": [],
    "returnType": "void", "introducedIn": 10, "deprecatedIn": 5,
    "replacement": null }])";
  EXPECT_THROW(parse_catalog_json(row), MalformedCatalogError);
}

TEST(CatalogLoad, UnknownKeyRejectedWithLine) {
  std::string text = "[\n  { \"owner\": \"a.B\", \"method\": \"m\",\n"
                     "    \"paramTypes\": [], \"returnType\": \"void\",\n"
                     "    \"introducedIn\": 1, \"deprecatedIn\": null,\n"
                     "    \"replacement\": null, \"bogus\": 1 }\n]";
  try {
    parse_catalog_json(text);
    FAIL() << "expected MalformedCatalogError";
  } catch (const MalformedCatalogError& e) {
    EXPECT_EQ(e.line, 2);
    EXPECT_NE(e.reason.find("bogus"), std::string::npos);
  }
}

TEST(CatalogLoad, MissingKeyRejected) {
  std::string row = R"([{ "owner": "a.B", "method": "m", "paramTypes": [],
    "returnType": "void", "introducedIn": 1, "deprecatedIn": null }])";
  EXPECT_THROW(parse_catalog_json(row), MalformedCatalogError);
}

TEST(CatalogLoad, DuplicateKeyRejected) {
  std::string row = R"([
    { "owner": "a.B", "method": "m", "paramTypes": ["int"],
      "returnType": "void", "introducedIn": 1, "deprecatedIn": null,
      "replacement": null },
    { "owner": "a.B", "method": "m", "paramTypes": ["int"],
      "returnType": "int", "introducedIn": 2, "deprecatedIn": null,
      "replacement": null }
  ])";
  EXPECT_THROW(parse_catalog_json(row), DuplicateEntryError);
}

TEST(CatalogLoad, OverloadsAreDistinctEntries) {
  std::string row = R"([
    { "owner": "a.B", "method": "m", "paramTypes": ["int"],
      "returnType": "void", "introducedIn": 1, "deprecatedIn": null,
      "replacement": null },
    { "owner": "a.B", "method": "m", "paramTypes": ["int", "long"],
      "returnType": "void", "introducedIn": 1, "deprecatedIn": null,
      "replacement": null }
  ])";
  EXPECT_EQ(parse_catalog_json(row).entries.size(), 2u);
}

TEST(CatalogLoad, NonJsonInputReportsLine) {
  try {
    parse_catalog_json("[\n{ nope ]\n");
    FAIL() << "expected MalformedCatalogError";
  } catch (const MalformedCatalogError& e) {
    EXPECT_GE(e.line, 1);
  }
}

struct Matched {
  ParseResult parsed;
  ApiCatalog catalog;
  MatchResult result;
};

Matched run_match(const std::string& source, const std::string& catalog_json,
                  const std::string& call_name) {
  Matched m{parse(source), parse_catalog_json(catalog_json), {}};
  TypeResolver resolver(m.parsed.ast);
  NodeId call = find_call(m.parsed.ast, call_name);
  EXPECT_NE(call, kInvalidNode);
  m.result = match_invocation(m.catalog, m.parsed.ast, call, resolver);
  return m;
}

TEST(CatalogMatch, ResolvableIntArgumentIsPerfect) {
  auto m = run_match(
      "import android.content.res.Resources;\n"
      "class A { int f(Resources res, int colorId) {\n"
      "  return res.getColor(colorId);\n"
      "} }",
      kGetColorCatalog, "getColor");
  EXPECT_EQ(m.result.strength, MatchStrength::Perfect);
  ASSERT_NE(m.result.matched, nullptr);
  EXPECT_EQ(m.result.matched->method, "getColor");
}

TEST(CatalogMatch, UnresolvableArgumentWithImportIsPartial) {
  auto m = run_match(
      "import android.content.res.Resources;\n"
      "class A { int f(Resources res) {\n"
      "  return res.getColor(R.color.header);\n"
      "} }",
      kGetColorCatalog, "getColor");
  EXPECT_EQ(m.result.strength, MatchStrength::Partial);
  ASSERT_NE(m.result.matched, nullptr);
}

TEST(CatalogMatch, UnresolvableArgumentWithReceiverTypeIsPartial) {
  auto m = run_match(
      "import android.content.res.Resources;\n"
      "class A { int f(Resources res) { return res.getColor(unknownId); } }",
      kGetColorCatalog, "getColor");
  EXPECT_EQ(m.result.strength, MatchStrength::Partial);
}

TEST(CatalogMatch, NoOwnerEvidenceAndUnresolvedArgIsNone) {
  auto m = run_match(
      "class A { int f(Object res) { return res.getColor(unknownId); } }",
      kGetColorCatalog, "getColor");
  EXPECT_EQ(m.result.strength, MatchStrength::None);
  EXPECT_EQ(m.result.matched, nullptr);
}

TEST(CatalogMatch, ArityMismatchIsNone) {
  auto m = run_match(
      "import android.content.res.Resources;\n"
      "class A { int f(Resources res, int a, int b, int c) {\n"
      "  return res.getColor(a, b, c);\n"
      "} }",
      kGetColorCatalog, "getColor");
  EXPECT_EQ(m.result.strength, MatchStrength::None);
}

TEST(CatalogMatch, ResolvedMismatchedTypeIsNone) {
  auto m = run_match(
      "import android.content.res.Resources;\n"
      "class A { int f(Resources res, String name) {\n"
      "  return res.getColor(name);\n"
      "} }",
      kGetColorCatalog, "getColor");
  EXPECT_EQ(m.result.strength, MatchStrength::None);
}

TEST(CatalogMatch, NullLiteralFitsObjectParameter) {
  std::string catalog = R"([
    { "owner": "android.content.res.Resources", "method": "getColor",
      "paramTypes": ["int", "android.content.res.Resources.Theme"],
      "returnType": "int", "introducedIn": 23, "deprecatedIn": null,
      "replacement": null }
  ])";
  auto m = run_match(
      "import android.content.res.Resources;\n"
      "class A { int f(Resources res, int id) {\n"
      "  return res.getColor(id, null);\n"
      "} }",
      catalog, "getColor");
  EXPECT_EQ(m.result.strength, MatchStrength::Perfect);
}

TEST(CatalogMatch, NullLiteralDoesNotFitPrimitive) {
  std::string catalog = R"([
    { "owner": "a.B", "method": "put", "paramTypes": ["int"],
      "returnType": "void", "introducedIn": 1, "deprecatedIn": null,
      "replacement": null }
  ])";
  auto m = run_match(
      "import a.B;\nclass A { void f(B b) { b.put(null); } }", catalog, "put");
  EXPECT_EQ(m.result.strength, MatchStrength::None);
}

TEST(CatalogMatch, TwoPerfectCandidatesAreAmbiguous) {
  std::string catalog = R"([
    { "owner": "a.B", "method": "m", "paramTypes": ["int"],
      "returnType": "void", "introducedIn": 1, "deprecatedIn": null,
      "replacement": null },
    { "owner": "c.D", "method": "m", "paramTypes": ["int"],
      "returnType": "void", "introducedIn": 1, "deprecatedIn": null,
      "replacement": null }
  ])";
  auto m = run_match("class A { void f(int x) { m(x); } }", catalog, "m");
  EXPECT_EQ(m.result.strength, MatchStrength::None);
  EXPECT_TRUE(m.result.is_ambiguous());
  EXPECT_EQ(m.result.ambiguous.size(), 2u);
}

TEST(CatalogMatch, PerfectBeatsPartialOnDifferentEntries) {
  std::string catalog = R"([
    { "owner": "a.B", "method": "m", "paramTypes": ["int"],
      "returnType": "void", "introducedIn": 1, "deprecatedIn": null,
      "replacement": null },
    { "owner": "a.B", "method": "m", "paramTypes": ["a.Blob"],
      "returnType": "void", "introducedIn": 1, "deprecatedIn": null,
      "replacement": null }
  ])";
  auto m = run_match(
      "import a.B;\nclass A { void f(B b, int x) { b.m(x); } }", catalog, "m");
  EXPECT_EQ(m.result.strength, MatchStrength::Perfect);
  ASSERT_NE(m.result.matched, nullptr);
  EXPECT_EQ(m.result.matched->param_types, std::vector<std::string>{"int"});
}

TEST(CatalogMatch, NoiseTypesNeverUpgradePartialToPerfect) {
  // the argument stays unresolvable no matter how many unrelated
  // declarations surround the call site
  std::string base =
      "import android.content.res.Resources;\n"
      "class A { int f(Resources res) {\n";
  std::string noisy = base;
  for (int i = 0; i < 8; ++i) {
    noisy += "  Mystery" + std::to_string(i) + " n" + std::to_string(i) + ";\n";
  }
  std::string tail = "  return res.getColor(unknownId);\n} }";
  auto plain = run_match(base + tail, kGetColorCatalog, "getColor");
  auto with_noise = run_match(noisy + tail, kGetColorCatalog, "getColor");
  EXPECT_EQ(plain.result.strength, MatchStrength::Partial);
  EXPECT_EQ(with_noise.result.strength, MatchStrength::Partial);
}

TEST(CatalogMatch, DeterministicAcrossRepeatedRuns) {
  std::string source =
      "import android.content.res.Resources;\n"
      "class A { int f(Resources res, int id) { return res.getColor(id); } }";
  for (int i = 0; i < 5; ++i) {
    auto m = run_match(source, kGetColorCatalog, "getColor");
    ASSERT_EQ(m.result.strength, MatchStrength::Perfect);
    ASSERT_EQ(m.result.matched->key(),
              "android.content.res.Resources.getColor(int)");
  }
}

TEST(CatalogMatch, EveryPerfectMatchSatisfiesNameAndArity) {
  ApiCatalog c = parse_catalog_json(kGetColorCatalog);
  auto parsed = parse(
      "import android.content.res.Resources;\n"
      "class A { int f(Resources res, int id) { return res.getColor(id); } }");
  TypeResolver resolver(parsed.ast);
  NodeId call = find_call(parsed.ast, "getColor");
  MatchResult m = match_invocation(c, parsed.ast, call, resolver);
  ASSERT_EQ(m.strength, MatchStrength::Perfect);
  // the partial predicate's structural pieces hold for the perfect winner
  EXPECT_TRUE(name_and_arity_match(*m.matched, parsed.ast, call));
}

TEST(CatalogMatch, StaticImportCountsAsOwnerEvidence) {
  std::string catalog = R"([
    { "owner": "android.util.Log", "method": "d", "paramTypes":
      ["java.lang.String", "java.lang.String"],
      "returnType": "int", "introducedIn": 1, "deprecatedIn": null,
      "replacement": null }
  ])";
  auto m = run_match(
      "import static android.util.Log.d;\n"
      "class A { void f(String tag) { d(tag, mystery); } }",
      catalog, "d");
  EXPECT_EQ(m.result.strength, MatchStrength::Partial);
}

TEST(ExprTyper, NestedCallTypedThroughCatalogReturnType) {
  std::string catalog = R"([
    { "owner": "a.Shaper", "method": "value", "paramTypes": [],
      "returnType": "float", "introducedIn": 1, "deprecatedIn": null,
      "replacement": null },
    { "owner": "a.Mixer", "method": "setLevel", "paramTypes": ["float"],
      "returnType": "void", "introducedIn": 1, "deprecatedIn": null,
      "replacement": null }
  ])";
  auto m = run_match(
      "import a.Shaper;\nimport a.Mixer;\n"
      "class A { void f(Mixer mix, Shaper s) { mix.setLevel(s.value()); } }",
      catalog, "setLevel");
  EXPECT_EQ(m.result.strength, MatchStrength::Perfect);
  ASSERT_NE(m.result.matched, nullptr);
  EXPECT_EQ(m.result.matched->method, "setLevel");
}

TEST(ExprTyper, LiteralAndOperatorTyping) {
  auto parsed = parse(
      "class A { void f(int a, double d) { use(a + 1, a + d, a < d, \"s\" + a, 'c', 1.5f, 2L); } }");
  TypeResolver resolver(parsed.ast);
  NodeId call = find_call(parsed.ast, "use");
  ASSERT_NE(call, kInvalidNode);
  auto type_at = [&](std::size_t i) {
    return type_of_expr(parsed.ast, invocation_arg(parsed.ast, call, i),
                        resolver, nullptr)
        .value_or("?");
  };
  EXPECT_EQ(type_at(0), "int");
  EXPECT_EQ(type_at(1), "double");
  EXPECT_EQ(type_at(2), "boolean");
  EXPECT_EQ(type_at(3), "java.lang.String");
  EXPECT_EQ(type_at(4), "char");
  EXPECT_EQ(type_at(5), "float");
  EXPECT_EQ(type_at(6), "long");
}

TEST(ExprTyper, CastAndCreationAndArrayAccess) {
  auto parsed = parse(
      "import android.view.View;\n"
      "class A { void f(Object o, View[] vs) {\n"
      "  use((View) o, new View(), vs[0]);\n"
      "} }");
  TypeResolver resolver(parsed.ast);
  NodeId call = find_call(parsed.ast, "use");
  ASSERT_NE(call, kInvalidNode);
  auto type_at = [&](std::size_t i) {
    return type_of_expr(parsed.ast, invocation_arg(parsed.ast, call, i),
                        resolver, nullptr)
        .value_or("?");
  };
  EXPECT_EQ(type_at(0), "android.view.View");
  EXPECT_EQ(type_at(1), "android.view.View");
  EXPECT_EQ(type_at(2), "android.view.View");
}

}  // namespace
}  // namespace a4

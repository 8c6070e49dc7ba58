#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "a4/ast.hpp"
#include "a4/type_resolver.hpp"

namespace a4 {

struct ApiRef {
  std::string owner;
  std::string method;
  std::vector<std::string> param_types;
};

struct ApiDeclaration {
  std::string owner;
  std::string method;
  std::vector<std::string> param_types;
  std::string return_type;
  int introduced_in = 0;
  std::optional<int> deprecated_in;
  std::optional<ApiRef> replacement;

  // "owner.method(p1,p2)" — the stable identity used in stores and reports.
  std::string key() const;
};

struct ApiCatalog {
  std::vector<ApiDeclaration> entries;
  std::pair<int, int> version_range{0, 0};

  const ApiDeclaration* find_by_key(const std::string& key) const;
};

class MalformedCatalogError : public std::runtime_error {
 public:
  MalformedCatalogError(int line, const std::string& reason);
  int line;
  std::string reason;
};

class DuplicateEntryError : public std::runtime_error {
 public:
  explicit DuplicateEntryError(const std::string& key);
  std::string key;
};

ApiCatalog parse_catalog_json(const std::string& text);
ApiCatalog load_catalog(const std::string& path);

enum class MatchStrength { None, Partial, Perfect };

// `ambiguous` is populated when several entries tie at the winning strength;
// such a site gets guidance but never an automatic rewrite. strength is
// None exactly when `matched` is null.
struct MatchResult {
  MatchStrength strength = MatchStrength::None;
  const ApiDeclaration* matched = nullptr;
  std::vector<const ApiDeclaration*> ambiguous;

  bool is_ambiguous() const { return !ambiguous.empty(); }
};

MatchResult match_invocation(const ApiCatalog& catalog, const Ast& ast,
                             NodeId call, const TypeResolver& resolver);

// Lexical expression typing: literals, declared names, casts, creations,
// catalog return types for nested calls. nullptr catalog disables the last
// tier. Returns "null" for the null literal.
std::optional<std::string> type_of_expr(const Ast& ast, NodeId expr,
                                        const TypeResolver& resolver,
                                        const ApiCatalog* catalog);

// Predicate pieces, exposed so the containment between the two match levels
// can be checked directly.
bool name_and_arity_match(const ApiDeclaration& entry, const Ast& ast, NodeId call);
bool owner_evidence_present(const ApiDeclaration& entry, const Ast& ast,
                            NodeId call, const TypeResolver& resolver);

// True when a value of type `arg` can fill a parameter declared as `param`.
// The "null" pseudo-type fits any non-primitive parameter.
bool argument_type_fits(const std::string& arg, const std::string& param);

// Hooks nested-invocation typing into `resolver` so later resolve calls can
// see through catalog APIs.
void install_invocation_typer(TypeResolver& resolver, const ApiCatalog& catalog);

}  // namespace a4

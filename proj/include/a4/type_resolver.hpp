#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "a4/ast.hpp"

namespace a4 {

// A declaration visible at some use site: parameter, local, field, loop
// variable, or catch parameter. `type` is the declared source text;
// `qualified_type` is the import-expanded form when one is known.
struct VisibleDecl {
  std::string name;
  std::string type;
  std::string qualified_type;
  NodeId decl = kInvalidNode;
};

class TypeResolver {
 public:
  explicit TypeResolver(const Ast& ast);

  // Declarations visible at `site`, nearest scope first. Locals shadow
  // fields; within a block only declarations textually before the site
  // count.
  std::vector<VisibleDecl> visible_decls(NodeId site) const;

  // Declared type of `name` at `site`, qualified when imports allow.
  std::optional<std::string> resolve(const std::string& name, NodeId site) const;

  // Expands a source type name through single-type imports, wildcard
  // imports, java.lang, and primitives. Dotted names pass through.
  std::string qualify(const std::string& type_text) const;

  bool has_import_of(const std::string& qualified_name) const;

  // True when a static import pulls members from `owner` (exact member or
  // wildcard form).
  bool has_static_import_from(const std::string& owner) const;

  // Installed by the API catalog so nested invocation results can be typed
  // without a layering cycle.
  using InvocationTyper =
      std::function<std::optional<std::string>(const Ast&, NodeId, const TypeResolver&)>;
  void set_invocation_typer(InvocationTyper typer) { invocation_typer_ = std::move(typer); }
  const InvocationTyper& invocation_typer() const { return invocation_typer_; }

  const Ast& ast() const { return ast_; }

 private:
  const Ast& ast_;
  std::vector<NodeId> imports_;
  std::vector<std::string> wildcard_packages_;
  std::vector<std::string> static_import_paths_;
  std::vector<std::string> local_classes_;
  InvocationTyper invocation_typer_;

  std::optional<std::string> cast_evidence(const std::string& name, NodeId site) const;
};

bool is_primitive_type(const std::string& t);
bool is_java_lang_type(const std::string& simple);

// Flags declared types that no import, primitive table, java.lang entry, or
// file-local class accounts for. Runs as the last parse step; each hit adds
// a diagnostic and marks the node.
void annotate_unresolved_types(Ast& ast, std::vector<Diagnostic>& diagnostics);

}  // namespace a4

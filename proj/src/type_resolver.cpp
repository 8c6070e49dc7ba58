#include "a4/type_resolver.hpp"

#include <algorithm>
#include <unordered_set>

namespace a4 {

namespace {

std::string strip_array(const std::string& t) {
  std::string s = t;
  while (s.size() >= 2 && s.substr(s.size() - 2) == "[]") {
    s.resize(s.size() - 2);
  }
  return s;
}

std::string simple_name(const std::string& t) {
  auto dot = t.rfind('.');
  return dot == std::string::npos ? t : t.substr(dot + 1);
}

}  // namespace

bool is_primitive_type(const std::string& t) {
  static const std::unordered_set<std::string> prims = {
      "int", "long", "short", "byte", "char", "boolean", "float", "double",
      "void", "var"};
  return prims.count(strip_array(t)) > 0;
}

bool is_java_lang_type(const std::string& simple) {
  static const std::unordered_set<std::string> names = {
      "Object", "String", "Integer", "Long", "Short", "Byte", "Character",
      "Boolean", "Float", "Double", "Number", "Math", "System", "Thread",
      "Runnable", "Exception", "RuntimeException", "Error", "Throwable",
      "IllegalArgumentException", "IllegalStateException",
      "NullPointerException", "IndexOutOfBoundsException",
      "ArrayIndexOutOfBoundsException", "UnsupportedOperationException",
      "ClassCastException", "NumberFormatException", "ArithmeticException",
      "StringBuilder", "StringBuffer", "CharSequence", "Comparable",
      "Iterable", "Class", "Void", "Enum", "Override", "Deprecated",
      "SuppressWarnings", "FunctionalInterface", "SafeVarargs",
      "InterruptedException", "CloneNotSupportedException", "Cloneable",
      "AutoCloseable", "ClassLoader", "Process", "ProcessBuilder", "Runtime"};
  return names.count(simple) > 0;
}

TypeResolver::TypeResolver(const Ast& ast) : ast_(ast) {
  if (ast_.root() == kInvalidNode) return;
  for (NodeId child : ast_.node(ast_.root()).children) {
    const AstNode& n = ast_.node(child);
    if (n.kind != NodeKind::ImportDecl) continue;
    if (n.is_static) {
      static_import_paths_.push_back(n.name);
    } else if (!n.name.empty() && n.name.back() == '*') {
      std::string pkg = n.name.substr(0, n.name.size() - 1);
      if (!pkg.empty() && pkg.back() == '.') pkg.pop_back();
      wildcard_packages_.push_back(pkg);
    } else {
      imports_.push_back(child);
    }
  }
  ast_.walk([&](NodeId id, const AstNode& n) {
    if (n.kind == NodeKind::ClassDecl) local_classes_.push_back(n.name);
    (void)id;
  });
}

std::string TypeResolver::qualify(const std::string& type_text) const {
  std::string base = strip_array(type_text);
  std::string suffix = type_text.substr(base.size());
  if (base.empty() || is_primitive_type(base)) return type_text;
  if (base.find('.') != std::string::npos) return type_text;
  for (NodeId imp : imports_) {
    const AstNode& n = ast_.node(imp);
    if (simple_name(n.name) == base) return n.name + suffix;
  }
  for (const std::string& cls : local_classes_) {
    if (cls == base) return type_text;
  }
  if (is_java_lang_type(base)) return "java.lang." + base + suffix;
  if (wildcard_packages_.size() == 1) {
    return wildcard_packages_.front() + "." + base + suffix;
  }
  return type_text;
}

bool TypeResolver::has_import_of(const std::string& qualified_name) const {
  for (NodeId imp : imports_) {
    if (ast_.node(imp).name == qualified_name) return true;
  }
  auto dot = qualified_name.rfind('.');
  if (dot != std::string::npos) {
    std::string pkg = qualified_name.substr(0, dot);
    for (const std::string& wp : wildcard_packages_) {
      if (wp == pkg) return true;
    }
  }
  return false;
}

bool TypeResolver::has_static_import_from(const std::string& owner) const {
  std::string prefix = owner + ".";
  for (const std::string& path : static_import_paths_) {
    if (path.rfind(prefix, 0) == 0) return true;
  }
  return false;
}

std::vector<VisibleDecl> TypeResolver::visible_decls(NodeId site) const {
  std::vector<VisibleDecl> out;
  std::unordered_set<std::string> seen;
  auto add = [&](const std::string& name, const std::string& type, NodeId decl) {
    if (name.empty() || seen.count(name)) return;
    seen.insert(name);
    out.push_back({name, type, qualify(type), decl});
  };

  std::size_t site_begin = ast_.node(site).span.begin;
  NodeId cur = site;
  while (cur != kInvalidNode) {
    const AstNode& n = ast_.node(cur);
    switch (n.kind) {
      case NodeKind::Block:
        for (NodeId child : n.children) {
          const AstNode& c = ast_.node(child);
          if (c.kind != NodeKind::LocalVarDecl) continue;
          // catch parameters carry a zero begin guard only via span order
          if (c.span.begin <= site_begin) {
            add(c.name, c.declared_type, child);
            for (const std::string& extra : c.extra_names) {
              add(extra, c.declared_type, child);
            }
          }
        }
        break;
      case NodeKind::ForStmt:
        if (n.is_enhanced_for) {
          add(n.name, n.declared_type, cur);
        } else {
          for (NodeId child : n.children) {
            const AstNode& c = ast_.node(child);
            if (c.kind == NodeKind::LocalVarDecl) {
              add(c.name, c.declared_type, child);
              for (const std::string& extra : c.extra_names) {
                add(extra, c.declared_type, child);
              }
            }
          }
        }
        break;
      case NodeKind::MethodDecl:
        for (NodeId child : n.children) {
          const AstNode& c = ast_.node(child);
          if (c.kind == NodeKind::LocalVarDecl) {
            add(c.name, c.declared_type, child);
          }
        }
        break;
      case NodeKind::ClassDecl:
        for (NodeId child : n.children) {
          const AstNode& c = ast_.node(child);
          if (c.kind == NodeKind::FieldDecl) {
            add(c.name, c.declared_type, child);
            for (const std::string& extra : c.extra_names) {
              add(extra, c.declared_type, child);
            }
          }
        }
        break;
      default:
        break;
    }
    cur = n.parent;
  }
  return out;
}

std::optional<std::string> TypeResolver::cast_evidence(const std::string& name,
                                                       NodeId site) const {
  // `x = (T) ...` textually before the site is the weakest evidence tier:
  // only consulted when no declaration names `x`.
  std::size_t site_begin = ast_.node(site).span.begin;
  std::optional<std::string> found;
  std::size_t best = 0;
  ast_.walk([&](NodeId id, const AstNode& n) {
    (void)id;
    if (n.kind != NodeKind::BinaryExpr || n.op != "=") return;
    if (n.span.begin >= site_begin) return;
    if (n.children.size() != 2) return;
    const AstNode& lhs = ast_.node(n.children[0]);
    const AstNode& rhs = ast_.node(n.children[1]);
    if (lhs.kind != NodeKind::Name || lhs.name != name) return;
    if (rhs.kind != NodeKind::Cast) return;
    if (!found || n.span.begin >= best) {
      best = n.span.begin;
      found = rhs.declared_type;
    }
  });
  return found;
}

std::optional<std::string> TypeResolver::resolve(const std::string& name,
                                                 NodeId site) const {
  for (const VisibleDecl& d : visible_decls(site)) {
    if (d.name == name) return d.qualified_type.empty() ? d.type : d.qualified_type;
  }
  if (auto cast = cast_evidence(name, site)) return qualify(*cast);
  return std::nullopt;
}

void annotate_unresolved_types(Ast& ast, std::vector<Diagnostic>& diagnostics) {
  if (ast.root() == kInvalidNode) return;
  TypeResolver resolver(ast);

  std::vector<std::string> local_classes;
  ast.walk([&](NodeId id, const AstNode& n) {
    (void)id;
    if (n.kind == NodeKind::ClassDecl) local_classes.push_back(n.name);
  });

  auto resolvable = [&](const std::string& type_text) {
    std::string base = strip_array(type_text);
    if (base.empty()) return true;
    if (is_primitive_type(base)) return true;
    if (base.find('.') != std::string::npos) return true;
    if (is_java_lang_type(base)) return true;
    for (const std::string& cls : local_classes) {
      if (cls == base) return true;
    }
    std::string q = resolver.qualify(base);
    return q != base;
  };

  std::vector<NodeId> flagged;
  ast.walk([&](NodeId id, const AstNode& n) {
    bool has_type = n.kind == NodeKind::LocalVarDecl ||
                    n.kind == NodeKind::FieldDecl || n.kind == NodeKind::Cast ||
                    n.kind == NodeKind::ObjectCreation ||
                    (n.kind == NodeKind::ForStmt && n.is_enhanced_for);
    if (!has_type || n.declared_type.empty()) return;
    if (n.kind == NodeKind::ObjectCreation && n.name == "{}") return;
    if (!resolvable(n.declared_type)) flagged.push_back(id);
  });
  for (NodeId id : flagged) {
    AstNode& n = ast.node(id);
    n.resolved_partially = true;
    diagnostics.push_back(
        Diagnostic{n.span, "unresolvable type " + n.declared_type});
  }
}

}  // namespace a4

#include "a4/catalog.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "a4/token.hpp"

namespace a4 {

namespace {

using nlohmann::json;

int line_of_offset(const std::string& text, std::size_t offset) {
  int line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

// Line number of each top-level array element, for error reporting.
std::vector<int> entry_lines(const std::string& text) {
  std::vector<int> lines;
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '[' || c == '{') {
      if (depth == 1 && c == '{') lines.push_back(line_of_offset(text, i));
      ++depth;
    } else if (c == ']' || c == '}') {
      --depth;
    }
  }
  return lines;
}

std::string require_string(const json& obj, const char* field, int line) {
  if (!obj.contains(field) || !obj[field].is_string()) {
    throw MalformedCatalogError(line, std::string(field) + " must be a string");
  }
  return obj[field].get<std::string>();
}

std::vector<std::string> require_string_array(const json& obj, const char* field,
                                              int line) {
  if (!obj.contains(field) || !obj[field].is_array()) {
    throw MalformedCatalogError(line,
                                std::string(field) + " must be an array");
  }
  std::vector<std::string> out;
  for (const json& item : obj[field]) {
    if (!item.is_string()) {
      throw MalformedCatalogError(
          line, std::string(field) + " must contain only strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

std::string ApiDeclaration::key() const {
  std::string k = owner + "." + method + "(";
  for (std::size_t i = 0; i < param_types.size(); ++i) {
    if (i) k += ",";
    k += param_types[i];
  }
  return k + ")";
}

const ApiDeclaration* ApiCatalog::find_by_key(const std::string& key) const {
  for (const ApiDeclaration& e : entries) {
    if (e.key() == key) return &e;
  }
  return nullptr;
}

MalformedCatalogError::MalformedCatalogError(int line_, const std::string& reason_)
    : std::runtime_error("malformed catalog at line " + std::to_string(line_) +
                         ": " + reason_),
      line(line_),
      reason(reason_) {}

DuplicateEntryError::DuplicateEntryError(const std::string& key_)
    : std::runtime_error("duplicate catalog entry " + key_), key(key_) {}

ApiCatalog parse_catalog_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MalformedCatalogError(line_of_offset(text, e.byte), e.what());
  }
  if (!doc.is_array()) {
    throw MalformedCatalogError(1, "catalog root must be an array");
  }
  std::vector<int> lines = entry_lines(text);

  static const std::vector<std::string> allowed = {
      "owner", "method", "paramTypes", "returnType",
      "introducedIn", "deprecatedIn", "replacement"};

  ApiCatalog catalog;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    int line = i < lines.size() ? lines[i] : 1;
    const json& row = doc[i];
    if (!row.is_object()) {
      throw MalformedCatalogError(line, "catalog entry must be an object");
    }
    for (auto it = row.begin(); it != row.end(); ++it) {
      bool known = false;
      for (const std::string& k : allowed) {
        if (it.key() == k) known = true;
      }
      if (!known) {
        throw MalformedCatalogError(line, "unknown key " + it.key());
      }
    }
    for (const std::string& k : allowed) {
      if (!row.contains(k)) {
        throw MalformedCatalogError(line, "missing key " + k);
      }
    }

    ApiDeclaration entry;
    entry.owner = require_string(row, "owner", line);
    entry.method = require_string(row, "method", line);
    entry.param_types = require_string_array(row, "paramTypes", line);
    entry.return_type = require_string(row, "returnType", line);
    if (!row["introducedIn"].is_number_integer()) {
      throw MalformedCatalogError(line, "introducedIn must be an integer");
    }
    entry.introduced_in = row["introducedIn"].get<int>();
    if (row["deprecatedIn"].is_number_integer()) {
      entry.deprecated_in = row["deprecatedIn"].get<int>();
    } else if (!row["deprecatedIn"].is_null()) {
      throw MalformedCatalogError(line, "deprecatedIn must be an integer or null");
    }
    const json& repl = row["replacement"];
    if (repl.is_object()) {
      for (auto it = repl.begin(); it != repl.end(); ++it) {
        if (it.key() != "owner" && it.key() != "method" &&
            it.key() != "paramTypes") {
          throw MalformedCatalogError(line,
                                      "unknown replacement key " + it.key());
        }
      }
      ApiRef ref;
      ref.owner = require_string(repl, "owner", line);
      ref.method = require_string(repl, "method", line);
      ref.param_types = require_string_array(repl, "paramTypes", line);
      entry.replacement = std::move(ref);
    } else if (!repl.is_null()) {
      throw MalformedCatalogError(line, "replacement must be an object or null");
    }

    if (entry.deprecated_in && *entry.deprecated_in < entry.introduced_in) {
      throw MalformedCatalogError(line,
                                  "deprecatedIn precedes introducedIn");
    }
    for (const ApiDeclaration& existing : catalog.entries) {
      if (existing.owner == entry.owner && existing.method == entry.method &&
          existing.param_types == entry.param_types) {
        throw DuplicateEntryError(entry.key());
      }
    }
    catalog.entries.push_back(std::move(entry));
  }

  bool have_range = false;
  for (const ApiDeclaration& e : catalog.entries) {
    auto widen = [&](int v) {
      if (!have_range) {
        catalog.version_range = {v, v};
        have_range = true;
      } else {
        catalog.version_range.first = std::min(catalog.version_range.first, v);
        catalog.version_range.second = std::max(catalog.version_range.second, v);
      }
    };
    widen(e.introduced_in);
    if (e.deprecated_in) widen(*e.deprecated_in);
  }
  return catalog;
}

ApiCatalog load_catalog(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw MalformedCatalogError(0, "cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_catalog_json(buf.str());
}

namespace {

bool is_hex_or_binary(const std::string& t) {
  return t.size() > 2 && t[0] == '0' && (t[1] == 'x' || t[1] == 'X' ||
                                         t[1] == 'b' || t[1] == 'B');
}

std::string literal_type(const std::string& t) {
  if (t == "null") return "null";
  if (t == "true" || t == "false") return "boolean";
  if (!t.empty() && (t[0] == '"')) return "java.lang.String";
  if (!t.empty() && t[0] == '\'') return "char";
  char last = t.empty() ? '\0' : t.back();
  if (!is_hex_or_binary(t)) {
    if (last == 'f' || last == 'F') return "float";
    if (last == 'd' || last == 'D') return "double";
    if (t.find('.') != std::string::npos ||
        t.find('e') != std::string::npos || t.find('E') != std::string::npos) {
      return "double";
    }
  }
  if (last == 'l' || last == 'L') return "long";
  return "int";
}

// True when the type name is exact enough to compare against a catalog
// parameter. Bare simple names that no import explains stay imprecise.
bool type_is_precise(const std::string& t) {
  if (t.empty()) return false;
  if (t == "null") return true;
  std::string base = t;
  while (base.size() >= 2 && base.substr(base.size() - 2) == "[]") {
    base.resize(base.size() - 2);
  }
  return is_primitive_type(base) || base.find('.') != std::string::npos;
}

std::string numeric_promote(const std::string& a, const std::string& b) {
  auto rank = [](const std::string& t) {
    if (t == "double") return 4;
    if (t == "float") return 3;
    if (t == "long") return 2;
    if (t == "int" || t == "char" || t == "short" || t == "byte") return 1;
    return 0;
  };
  int ra = rank(a), rb = rank(b);
  if (ra == 0 || rb == 0) return "";
  int r = std::max(ra, rb);
  if (r == 4) return "double";
  if (r == 3) return "float";
  if (r == 2) return "long";
  return "int";
}

}  // namespace

std::optional<std::string> type_of_expr(const Ast& ast, NodeId expr,
                                        const TypeResolver& resolver,
                                        const ApiCatalog* catalog) {
  const AstNode& n = ast.node(expr);
  switch (n.kind) {
    case NodeKind::Literal:
      return literal_type(n.name);
    case NodeKind::Name: {
      if (auto t = resolver.resolve(n.name, expr)) return t;
      return std::nullopt;
    }
    case NodeKind::Cast:
      return resolver.qualify(n.declared_type);
    case NodeKind::ObjectCreation:
      if (n.name == "{}") return std::nullopt;
      return resolver.qualify(n.declared_type);
    case NodeKind::FieldAccess: {
      if (n.children.size() == 1) {
        const AstNode& recv = ast.node(n.children[0]);
        if (recv.kind == NodeKind::Name && recv.name == "this") {
          if (auto t = resolver.resolve(n.name, expr)) return t;
        }
      }
      return std::nullopt;
    }
    case NodeKind::ArrayAccess: {
      if (n.children.empty()) return std::nullopt;
      auto base = type_of_expr(ast, n.children[0], resolver, catalog);
      if (base && base->size() >= 2 &&
          base->substr(base->size() - 2) == "[]") {
        return base->substr(0, base->size() - 2);
      }
      return std::nullopt;
    }
    case NodeKind::UnaryExpr: {
      if (n.op == "!") return "boolean";
      if (n.children.empty()) return std::nullopt;
      return type_of_expr(ast, n.children[0], resolver, catalog);
    }
    case NodeKind::BinaryExpr: {
      const std::string& op = n.op;
      if (op == "==" || op == "!=" || op == "<" || op == ">" || op == "<=" ||
          op == ">=" || op == "&&" || op == "||" || op == "instanceof") {
        return "boolean";
      }
      if (op == "?:" && n.children.size() == 3) {
        return type_of_expr(ast, n.children[1], resolver, catalog);
      }
      if (n.children.size() != 2) return std::nullopt;
      if (op == "=" || op == "+=" || op == "-=" || op == "*=" || op == "/=") {
        return type_of_expr(ast, n.children[0], resolver, catalog);
      }
      auto lhs = type_of_expr(ast, n.children[0], resolver, catalog);
      auto rhs = type_of_expr(ast, n.children[1], resolver, catalog);
      if (op == "+" && ((lhs && *lhs == "java.lang.String") ||
                        (rhs && *rhs == "java.lang.String"))) {
        return "java.lang.String";
      }
      if (lhs && rhs) {
        std::string promoted = numeric_promote(*lhs, *rhs);
        if (!promoted.empty()) return promoted;
      }
      return std::nullopt;
    }
    case NodeKind::MethodInvocation: {
      if (catalog) {
        MatchResult m = match_invocation(*catalog, ast, expr, resolver);
        if (m.strength == MatchStrength::Perfect && m.matched) {
          return m.matched->return_type;
        }
      } else if (resolver.invocation_typer()) {
        return resolver.invocation_typer()(ast, expr, resolver);
      }
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

bool name_and_arity_match(const ApiDeclaration& entry, const Ast& ast,
                          NodeId call) {
  const AstNode& n = ast.node(call);
  return n.kind == NodeKind::MethodInvocation && n.name == entry.method &&
         invocation_arg_count(ast, call) == entry.param_types.size();
}

bool owner_evidence_present(const ApiDeclaration& entry, const Ast& ast,
                            NodeId call, const TypeResolver& resolver) {
  if (resolver.has_import_of(entry.owner)) return true;
  if (resolver.has_static_import_from(entry.owner)) return true;
  NodeId recv = invocation_receiver(ast, call);
  if (recv != kInvalidNode) {
    const AstNode& r = ast.node(recv);
    if (r.kind == NodeKind::Name) {
      if (auto t = resolver.resolve(r.name, recv)) {
        if (*t == entry.owner) return true;
      }
      if (resolver.qualify(r.name) == entry.owner) return true;
    }
    std::string chain = dotted_name(ast, recv);
    if (!chain.empty() && chain == entry.owner) return true;
  }
  return false;
}

bool argument_type_fits(const std::string& arg, const std::string& param) {
  if (arg == "null") return !is_primitive_type(param);
  return arg == param;
}

MatchResult match_invocation(const ApiCatalog& catalog, const Ast& ast,
                             NodeId call, const TypeResolver& resolver) {
  MatchResult result;
  const AstNode& n = ast.node(call);
  if (n.kind != NodeKind::MethodInvocation) return result;

  std::size_t argc = invocation_arg_count(ast, call);
  std::vector<std::optional<std::string>> arg_types(argc);
  bool typed = false;
  auto ensure_types = [&]() {
    if (typed) return;
    typed = true;
    for (std::size_t i = 0; i < argc; ++i) {
      auto t = type_of_expr(ast, invocation_arg(ast, call, i), resolver, &catalog);
      if (t && type_is_precise(*t)) arg_types[i] = t;
    }
  };

  std::vector<const ApiDeclaration*> perfects;
  std::vector<const ApiDeclaration*> partials;
  for (const ApiDeclaration& entry : catalog.entries) {
    if (!name_and_arity_match(entry, ast, call)) continue;
    ensure_types();
    bool all_resolved = true;
    bool any_mismatch = false;
    for (std::size_t i = 0; i < argc; ++i) {
      if (!arg_types[i]) {
        all_resolved = false;
      } else if (!argument_type_fits(*arg_types[i], entry.param_types[i])) {
        any_mismatch = true;
      }
    }
    if (any_mismatch) continue;
    if (all_resolved) {
      perfects.push_back(&entry);
    } else if (owner_evidence_present(entry, ast, call, resolver)) {
      partials.push_back(&entry);
    }
  }

  if (perfects.size() == 1) {
    result.strength = MatchStrength::Perfect;
    result.matched = perfects.front();
  } else if (perfects.size() > 1) {
    result.ambiguous = perfects;
  } else if (partials.size() == 1) {
    result.strength = MatchStrength::Partial;
    result.matched = partials.front();
  } else if (partials.size() > 1) {
    result.ambiguous = partials;
  }
  return result;
}

void install_invocation_typer(TypeResolver& resolver, const ApiCatalog& catalog) {
  resolver.set_invocation_typer(
      [&catalog](const Ast& ast, NodeId call,
                 const TypeResolver& r) -> std::optional<std::string> {
        MatchResult m = match_invocation(catalog, ast, call, r);
        if (m.strength == MatchStrength::Perfect && m.matched) {
          return m.matched->return_type;
        }
        return std::nullopt;
      });
}

}  // namespace a4

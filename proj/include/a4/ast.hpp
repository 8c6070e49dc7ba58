#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "a4/span.hpp"
#include "a4/token.hpp"

namespace a4 {

using NodeId = std::uint32_t;
inline constexpr NodeId kInvalidNode = std::numeric_limits<std::uint32_t>::max();

enum class NodeKind {
  CompilationUnit,
  ImportDecl,
  ClassDecl,
  MethodDecl,
  FieldDecl,
  LocalVarDecl,
  ExprStmt,
  ReturnStmt,
  IfStmt,
  ForStmt,
  WhileStmt,
  TryStmt,
  Block,
  MethodInvocation,
  ObjectCreation,
  FieldAccess,
  Name,
  Literal,
  Cast,
  BinaryExpr,
  UnaryExpr,
  ArrayAccess,
  OpaqueExpr,
};

const char* node_kind_name(NodeKind kind);

struct AstNode {
  NodeKind kind{};
  ByteSpan span{};
  NodeId parent = kInvalidNode;
  std::vector<NodeId> children;

  // Simple name: invocation/decl/class name, import path, literal text.
  std::string name;
  ByteSpan name_span{};

  // Declared/cast/created type as written, erased of type arguments.
  std::string declared_type;

  // Operator text for BinaryExpr/UnaryExpr ("?:" for conditionals).
  std::string op;

  // Control headers (condition/init region) and invocation argument lists.
  ByteSpan header_span{};

  // Additional declarator names of multi-variable declarations; catch
  // parameter names on TryStmt.
  std::vector<std::string> extra_names;

  bool has_receiver = false;   // MethodInvocation
  bool is_static = false;      // static import
  bool is_enhanced_for = false;
  bool resolved_partially = false;
};

// Arena-owned syntax tree; keeps the original text so untouched bytes can
// be reproduced exactly.
class Ast {
 public:
  Ast() = default;
  explicit Ast(std::string source) : source_(std::move(source)) {}

  NodeId make(NodeKind kind, ByteSpan span) {
    nodes_.push_back(AstNode{});
    nodes_.back().kind = kind;
    nodes_.back().span = span;
    return static_cast<NodeId>(nodes_.size() - 1);
  }

  AstNode& node(NodeId id) { return nodes_[id]; }
  const AstNode& node(NodeId id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }

  void set_root(NodeId id) { root_ = id; }
  NodeId root() const { return root_; }

  const std::string& source() const { return source_; }
  std::string_view text_of(NodeId id) const {
    const ByteSpan& s = nodes_[id].span;
    return std::string_view(source_).substr(s.begin, s.end - s.begin);
  }

  void add_child(NodeId parent, NodeId child) {
    nodes_[parent].children.push_back(child);
    nodes_[child].parent = parent;
  }

  // All nodes of a kind in textual (span.begin) order.
  std::vector<NodeId> collect(NodeKind kind) const;

  // Preorder walk of the subtree rooted at id.
  template <typename Fn>
  void walk(NodeId id, Fn&& fn) const {
    fn(id, nodes_[id]);
    for (NodeId c : nodes_[id].children) walk(c, fn);
  }

  // Preorder walk of the whole tree; no-op when there is no root.
  template <typename Fn>
  void walk(Fn&& fn) const {
    if (root_ != kInvalidNode) walk(root_, fn);
  }

  // Innermost ancestor (or self) satisfying a predicate; kInvalidNode if none.
  template <typename Pred>
  NodeId find_ancestor(NodeId id, Pred&& pred) const {
    for (NodeId n = id; n != kInvalidNode; n = nodes_[n].parent) {
      if (pred(nodes_[n])) return n;
    }
    return kInvalidNode;
  }

  NodeId enclosing(NodeId id, NodeKind kind) const {
    return find_ancestor(id, [kind](const AstNode& n) { return n.kind == kind; });
  }

 private:
  std::string source_;
  std::vector<AstNode> nodes_;
  NodeId root_ = kInvalidNode;
};

enum class Completeness { Full, Partial };

struct ParseResult {
  Ast ast;
  Completeness completeness = Completeness::Full;
  std::vector<Diagnostic> diagnostics;
};

// Helpers over MethodInvocation nodes.
inline NodeId invocation_receiver(const Ast& ast, NodeId call) {
  const AstNode& n = ast.node(call);
  return n.has_receiver ? n.children.front() : kInvalidNode;
}
inline std::size_t invocation_arg_count(const Ast& ast, NodeId call) {
  const AstNode& n = ast.node(call);
  return n.children.size() - (n.has_receiver ? 1 : 0);
}
inline NodeId invocation_arg(const Ast& ast, NodeId call, std::size_t i) {
  const AstNode& n = ast.node(call);
  return n.children[i + (n.has_receiver ? 1 : 0)];
}

// Dotted text of a pure name/field-access chain ("a.b.c"); empty if the
// expression is not a plain chain.
std::string dotted_name(const Ast& ast, NodeId id);

}  // namespace a4

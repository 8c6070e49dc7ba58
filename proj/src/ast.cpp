#include "a4/ast.hpp"

#include <algorithm>

namespace a4 {

const char* node_kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::CompilationUnit: return "CompilationUnit";
    case NodeKind::ImportDecl: return "ImportDecl";
    case NodeKind::ClassDecl: return "ClassDecl";
    case NodeKind::MethodDecl: return "MethodDecl";
    case NodeKind::FieldDecl: return "FieldDecl";
    case NodeKind::LocalVarDecl: return "LocalVarDecl";
    case NodeKind::ExprStmt: return "ExprStmt";
    case NodeKind::ReturnStmt: return "ReturnStmt";
    case NodeKind::IfStmt: return "IfStmt";
    case NodeKind::ForStmt: return "ForStmt";
    case NodeKind::WhileStmt: return "WhileStmt";
    case NodeKind::TryStmt: return "TryStmt";
    case NodeKind::Block: return "Block";
    case NodeKind::MethodInvocation: return "MethodInvocation";
    case NodeKind::ObjectCreation: return "ObjectCreation";
    case NodeKind::FieldAccess: return "FieldAccess";
    case NodeKind::Name: return "Name";
    case NodeKind::Literal: return "Literal";
    case NodeKind::Cast: return "Cast";
    case NodeKind::BinaryExpr: return "BinaryExpr";
    case NodeKind::UnaryExpr: return "UnaryExpr";
    case NodeKind::ArrayAccess: return "ArrayAccess";
    case NodeKind::OpaqueExpr: return "OpaqueExpr";
  }
  return "?";
}

std::vector<NodeId> Ast::collect(NodeKind kind) const {
  std::vector<NodeId> out;
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    if (nodes_[id].kind == kind) out.push_back(id);
  }
  std::sort(out.begin(), out.end(), [this](NodeId a, NodeId b) {
    if (nodes_[a].span.begin != nodes_[b].span.begin) {
      return nodes_[a].span.begin < nodes_[b].span.begin;
    }
    return nodes_[a].span.end > nodes_[b].span.end;
  });
  return out;
}

std::string dotted_name(const Ast& ast, NodeId id) {
  const AstNode& n = ast.node(id);
  if (n.kind == NodeKind::Name) return n.name;
  if (n.kind == NodeKind::FieldAccess && !n.children.empty()) {
    std::string base = dotted_name(ast, n.children.front());
    if (base.empty()) return "";
    return base + "." + n.name;
  }
  return "";
}

}  // namespace a4

#include "a4/dataflow.hpp"

#include <algorithm>
#include <sstream>

#include "a4/token.hpp"

namespace a4 {

namespace {

bool is_assign(const std::string& op) {
  return op == "=" || op == "+=" || op == "-=" || op == "*=" || op == "/=" ||
         op == "%=" || op == "&=" || op == "|=" || op == "^=" || op == "<<=" ||
         op == ">>=" || op == ">>>=";
}

struct DefUse {
  std::set<std::string> defs;
  std::set<std::string> uses;
};

std::string chain_root(const Ast& ast, NodeId id) {
  const AstNode* n = &ast.node(id);
  while (n->kind == NodeKind::FieldAccess || n->kind == NodeKind::ArrayAccess) {
    if (n->children.empty()) return "";
    n = &ast.node(n->children.front());
  }
  return n->kind == NodeKind::Name ? n->name : "";
}

void expr_uses(const Ast& ast, NodeId id, DefUse& du);

void define_target(const Ast& ast, NodeId id, DefUse& du) {
  const AstNode& n = ast.node(id);
  switch (n.kind) {
    case NodeKind::Name:
      if (n.name != "this" && n.name != "super") du.defs.insert(n.name);
      break;
    case NodeKind::FieldAccess: {
      std::string dotted = dotted_name(ast, id);
      if (!dotted.empty()) {
        du.defs.insert(dotted);
        std::string root = dotted.substr(0, dotted.find('.'));
        if (root != "this" && root != "super") du.uses.insert(root);
      } else {
        expr_uses(ast, id, du);
      }
      break;
    }
    case NodeKind::ArrayAccess: {
      std::string root = chain_root(ast, id);
      if (!root.empty() && root != "this") du.defs.insert(root);
      for (NodeId c : n.children) expr_uses(ast, c, du);
      break;
    }
    default:
      expr_uses(ast, id, du);
      break;
  }
}

void opaque_uses(const Ast& ast, NodeId id, DefUse& du) {
  for (const Token& t : tokenize(ast.text_of(id))) {
    if (t.kind == TokenKind::Identifier) du.uses.insert(t.text);
  }
}

void expr_uses(const Ast& ast, NodeId id, DefUse& du) {
  const AstNode& n = ast.node(id);
  switch (n.kind) {
    case NodeKind::Name:
      if (n.name != "this" && n.name != "super") du.uses.insert(n.name);
      break;
    case NodeKind::Literal:
      break;
    case NodeKind::FieldAccess: {
      std::string dotted = dotted_name(ast, id);
      if (!dotted.empty()) {
        du.uses.insert(dotted);
        std::string root = dotted.substr(0, dotted.find('.'));
        if (root != "this" && root != "super") du.uses.insert(root);
      } else {
        for (NodeId c : n.children) expr_uses(ast, c, du);
      }
      break;
    }
    case NodeKind::OpaqueExpr:
      opaque_uses(ast, id, du);
      break;
    case NodeKind::UnaryExpr:
      if (n.op == "++" || n.op == "--") {
        if (!n.children.empty()) {
          define_target(ast, n.children[0], du);
          expr_uses(ast, n.children[0], du);
        }
        break;
      }
      for (NodeId c : n.children) expr_uses(ast, c, du);
      break;
    case NodeKind::BinaryExpr:
      if (is_assign(n.op) && n.children.size() == 2) {
        define_target(ast, n.children[0], du);
        if (n.op != "=") expr_uses(ast, n.children[0], du);
        expr_uses(ast, n.children[1], du);
        break;
      }
      for (NodeId c : n.children) expr_uses(ast, c, du);
      break;
    default:
      for (NodeId c : n.children) expr_uses(ast, c, du);
      break;
  }
}

bool within(const ByteSpan& inner, const ByteSpan& outer) {
  return inner.begin >= outer.begin && inner.end <= outer.end;
}

bool is_catch_param(const Ast& ast, NodeId id) {
  const AstNode& n = ast.node(id);
  if (n.kind != NodeKind::LocalVarDecl || n.parent == kInvalidNode) return false;
  const AstNode& p = ast.node(n.parent);
  return p.kind == NodeKind::Block && p.op == "catch" &&
         !p.children.empty() && p.children.front() == id;
}

std::vector<std::string> identifier_tokens_sorted(const std::string& text) {
  std::vector<std::string> out;
  for (const Token& t : tokenize(text)) {
    if (t.kind == TokenKind::Identifier) out.push_back(t.text);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> calls_within(const Ast& ast, NodeId root,
                                      const ByteSpan* limit) {
  std::vector<std::pair<std::size_t, std::string>> found;
  ast.walk(root, [&](NodeId, const AstNode& n) {
    if (limit && !within(n.span, *limit)) return;
    if (n.kind == NodeKind::MethodInvocation) {
      found.push_back({n.span.begin, n.name});
    } else if (n.kind == NodeKind::ObjectCreation && n.name != "{}") {
      found.push_back({n.span.begin, n.name});
    }
  });
  std::sort(found.begin(), found.end());
  std::vector<std::string> out;
  for (auto& [pos, name] : found) out.push_back(name);
  return out;
}

class GraphBuilder {
 public:
  GraphBuilder(const Ast& ast, const TypeResolver* resolver)
      : ast_(ast), resolver_(resolver) {}

  DataFlowGraph build(NodeId method) {
    for (NodeId c : ast_.node(method).children) {
      if (ast_.node(c).kind == NodeKind::Block) flatten_block(c);
    }
    link();
    return std::move(graph_);
  }

 private:
  const Ast& ast_;
  const TypeResolver* resolver_;
  DataFlowGraph graph_;

  std::string qualify(const std::string& t) const {
    return resolver_ ? resolver_->qualify(t) : t;
  }

  void flatten_block(NodeId block) {
    for (NodeId c : ast_.node(block).children) {
      if (is_catch_param(ast_, c)) continue;
      flatten(c);
    }
  }

  void flatten(NodeId stmt) {
    const AstNode& n = ast_.node(stmt);
    switch (n.kind) {
      case NodeKind::Block:
        flatten_block(stmt);
        break;
      case NodeKind::LocalVarDecl:
      case NodeKind::ExprStmt:
      case NodeKind::ReturnStmt:
      case NodeKind::OpaqueExpr:
        emit(stmt);
        break;
      case NodeKind::IfStmt:
      case NodeKind::WhileStmt:
      case NodeKind::ForStmt:
        emit(stmt);
        for (NodeId c : n.children) {
          if (!within(ast_.node(c).span, n.header_span)) flatten(c);
        }
        break;
      case NodeKind::TryStmt:
        emit(stmt);
        for (NodeId c : n.children) {
          if (ast_.node(c).kind == NodeKind::Block) flatten_block(c);
        }
        break;
      default:
        break;
    }
  }

  void emit(NodeId stmt) {
    const AstNode& n = ast_.node(stmt);
    DfgNode node;
    node.id = static_cast<int>(graph_.nodes.size());
    node.stmt = stmt;
    node.label.kind = n.kind;

    DefUse du;
    switch (n.kind) {
      case NodeKind::LocalVarDecl: {
        du.defs.insert(n.name);
        for (const std::string& extra : n.extra_names) du.defs.insert(extra);
        for (NodeId c : n.children) expr_uses(ast_, c, du);
        node.label.decl_type = n.declared_type;
        node.text = normalize_snippet(std::string(ast_.text_of(stmt)));
        node.label.called = calls_within(ast_, stmt, nullptr);
        break;
      }
      case NodeKind::ExprStmt:
      case NodeKind::ReturnStmt:
        for (NodeId c : n.children) expr_uses(ast_, c, du);
        node.text = normalize_snippet(std::string(ast_.text_of(stmt)));
        node.label.called = calls_within(ast_, stmt, nullptr);
        break;
      case NodeKind::OpaqueExpr:
        opaque_uses(ast_, stmt, du);
        node.text = normalize_snippet(std::string(ast_.text_of(stmt)));
        break;
      case NodeKind::IfStmt:
      case NodeKind::WhileStmt: {
        for (NodeId c : n.children) {
          if (within(ast_.node(c).span, n.header_span)) expr_uses(ast_, c, du);
        }
        std::string kw = n.kind == NodeKind::IfStmt ? "if" : "while";
        node.text = kw + " " + normalize_snippet(header_text(n)) + " {}";
        node.label.called = calls_within(ast_, stmt, &n.header_span);
        break;
      }
      case NodeKind::ForStmt: {
        if (n.is_enhanced_for) {
          du.defs.insert(n.name);
          node.label.decl_type = n.declared_type;
        }
        for (NodeId c : n.children) {
          const AstNode& child = ast_.node(c);
          if (!within(child.span, n.header_span)) continue;
          if (child.kind == NodeKind::LocalVarDecl) {
            du.defs.insert(child.name);
            for (const std::string& extra : child.extra_names) {
              du.defs.insert(extra);
            }
            if (node.label.decl_type.empty()) {
              node.label.decl_type = child.declared_type;
            }
            for (NodeId gc : child.children) expr_uses(ast_, gc, du);
          } else {
            expr_uses(ast_, c, du);
          }
        }
        node.text = "for " + normalize_snippet(header_text(n)) + " {}";
        node.label.called = calls_within(ast_, stmt, &n.header_span);
        break;
      }
      case NodeKind::TryStmt: {
        for (const std::string& param : n.extra_names) du.defs.insert(param);
        for (NodeId c : n.children) {
          if (ast_.node(c).kind == NodeKind::OpaqueExpr) opaque_uses(ast_, c, du);
        }
        node.text = try_snippet(n);
        break;
      }
      default:
        break;
    }

    node.defines = std::move(du.defs);
    node.uses = std::move(du.uses);
    node.label.decl_type_qualified = qualify(node.label.decl_type);
    node.ident_tokens = identifier_tokens_sorted(node.text);
    graph_.nodes.push_back(std::move(node));
  }

  std::string header_text(const AstNode& n) const {
    return std::string(ast_.source().substr(
        n.header_span.begin, n.header_span.end - n.header_span.begin));
  }

  std::string try_snippet(const AstNode& n) const {
    std::string out = "try";
    if (!n.header_span.empty()) {
      out += " " + normalize_snippet(header_text(n));
    }
    out += " {}";
    for (NodeId c : n.children) {
      const AstNode& block = ast_.node(c);
      if (block.kind != NodeKind::Block) continue;
      if (block.op == "catch") {
        out += " catch (";
        if (!block.children.empty()) {
          const AstNode& param = ast_.node(block.children.front());
          if (param.kind == NodeKind::LocalVarDecl) {
            out += param.declared_type + " " + param.name;
          }
        }
        out += ") {}";
      } else if (block.op == "finally") {
        out += " finally {}";
      }
    }
    return out;
  }

  void link() {
    for (std::size_t a = 0; a < graph_.nodes.size(); ++a) {
      for (std::size_t b = a + 1; b < graph_.nodes.size(); ++b) {
        for (const std::string& v : graph_.nodes[a].defines) {
          if (graph_.nodes[b].uses.count(v)) {
            graph_.edges.push_back({static_cast<int>(a), static_cast<int>(b), v});
          }
        }
      }
    }
    std::sort(graph_.edges.begin(), graph_.edges.end());
  }
};

}  // namespace

int DataFlowGraph::node_for_stmt(NodeId stmt) const {
  for (const DfgNode& n : nodes) {
    if (n.stmt == stmt) return n.id;
  }
  return -1;
}

std::vector<int> DataFlowGraph::predecessors(int id) const {
  std::vector<int> out;
  for (const DfgEdge& e : edges) {
    if (e.use_node == id) out.push_back(e.def_node);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

DataFlowGraph build_dfg(const Ast& ast, NodeId method,
                        const TypeResolver* resolver) {
  return GraphBuilder(ast, resolver).build(method);
}

SlicedGraph backward_slice(const DataFlowGraph& dfg, int focal) {
  if (focal < 0 || focal >= static_cast<int>(dfg.nodes.size())) {
    throw UnknownNodeError(focal);
  }
  SlicedGraph sliced;
  sliced.base = dfg;
  sliced.focal = focal;
  std::vector<int> frontier{focal};
  sliced.kept.insert(focal);
  while (!frontier.empty()) {
    int cur = frontier.back();
    frontier.pop_back();
    for (const DfgEdge& e : dfg.edges) {
      if (e.use_node == cur && !sliced.kept.count(e.def_node)) {
        sliced.kept.insert(e.def_node);
        frontier.push_back(e.def_node);
      }
    }
  }
  for (DfgNode& n : sliced.base.nodes) {
    n.is_focal = n.id == focal;
    n.position_sign = n.id < focal ? -1 : (n.id == focal ? 0 : 1);
  }
  return sliced;
}

int dfg_node_containing(const DataFlowGraph& dfg, const Ast& ast, NodeId expr) {
  for (NodeId cur = expr; cur != kInvalidNode; cur = ast.node(cur).parent) {
    int id = dfg.node_for_stmt(cur);
    if (id != -1) return id;
  }
  return -1;
}

std::string debug_export(const DataFlowGraph& dfg) {
  std::ostringstream out;
  for (const DfgNode& n : dfg.nodes) {
    out << "node " << n.id << ": " << node_kind_name(n.label.kind);
    if (n.is_focal) out << " [focal]";
    out << " defines={";
    bool first = true;
    for (const std::string& v : n.defines) {
      if (!first) out << ",";
      out << v;
      first = false;
    }
    out << "} uses={";
    first = true;
    for (const std::string& v : n.uses) {
      if (!first) out << ",";
      out << v;
      first = false;
    }
    out << "} | " << n.text << "\n";
  }
  for (const DfgEdge& e : dfg.edges) {
    out << e.def_node << " -> " << e.use_node << " [" << e.var << "]\n";
  }
  return out.str();
}

}  // namespace a4

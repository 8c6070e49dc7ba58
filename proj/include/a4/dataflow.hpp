#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "a4/ast.hpp"
#include "a4/type_resolver.hpp"

namespace a4 {

struct DfgLabel {
  NodeKind kind = NodeKind::OpaqueExpr;
  std::vector<std::string> called;   // invoked method names, textual order
  std::string decl_type;             // declared type when the node defines one
  std::string decl_type_qualified;
};

struct DfgNode {
  int id = 0;
  NodeId stmt = kInvalidNode;
  std::set<std::string> defines;
  std::set<std::string> uses;
  bool is_focal = false;
  DfgLabel label;
  // Normalized single-line form of the statement (headers only for
  // compound statements); re-parseable on its own inside a method body.
  std::string text;
  std::vector<std::string> ident_tokens;  // sorted, with duplicates
  int position_sign = 0;                  // -1 before focal, 0 focal, +1 after
};

struct DfgEdge {
  int def_node;
  int use_node;
  std::string var;
  bool operator==(const DfgEdge&) const = default;
  bool operator<(const DfgEdge& o) const {
    if (def_node != o.def_node) return def_node < o.def_node;
    if (use_node != o.use_node) return use_node < o.use_node;
    return var < o.var;
  }
};

struct DataFlowGraph {
  std::vector<DfgNode> nodes;  // textual order; node id == index
  std::vector<DfgEdge> edges;

  int node_for_stmt(NodeId stmt) const;
  std::vector<int> predecessors(int id) const;
};

class UnknownNodeError : public std::runtime_error {
 public:
  explicit UnknownNodeError(int id)
      : std::runtime_error("no graph node with id " + std::to_string(id)) {}
};

struct SlicedGraph {
  DataFlowGraph base;
  std::set<int> kept;
  int focal = -1;
};

// One graph node per statement of the method body, nested blocks flattened
// in textual order. Compound statements carry only their header def/uses;
// their nested statements get nodes of their own. `resolver` (optional)
// qualifies declared type labels.
DataFlowGraph build_dfg(const Ast& ast, NodeId method,
                        const TypeResolver* resolver = nullptr);

// Reverse reachability from the focal node. Marks is_focal and
// position_sign on the returned copy.
SlicedGraph backward_slice(const DataFlowGraph& dfg, int focal);

// Node table, then one `defId -> useId [var]` line per edge, ordered by id.
std::string debug_export(const DataFlowGraph& dfg);

// Graph node whose statement contains `expr` (via ancestor walk); -1 when
// the expression sits outside every graphed statement.
int dfg_node_containing(const DataFlowGraph& dfg, const Ast& ast, NodeId expr);

}  // namespace a4

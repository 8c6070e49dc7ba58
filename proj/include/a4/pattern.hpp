#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "a4/catalog.hpp"
#include "a4/dataflow.hpp"
#include "a4/miner.hpp"

namespace a4 {

struct TokenEdit {
  enum class Kind { Rename, InsertToken, DeleteToken, ReplaceArgument };
  Kind kind;
  std::size_t at = 0;  // byte offset into the before-node snippet text
  std::string text;
  bool operator==(const TokenEdit&) const = default;
};

struct NodePairing {
  int before_id = -1;  // index into the before-snippet statement list
  int after_id = -1;
  double similarity = 0.0;
  std::vector<TokenEdit> edits;
};

struct NewNode {
  int after_id = -1;
  std::string text;          // normalized statement
  std::string defines_name;  // empty when the statement defines nothing
  std::string defines_type;  // qualified, captured at learning time
};

// A re-parsed pattern side: the snippet wrapped in a synthetic method, its
// statement graph, and the focal call when present.
struct PatternGraph {
  std::shared_ptr<ParseResult> parsed;
  DataFlowGraph graph;
  int focal = -1;
  NodeId focal_call = kInvalidNode;
};

struct MigrationMapping {
  std::string api_key;
  const ApiDeclaration* api = nullptr;
  std::string source_id;
  std::string example_id;
  std::string pattern_id;
  std::string before_snippet;
  std::string after_snippet;
  std::vector<NodePairing> pairings;
  std::vector<NewNode> new_nodes;
  bool removes_call = false;
  PatternGraph before;
  PatternGraph after;
};

class EmptyPatternError : public std::runtime_error {
 public:
  explicit EmptyPatternError(const std::string& example_id)
      : std::runtime_error("pattern learned from " + example_id +
                           " has no retained nodes") {}
};

struct PrunedSlices {
  std::vector<int> before_kept;           // slice node ids, textual order
  std::vector<int> after_kept;
  std::map<int, int> identity;            // before id -> identical after id
};

// Drops every identity-matched non-focal node whose data-adjacent nodes are
// all identity-matched too; such context cannot contribute to a migration.
PrunedSlices prune_identical(const MigrationExample& example);

// 0.4 same statement kind + 0.3 identifier-multiset Jaccard
// + 0.2 same defined declared type + 0.1 same side of the focal call.
double node_similarity(const DfgNode& a, const DfgNode& b);

MigrationMapping learn_mapping(const MigrationExample& example,
                               double threshold = 0.5);

// Batch form: unlearnable examples are skipped and logged (reason
// EmptyPattern) instead of aborting the run.
std::vector<MigrationMapping> learn_patterns(
    const std::vector<MigrationExample>& examples, double threshold = 0.5,
    MinerLog* log = nullptr);

// Rebuilds the replayable graphs from snippet text; shared by the learner
// and the store loader so both produce identical in-memory patterns.
MigrationMapping materialize_pattern(const std::string& api_key,
                                     const ApiDeclaration* api,
                                     const std::string& source_id,
                                     const std::string& before_snippet,
                                     const std::string& after_snippet,
                                     std::vector<NodePairing> pairings,
                                     std::vector<NewNode> new_nodes,
                                     bool removes_call);

class MalformedPatternStoreError : public std::runtime_error {
 public:
  explicit MalformedPatternStoreError(const std::string& reason)
      : std::runtime_error("malformed pattern store: " + reason) {}
};

std::string serialize_patterns(const std::vector<MigrationMapping>& patterns);
std::vector<MigrationMapping> parse_patterns_json(const std::string& text,
                                                  const ApiCatalog& catalog);
void save_patterns(const std::string& path,
                   const std::vector<MigrationMapping>& patterns);
std::vector<MigrationMapping> load_patterns(const std::string& path,
                                            const ApiCatalog& catalog);

// Best-effort variable typing for a pattern: snippet declarations, the
// focal receiver (the API owner), bare-name focal arguments (declared
// parameter types), and new-node definitions.
std::map<std::string, std::string> pattern_variable_types(
    const MigrationMapping& mapping);

}  // namespace a4

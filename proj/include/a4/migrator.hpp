#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "a4/pattern.hpp"
#include "a4/render.hpp"

namespace a4 {

// A focal call plus one embedding of the pattern's retained before-graph
// into the call's backward slice.
struct MigrationCandidate {
  const MigrationMapping* mapping = nullptr;
  NodeId call = kInvalidNode;   // target invocation
  NodeId method = kInvalidNode;
  int focal_node = -1;          // node id in `graph`
  DataFlowGraph graph;          // target method's statement graph
  SlicedGraph slice;            // backward slice at focal_node
  std::map<int, int> embedding;  // pattern node id -> target node id
};

enum class Verdict { Applied, Guidance, Unsupported };

const char* verdict_name(Verdict v);

// Reasons: Matched (Applied) | UnmatchedDataflow, AmbiguousMatch,
// OverlapConflict (Guidance) | RemovesCall, LoopHeader, ConditionHeader,
// TryCatchSpan (Unsupported).
struct MigrationOutcome {
  Verdict verdict = Verdict::Guidance;
  std::string reason;
  std::string api_key;
  std::string pattern_id;
  std::size_t offset = 0;  // focal call begin in the target file
  std::vector<SpanEdit> edits;  // nonempty only when Applied
  int tokens_changed = 0;
  std::vector<std::string> suggested_examples;
};

// Abstract subgraph-monomorphism search, exposed so the matcher can be
// checked against exhaustive enumeration. Deterministic: pattern nodes are
// assigned in the given order, target candidates tried in the given order.
struct EmbeddingProblem {
  std::vector<int> pattern_nodes;
  std::vector<std::pair<int, int>> pattern_edges;
  std::vector<int> target_nodes;
  std::set<std::pair<int, int>> target_edges;
  std::function<bool(int, int)> compatible;
};

std::vector<std::map<int, int>> enumerate_embeddings(const EmbeddingProblem& p);

// Exact or simple-name-equal when either side is unqualified; empty
// (unknown) is compatible with anything.
bool type_names_compatible(const std::string& a, const std::string& b);

struct CandidateScan {
  std::vector<MigrationCandidate> candidates;
  std::vector<MigrationOutcome> guidance;  // UnmatchedDataflow records
};

// All embeddings of the pattern at every target call matching its API at
// Partial strength or better. Calls with no embedding produce guidance
// records instead of candidates.
CandidateScan find_candidates(const ParseResult& target,
                              const TypeResolver& resolver,
                              const MigrationMapping& pattern,
                              const ApiCatalog& catalog);

// Reason string when the candidate cannot be rewritten safely; checks, in
// order: pattern removes the call, call in a loop header, call in an if
// header, edits spanning distinct try/catch contexts.
std::optional<std::string> check_supported(const MigrationCandidate& c,
                                           const Ast& ast);

struct NameMap {
  std::map<std::string, std::string> map;    // pattern name -> target name
  std::set<std::string> bound_to_target;     // resolved to existing variables
};

// Maps pattern variables onto target variables of compatible declared type
// (nearest declaration wins); unmatched names keep the pattern's spelling,
// suffixed _m1, _m2, ... when that would collide in the target scope.
NameMap infer_names(const MigrationCandidate& c, const Ast& ast,
                    const TypeResolver& resolver);

// Replays the pattern: new statements inserted before the focal statement,
// then each pairing's token edits re-anchored onto the embedded target
// nodes. Any anchoring failure or span overlap degrades to
// Guidance(OverlapConflict); never a partial result.
MigrationOutcome apply_mapping(const MigrationCandidate& c,
                               const ParseResult& target,
                               const TypeResolver& resolver);

struct FileMigration {
  std::string original;
  std::string migrated;  // equals original when nothing was applied
  std::vector<MigrationOutcome> outcomes;  // textual order
};

// One applicable rewrite at a call site, offered for selection.
struct SiteOption {
  const MigrationMapping* pattern = nullptr;
  MigrationOutcome outcome;  // always Applied
};

// Called once per call site that has at least one applicable rewrite;
// options are in store order. Return the chosen index, or -1 to leave the
// site untouched (no outcome is recorded for a skipped site).
using SiteSelector =
    std::function<int(std::size_t offset, const std::vector<SiteOption>&)>;

// Full pipeline for one file: every call matching any pattern's API is
// resolved to one outcome; patterns are tried in store order and the first
// applied rewrite wins. Ambiguous catalog matches yield
// Guidance(AmbiguousMatch). With a selector, all applicable rewrites at a
// site are collected and the selector picks one instead.
FileMigration migrate_file(const std::string& source,
                           const std::vector<MigrationMapping>& patterns,
                           const ApiCatalog& catalog,
                           const SiteSelector& selector = nullptr);

// Six-row summary in the order: faultless (Applied), minor-modification,
// unmatched guidance, false positive, not-a-migration, unsupported. The
// middle rows need human validation or miner logs and stay zero here.
struct MigrationSummary {
  int faultless = 0;
  int minor_modification = 0;
  int unmatched_guidance = 0;
  int false_positive = 0;
  int not_a_migration = 0;
  int unsupported = 0;
  std::vector<int> tokens_changed;  // one entry per Applied outcome

  std::vector<int> rows() const {
    return {faultless,      minor_modification, unmatched_guidance,
            false_positive, not_a_migration,    unsupported};
  }
};

MigrationSummary classify_outcome(const std::vector<MigrationOutcome>& outcomes);

}  // namespace a4

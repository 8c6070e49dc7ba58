#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "a4/catalog.hpp"
#include "a4/dataflow.hpp"
#include "a4/parser.hpp"

namespace a4 {

enum class SourceKind { SnapshotSequence, ExplicitPair };
enum class Provenance { Mined, UserProvided };

struct SnapshotFile {
  std::string rel_path;
  std::string text;
};

struct Snapshot {
  std::string name;
  std::vector<SnapshotFile> files;  // sorted by rel_path
  const SnapshotFile* find(const std::string& rel_path) const;
};

struct ExampleSource {
  std::string id;
  SourceKind kind = SourceKind::SnapshotSequence;
  std::vector<Snapshot> versions;
};

class UnreadableSnapshotError : public std::runtime_error {
 public:
  explicit UnreadableSnapshotError(const std::string& path_)
      : std::runtime_error("unreadable snapshot: " + path_), path(path_) {}
  std::string path;
};

// Reads a source rooted at `dir`: either ordered vNNN/ subdirectories or
// exactly before/ and after/ (which marks the source user-provided).
ExampleSource load_example_source(const std::string& dir);

struct MigrationExample {
  std::string id;
  const ApiDeclaration* api = nullptr;
  std::string api_key;
  std::string source_id;
  std::string file_path;
  std::string before_text;
  std::string after_text;
  std::shared_ptr<ParseResult> before_parsed;
  std::shared_ptr<ParseResult> after_parsed;
  NodeId before_focal = kInvalidNode;
  NodeId after_focal = kInvalidNode;  // kInvalidNode when the call was removed
  SlicedGraph before_slice;
  std::optional<SlicedGraph> after_slice;
  Provenance provenance = Provenance::Mined;

  bool call_removed() const { return after_focal == kInvalidNode; }
};

struct MinerLogEntry {
  std::string source_id;
  std::string file;
  std::size_t offset = 0;
  std::string reason;
};
using MinerLog = std::vector<MinerLogEntry>;

// Raw-text scoping pass: keeps files whose text contains some catalog
// method name bounded by non-identifier characters.
std::vector<const SnapshotFile*> lexical_prefilter(const Snapshot& snapshot,
                                                   const ApiCatalog& catalog);

struct ApiCallSite {
  NodeId call;
  MatchResult match;
};

// All invocations matching the catalog at Partial or better, textual
// order. Ambiguous sites are excluded here.
std::vector<ApiCallSite> find_api_calls(const ParseResult& file,
                                        const ApiCatalog& catalog);

std::vector<MigrationExample> mine_examples(const ExampleSource& source,
                                            const ApiCatalog& catalog);

// Drops examples whose after-call still resolves to the same deprecated
// entry (renames and reformats); logs each with reason NonMigration.
std::vector<MigrationExample> filter_non_migrations(
    std::vector<MigrationExample> examples, const ApiCatalog& catalog,
    MinerLog* log = nullptr);

}  // namespace a4

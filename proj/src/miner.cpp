#include "a4/miner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace a4 {

const SnapshotFile* Snapshot::find(const std::string& rel_path) const {
  for (const SnapshotFile& f : files) {
    if (f.rel_path == rel_path) return &f;
  }
  return nullptr;
}

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw UnreadableSnapshotError(p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Snapshot load_snapshot(const fs::path& dir) {
  Snapshot snap;
  snap.name = dir.filename().string();
  std::error_code ec;
  for (auto it = fs::recursive_directory_iterator(dir, ec);
       it != fs::recursive_directory_iterator(); ++it) {
    if (!it->is_regular_file()) continue;
    if (it->path().extension() != ".java") continue;
    SnapshotFile f;
    f.rel_path = fs::relative(it->path(), dir).generic_string();
    f.text = read_file(it->path());
    snap.files.push_back(std::move(f));
  }
  if (ec) throw UnreadableSnapshotError(dir.string());
  std::sort(snap.files.begin(), snap.files.end(),
            [](const SnapshotFile& a, const SnapshotFile& b) {
              return a.rel_path < b.rel_path;
            });
  return snap;
}

bool is_version_dir_name(const std::string& name) {
  if (name.size() < 2 || name[0] != 'v') return false;
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
  }
  return true;
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

std::string enclosing_class_name(const Ast& ast, NodeId id) {
  NodeId cls = ast.enclosing(id, NodeKind::ClassDecl);
  return cls == kInvalidNode ? "" : ast.node(cls).name;
}

std::string enclosing_method_name(const Ast& ast, NodeId id) {
  NodeId m = ast.enclosing(id, NodeKind::MethodDecl);
  return m == kInvalidNode ? "" : ast.node(m).name;
}

std::vector<std::string> slice_labels(const SlicedGraph& slice) {
  std::vector<std::string> labels;
  for (int id : slice.kept) {
    const DfgNode& n = slice.base.nodes[id];
    std::string l = node_kind_name(n.label.kind);
    for (const std::string& c : n.label.called) l += ":" + c;
    labels.push_back(std::move(l));
  }
  return labels;
}

int levenshtein(const std::vector<std::string>& a,
                const std::vector<std::string>& b) {
  std::vector<std::vector<int>> d(a.size() + 1,
                                  std::vector<int>(b.size() + 1, 0));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      int sub = d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, sub});
    }
  }
  return d[a.size()][b.size()];
}

// Slice anchored at the statement containing `call`; nullopt when the call
// sits outside any method body.
std::optional<SlicedGraph> slice_at_call(const Ast& ast, NodeId call) {
  NodeId method = ast.enclosing(call, NodeKind::MethodDecl);
  if (method == kInvalidNode) return std::nullopt;
  TypeResolver resolver(ast);
  DataFlowGraph dfg = build_dfg(ast, method, &resolver);
  int focal = dfg_node_containing(dfg, ast, call);
  if (focal == -1) return std::nullopt;
  return backward_slice(dfg, focal);
}

}  // namespace

ExampleSource load_example_source(const std::string& dir) {
  fs::path root(dir);
  std::error_code ec;
  if (!fs::is_directory(root, ec) || ec) throw UnreadableSnapshotError(dir);

  ExampleSource source;
  source.id = root.filename().string();
  if (source.id.empty()) source.id = root.parent_path().filename().string();

  bool has_before = fs::is_directory(root / "before", ec);
  bool has_after = fs::is_directory(root / "after", ec);
  if (has_before && has_after) {
    source.kind = SourceKind::ExplicitPair;
    source.versions.push_back(load_snapshot(root / "before"));
    source.versions.push_back(load_snapshot(root / "after"));
    return source;
  }

  std::vector<fs::path> version_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() &&
        is_version_dir_name(entry.path().filename().string())) {
      version_dirs.push_back(entry.path());
    }
  }
  std::sort(version_dirs.begin(), version_dirs.end());
  if (version_dirs.size() < 2) throw UnreadableSnapshotError(dir);
  source.kind = SourceKind::SnapshotSequence;
  for (const fs::path& p : version_dirs) {
    source.versions.push_back(load_snapshot(p));
  }
  return source;
}

std::vector<const SnapshotFile*> lexical_prefilter(const Snapshot& snapshot,
                                                   const ApiCatalog& catalog) {
  std::set<std::string> names;
  for (const ApiDeclaration& e : catalog.entries) names.insert(e.method);

  std::vector<const SnapshotFile*> out;
  for (const SnapshotFile& f : snapshot.files) {
    bool hit = false;
    for (const std::string& name : names) {
      std::size_t pos = 0;
      while (!hit && (pos = f.text.find(name, pos)) != std::string::npos) {
        bool left_ok = pos == 0 || !ident_char(f.text[pos - 1]);
        std::size_t end = pos + name.size();
        bool right_ok = end >= f.text.size() || !ident_char(f.text[end]);
        if (left_ok && right_ok) hit = true;
        pos += 1;
      }
      if (hit) break;
    }
    if (hit) out.push_back(&f);
  }
  return out;
}

std::vector<ApiCallSite> find_api_calls(const ParseResult& file,
                                        const ApiCatalog& catalog) {
  TypeResolver resolver(file.ast);
  std::vector<ApiCallSite> out;
  for (NodeId call : file.ast.collect(NodeKind::MethodInvocation)) {
    MatchResult m = match_invocation(catalog, file.ast, call, resolver);
    if (m.strength != MatchStrength::None) out.push_back({call, m});
  }
  return out;
}

std::vector<MigrationExample> mine_examples(const ExampleSource& source,
                                            const ApiCatalog& catalog) {
  std::vector<MigrationExample> examples;
  for (std::size_t v = 0; v + 1 < source.versions.size(); ++v) {
    const Snapshot& before_snap = source.versions[v];
    const Snapshot& after_snap = source.versions[v + 1];

    std::set<std::string> scoped;
    for (const SnapshotFile* f : lexical_prefilter(before_snap, catalog)) {
      scoped.insert(f->rel_path);
    }

    for (const SnapshotFile& bf : before_snap.files) {
      if (!scoped.count(bf.rel_path)) continue;
      const SnapshotFile* af = after_snap.find(bf.rel_path);
      if (!af || af->text == bf.text) continue;

      auto before_parsed = std::make_shared<ParseResult>(parse(bf.text));
      auto after_parsed = std::make_shared<ParseResult>(parse(af->text));
      TypeResolver after_resolver(after_parsed->ast);

      std::vector<NodeId> after_invocations =
          after_parsed->ast.collect(NodeKind::MethodInvocation);

      for (const ApiCallSite& site : find_api_calls(*before_parsed, catalog)) {
        const ApiDeclaration* entry = site.match.matched;
        if (!entry || !entry->deprecated_in) continue;

        const Ast& bast = before_parsed->ast;
        std::string cls = enclosing_class_name(bast, site.call);
        std::string mth = enclosing_method_name(bast, site.call);
        if (mth.empty()) continue;

        auto before_slice = slice_at_call(bast, site.call);
        if (!before_slice) continue;

        std::set<std::string> wanted_names{entry->method};
        if (entry->replacement) wanted_names.insert(entry->replacement->method);

        // nearest same-scope call with the old or replacement name
        std::vector<NodeId> candidates;
        for (NodeId ac : after_invocations) {
          const Ast& aast = after_parsed->ast;
          if (!wanted_names.count(aast.node(ac).name)) continue;
          if (enclosing_class_name(aast, ac) != cls) continue;
          if (enclosing_method_name(aast, ac) != mth) continue;
          candidates.push_back(ac);
        }

        NodeId chosen = kInvalidNode;
        std::optional<SlicedGraph> chosen_slice;
        std::size_t focal_pos = bast.node(site.call).span.begin;
        long best_dist = -1;
        int best_label_dist = -1;
        std::vector<std::string> before_labels = slice_labels(*before_slice);
        for (NodeId ac : candidates) {
          long dist = std::labs(
              static_cast<long>(after_parsed->ast.node(ac).span.begin) -
              static_cast<long>(focal_pos));
          auto ac_slice = slice_at_call(after_parsed->ast, ac);
          if (!ac_slice) continue;
          int label_dist = levenshtein(before_labels, slice_labels(*ac_slice));
          if (chosen == kInvalidNode || dist < best_dist ||
              (dist == best_dist && label_dist < best_label_dist)) {
            chosen = ac;
            chosen_slice = ac_slice;
            best_dist = dist;
            best_label_dist = label_dist;
          }
        }

        MigrationExample ex;
        ex.api = entry;
        ex.api_key = entry->key();
        ex.source_id = source.id;
        ex.file_path = bf.rel_path;
        ex.before_text = bf.text;
        ex.after_text = af->text;
        ex.before_parsed = before_parsed;
        ex.after_parsed = after_parsed;
        ex.before_focal = site.call;
        ex.before_slice = *before_slice;
        ex.provenance = source.kind == SourceKind::ExplicitPair
                            ? Provenance::UserProvided
                            : Provenance::Mined;
        ex.id = source.id + "/" + before_snap.name + ".." + after_snap.name +
                "/" + bf.rel_path + ":" + std::to_string(focal_pos);

        if (chosen != kInvalidNode) {
          const Ast& aast = after_parsed->ast;
          bool same_text =
              bast.text_of(site.call) == aast.text_of(chosen);
          MatchResult am =
              match_invocation(catalog, aast, chosen, after_resolver);
          bool same_entry = am.matched && am.matched->key() == entry->key();
          if (same_text && same_entry) continue;  // call untouched
          ex.after_focal = chosen;
          ex.after_slice = chosen_slice;
        } else {
          // removal only counts when the surrounding method survived
          bool method_alive = false;
          const Ast& aast = after_parsed->ast;
          for (NodeId md : aast.collect(NodeKind::MethodDecl)) {
            if (aast.node(md).name == mth &&
                enclosing_class_name(aast, md) == cls) {
              method_alive = true;
            }
          }
          if (!method_alive) continue;
        }
        examples.push_back(std::move(ex));
      }
    }
  }
  return examples;
}

std::vector<MigrationExample> filter_non_migrations(
    std::vector<MigrationExample> examples, const ApiCatalog& catalog,
    MinerLog* log) {
  std::vector<MigrationExample> kept;
  for (MigrationExample& ex : examples) {
    bool drop = false;
    if (!ex.call_removed()) {
      const Ast& aast = ex.after_parsed->ast;
      TypeResolver resolver(aast);
      MatchResult am = match_invocation(catalog, aast, ex.after_focal, resolver);
      drop = am.strength != MatchStrength::None && am.matched &&
             am.matched->key() == ex.api_key;
    }
    if (drop) {
      if (log) {
        log->push_back({ex.source_id, ex.file_path,
                        ex.before_parsed->ast.node(ex.before_focal).span.begin,
                        "NonMigration"});
      }
      continue;
    }
    kept.push_back(std::move(ex));
  }
  return kept;
}

}  // namespace a4

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "a4/catalog.hpp"
#include "a4/diff.hpp"
#include "a4/interactive.hpp"
#include "a4/migrator.hpp"
#include "a4/miner.hpp"
#include "a4/pattern.hpp"
#include "a4/report.hpp"

namespace fs = std::filesystem;
using namespace a4;

namespace {

enum class Mode { DryRun, InPlace, Interactive };

struct RunConfig {
  std::string catalog_path;
  std::string examples_root;
  std::string patterns_path;
  std::string target_root;
  Mode mode = Mode::DryRun;
  double similarity_threshold = 0.5;
  std::string output_path;  // --report
};

struct WriteFailure : std::runtime_error {
  explicit WriteFailure(const std::string& why)
      : std::runtime_error("write failed: " + why) {}
};

struct Palette {
  bool on = false;
  const char* green() const { return on ? "\x1b[32m" : ""; }
  const char* red() const { return on ? "\x1b[31m" : ""; }
  const char* yellow() const { return on ? "\x1b[33m" : ""; }
  const char* cyan() const { return on ? "\x1b[36m" : ""; }
  const char* reset() const { return on ? "\x1b[0m" : ""; }
};

Palette palette() {
  const char* no_color = std::getenv("A4_NO_COLOR");
  if (no_color && *no_color) return {false};
  return {isatty(fileno(stdout)) != 0};
}

void complain(const std::exception& e) {
  std::cerr << "a4: " << e.what() << "\n";
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Whole-file replace via a sibling temp file; nothing is left behind when
// any step fails.
void write_file_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".a4tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw WriteFailure("cannot open " + tmp.string());
    out << text;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw WriteFailure("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(tmp, ignore);
    throw WriteFailure("cannot replace " + path.string() + ": " + ec.message());
  }
}

bool looks_like_source(const fs::path& dir) {
  if (fs::is_directory(dir / "before") && fs::is_directory(dir / "after")) {
    return true;
  }
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (!entry.is_directory()) continue;
    const std::string name = entry.path().filename().string();
    if (name.size() < 2 || name[0] != 'v') continue;
    if (std::all_of(name.begin() + 1, name.end(),
                    [](unsigned char c) { return std::isdigit(c); })) {
      return true;
    }
  }
  return false;
}

std::vector<ExampleSource> load_sources(const std::string& root) {
  if (!fs::is_directory(root)) throw UnreadableSnapshotError(root);
  if (looks_like_source(root)) return {load_example_source(root)};
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && looks_like_source(entry.path())) {
      dirs.push_back(entry.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  std::vector<ExampleSource> sources;
  sources.reserve(dirs.size());
  for (const fs::path& d : dirs) sources.push_back(load_example_source(d.string()));
  return sources;
}

// (absolute path, report-relative path), sorted by the relative path.
std::vector<std::pair<fs::path, std::string>> discover_targets(
    const std::string& target) {
  std::vector<std::pair<fs::path, std::string>> out;
  if (fs::is_regular_file(target)) {
    out.emplace_back(target, fs::path(target).filename().generic_string());
    return out;
  }
  if (!fs::is_directory(target)) {
    throw std::runtime_error("target not found: " + target);
  }
  for (const auto& entry : fs::recursive_directory_iterator(target)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().extension() != ".java") continue;
    out.emplace_back(entry.path(),
                     fs::relative(entry.path(), target).generic_string());
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  return out;
}

void print_outcome(const std::string& file, const MigrationOutcome& o,
                   const Palette& pal) {
  const char* color = pal.green();
  if (o.verdict == Verdict::Guidance) color = pal.yellow();
  if (o.verdict == Verdict::Unsupported) color = pal.red();
  std::cout << file << " @" << o.offset << " " << o.api_key << " -> " << color
            << verdict_name(o.verdict) << pal.reset() << "/" << o.reason;
  if (!o.pattern_id.empty()) std::cout << " pattern=" << o.pattern_id;
  if (o.verdict == Verdict::Applied) std::cout << " tokens=" << o.tokens_changed;
  for (const std::string& ref : o.suggested_examples) std::cout << " see " << ref;
  std::cout << "\n";
}

void print_diff(const std::string& diff, const Palette& pal) {
  std::istringstream in(diff);
  std::string line;
  while (std::getline(in, line)) {
    const char* color = "";
    if (line.rfind("@@", 0) == 0) {
      color = pal.cyan();
    } else if (line.rfind("+++", 0) == 0 || line.rfind("---", 0) == 0) {
      color = "";
    } else if (!line.empty() && line[0] == '+') {
      color = pal.green();
    } else if (!line.empty() && line[0] == '-') {
      color = pal.red();
    }
    std::cout << color << line << (*color ? pal.reset() : "") << "\n";
  }
}

int cmd_mine(const RunConfig& cfg) {
  try {
    ApiCatalog catalog = load_catalog(cfg.catalog_path);
    std::vector<ExampleSource> sources = load_sources(cfg.examples_root);
    MinerLog log;
    std::vector<MigrationExample> examples;
    for (const ExampleSource& s : sources) {
      std::vector<MigrationExample> mined = mine_examples(s, catalog);
      std::move(mined.begin(), mined.end(), std::back_inserter(examples));
    }
    examples = filter_non_migrations(std::move(examples), catalog, &log);
    std::vector<MigrationMapping> patterns =
        learn_patterns(examples, cfg.similarity_threshold, &log);
    write_file_atomic(cfg.patterns_path, serialize_patterns(patterns));

    auto count = [&](const char* reason) {
      return std::count_if(log.begin(), log.end(), [&](const MinerLogEntry& e) {
        return e.reason == reason;
      });
    };
    std::cout << "patterns found: " << patterns.size() << "\n"
              << "non-migrations filtered: " << count("NonMigration") << "\n"
              << "empty patterns discarded: " << count("EmptyPattern") << "\n";
    return 0;
  } catch (const MalformedCatalogError& e) {
    complain(e);
    return 2;
  } catch (const UnreadableSnapshotError& e) {
    complain(e);
    return 3;
  } catch (const WriteFailure& e) {
    complain(e);
    return 4;
  } catch (const std::exception& e) {
    complain(e);
    return 2;
  }
}

int cmd_scan(const RunConfig& cfg) {
  try {
    Palette pal = palette();
    ApiCatalog catalog = load_catalog(cfg.catalog_path);
    std::vector<MigrationMapping> patterns =
        load_patterns(cfg.patterns_path, catalog);
    std::vector<ReportRow> rows;
    for (const auto& [path, rel] : discover_targets(cfg.target_root)) {
      FileMigration fm = migrate_file(read_file(path), patterns, catalog);
      for (const MigrationOutcome& o : fm.outcomes) print_outcome(rel, o, pal);
      std::vector<ReportRow> fr = rows_for_file(rel, fm.outcomes);
      std::move(fr.begin(), fr.end(), std::back_inserter(rows));
    }
    std::cout << "sites: " << rows.size() << "\n";
    if (!cfg.output_path.empty()) {
      sort_rows(rows);
      write_file_atomic(cfg.output_path, serialize_report(rows));
    }
    return 0;
  } catch (const WriteFailure& e) {
    complain(e);
    return 4;
  } catch (const std::exception& e) {
    complain(e);
    return 2;
  }
}

int cmd_apply(const RunConfig& cfg) {
  try {
    Palette pal = palette();
    ApiCatalog catalog = load_catalog(cfg.catalog_path);
    std::vector<MigrationMapping> patterns =
        load_patterns(cfg.patterns_path, catalog);
    std::vector<ReportRow> rows;
    bool attention = false;
    for (const auto& [path, rel] : discover_targets(cfg.target_root)) {
      std::string text = read_file(path);
      FileMigration fm =
          cfg.mode == Mode::Interactive
              ? migrate_file(text, patterns, catalog,
                             make_console_selector(std::cin, std::cout, rel))
              : migrate_file(text, patterns, catalog);
      for (const MigrationOutcome& o : fm.outcomes) {
        print_outcome(rel, o, pal);
        if (o.verdict != Verdict::Applied) attention = true;
      }
      std::vector<ReportRow> fr = rows_for_file(rel, fm.outcomes);
      std::move(fr.begin(), fr.end(), std::back_inserter(rows));
      if (fm.migrated == fm.original) continue;
      if (cfg.mode == Mode::DryRun) {
        print_diff(unified_diff("a/" + rel, "b/" + rel, fm.original, fm.migrated),
                   pal);
      } else {
        write_file_atomic(path, fm.migrated);
        std::cout << "rewrote " << rel << "\n";
      }
    }
    sort_rows(rows);
    if (!cfg.output_path.empty()) {
      write_file_atomic(cfg.output_path, serialize_report(rows));
    }
    std::cout << render_summary(summarize_rows(rows));
    return attention ? 1 : 0;
  } catch (const WriteFailure& e) {
    complain(e);
    return 4;
  } catch (const std::exception& e) {
    complain(e);
    return 2;
  }
}

int cmd_report(const RunConfig& cfg) {
  try {
    std::vector<ReportRow> rows = parse_report(read_file(cfg.output_path));
    std::cout << render_summary(summarize_rows(rows));
    return 0;
  } catch (const std::exception& e) {
    complain(e);
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  bool in_place = false;
  bool interactive = false;
  bool dry_run = false;

  CLI::App app{
      "learns API migration patterns from before/after Java examples and "
      "replays them on target sources"};
  app.require_subcommand(1);

  CLI::App* mine = app.add_subcommand("mine", "learn patterns from example sources");
  mine->add_option("--catalog", cfg.catalog_path, "deprecated-API catalog")
      ->required();
  mine->add_option("--examples", cfg.examples_root,
                   "directory of example sources (vNNN/ or before/+after/)")
      ->required();
  mine->add_option("--patterns", cfg.patterns_path, "pattern store to write")
      ->required();
  mine->add_option("--threshold", cfg.similarity_threshold,
                   "statement pairing similarity threshold")
      ->capture_default_str();

  auto add_target_options = [&](CLI::App* cmd) {
    cmd->add_option("--catalog", cfg.catalog_path, "deprecated-API catalog")
        ->required();
    cmd->add_option("--patterns", cfg.patterns_path, "pattern store to read")
        ->required();
    cmd->add_option("--target", cfg.target_root, "Java file or directory")
        ->required();
    cmd->add_option("--report", cfg.output_path, "write JSON-lines report here");
  };

  CLI::App* scan = app.add_subcommand(
      "scan", "list migration outcomes without touching any file");
  add_target_options(scan);

  CLI::App* apply =
      app.add_subcommand("apply", "rewrite target sources using learned patterns");
  add_target_options(apply);
  CLI::Option* dry = apply->add_flag("--dry-run", dry_run,
                                     "print diffs instead of writing (default)");
  CLI::Option* inp =
      apply->add_flag("--in-place", in_place, "rewrite files on disk");
  CLI::Option* inter = apply->add_flag("--interactive", interactive,
                                       "choose a rewrite per call site");
  dry->excludes(inp);
  dry->excludes(inter);
  inp->excludes(inter);

  CLI::App* report =
      app.add_subcommand("report", "summarize a previously written report");
  report->add_option("--report", cfg.output_path, "JSON-lines report to read")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (in_place) cfg.mode = Mode::InPlace;
  if (interactive) cfg.mode = Mode::Interactive;

  if (mine->parsed()) return cmd_mine(cfg);
  if (scan->parsed()) return cmd_scan(cfg);
  if (apply->parsed()) return cmd_apply(cfg);
  if (report->parsed()) return cmd_report(cfg);
  return 0;
}

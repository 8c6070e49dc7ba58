#include "a4/report.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace a4 {

using nlohmann::json;

std::vector<ReportRow> rows_for_file(
    const std::string& file, const std::vector<MigrationOutcome>& outcomes) {
  std::vector<ReportRow> rows;
  rows.reserve(outcomes.size());
  for (const MigrationOutcome& o : outcomes) {
    ReportRow r;
    r.file = file;
    r.offset = o.offset;
    r.api = o.api_key;
    r.pattern_id = o.pattern_id;
    r.outcome = verdict_name(o.verdict);
    r.reason = o.reason;
    r.tokens_changed = o.tokens_changed;
    rows.push_back(std::move(r));
  }
  return rows;
}

void sort_rows(std::vector<ReportRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ReportRow& a, const ReportRow& b) {
                     if (a.file != b.file) return a.file < b.file;
                     if (a.offset != b.offset) return a.offset < b.offset;
                     return a.pattern_id < b.pattern_id;
                   });
}

std::string serialize_report(const std::vector<ReportRow>& rows) {
  std::string out;
  for (const ReportRow& r : rows) {
    json j;
    j["file"] = r.file;
    j["offset"] = r.offset;
    j["api"] = r.api;
    j["patternId"] = r.pattern_id;
    j["outcome"] = r.outcome;
    j["reason"] = r.reason;
    j["tokensChanged"] = r.tokens_changed;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<ReportRow> parse_report(const std::string& text) {
  std::vector<ReportRow> rows;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw MalformedReportError(where + e.what());
    }
    if (!j.is_object()) {
      throw MalformedReportError(where + "row must be an object");
    }
    auto require = [&](const char* key, json::value_t type) -> const json& {
      auto it = j.find(key);
      if (it == j.end() || it->type() != type) {
        throw MalformedReportError(where + "missing or mistyped " + key);
      }
      return *it;
    };
    ReportRow r;
    r.file = require("file", json::value_t::string);
    auto off = j.find("offset");
    if (off == j.end() || !off->is_number_unsigned()) {
      throw MalformedReportError(where + "missing or mistyped offset");
    }
    r.offset = off->get<std::size_t>();
    r.api = require("api", json::value_t::string);
    r.pattern_id = require("patternId", json::value_t::string);
    r.outcome = require("outcome", json::value_t::string);
    r.reason = require("reason", json::value_t::string);
    auto tok = j.find("tokensChanged");
    if (tok == j.end() || !tok->is_number_integer()) {
      throw MalformedReportError(where + "missing or mistyped tokensChanged");
    }
    r.tokens_changed = tok->get<int>();
    if (j.size() != 7) {
      throw MalformedReportError(where + "unexpected extra keys");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

MigrationSummary summarize_rows(const std::vector<ReportRow>& rows) {
  MigrationSummary s;
  for (const ReportRow& r : rows) {
    if (r.outcome == "Applied") {
      ++s.faultless;
      s.tokens_changed.push_back(r.tokens_changed);
    } else if (r.outcome == "Guidance") {
      ++s.unmatched_guidance;
    } else if (r.outcome == "Unsupported") {
      ++s.unsupported;
    } else {
      throw MalformedReportError("unknown outcome: " + r.outcome);
    }
  }
  return s;
}

std::string render_summary(const MigrationSummary& s) {
  static const char* kLabels[] = {
      "Faultless migration",
      "Migrated with minor modification",
      "Unmatched guidance",
      "False positive",
      "Example was not a migration",
      "Unsupported cases",
  };
  std::size_t width = 0;
  for (const char* l : kLabels) width = std::max(width, std::string(l).size());
  std::string out;
  const std::vector<int> counts = s.rows();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    std::string label = kLabels[i];
    label.resize(width + 2, ' ');
    out += label + std::to_string(counts[i]) + "\n";
  }
  if (s.tokens_changed.empty()) {
    out += "tokens changed: none\n";
  } else {
    const auto [mn, mx] =
        std::minmax_element(s.tokens_changed.begin(), s.tokens_changed.end());
    const double avg =
        std::accumulate(s.tokens_changed.begin(), s.tokens_changed.end(), 0.0) /
        static_cast<double>(s.tokens_changed.size());
    char buf[96];
    std::snprintf(buf, sizeof(buf), "tokens changed: min=%d avg=%.2f max=%d\n",
                  *mn, avg, *mx);
    out += buf;
  }
  return out;
}

}  // namespace a4

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "a4/migrator.hpp"

namespace a4 {

// One line of the machine-readable migration report.
struct ReportRow {
  std::string file;
  std::size_t offset = 0;
  std::string api;
  std::string pattern_id;
  std::string outcome;  // Applied | Guidance | Unsupported
  std::string reason;
  int tokens_changed = 0;

  bool operator==(const ReportRow&) const = default;
};

class MalformedReportError : public std::runtime_error {
 public:
  explicit MalformedReportError(const std::string& why)
      : std::runtime_error("malformed report: " + why) {}
};

std::vector<ReportRow> rows_for_file(
    const std::string& file, const std::vector<MigrationOutcome>& outcomes);

// Stable report order: (file, offset, patternId).
void sort_rows(std::vector<ReportRow>& rows);

// JSON lines, one object per row; parse_report rejects anything that is
// not exactly that shape.
std::string serialize_report(const std::vector<ReportRow>& rows);
std::vector<ReportRow> parse_report(const std::string& text);

MigrationSummary summarize_rows(const std::vector<ReportRow>& rows);

// Plain-text outcome-category table plus the token-change distribution.
std::string render_summary(const MigrationSummary& s);

}  // namespace a4

#include "a4/diff.hpp"

#include <algorithm>
#include <sstream>

#include "a4/token.hpp"

namespace a4 {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

}  // namespace

// Common prefix and suffix are trimmed first so the quadratic table stays
// small; ties prefer emitting deletions before insertions.
std::vector<SeqOp> lcs_align(const std::vector<std::string>& a,
                             const std::vector<std::string>& b) {
  std::size_t prefix = 0;
  while (prefix < a.size() && prefix < b.size() && a[prefix] == b[prefix]) {
    ++prefix;
  }
  std::size_t suffix = 0;
  while (suffix < a.size() - prefix && suffix < b.size() - prefix &&
         a[a.size() - 1 - suffix] == b[b.size() - 1 - suffix]) {
    ++suffix;
  }
  std::size_t n = a.size() - prefix - suffix;
  std::size_t m = b.size() - prefix - suffix;

  std::vector<std::vector<int>> len(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      if (a[prefix + i] == b[prefix + j]) {
        len[i][j] = len[i + 1][j + 1] + 1;
      } else {
        len[i][j] = std::max(len[i + 1][j], len[i][j + 1]);
      }
    }
  }

  std::vector<SeqOp> script;
  for (std::size_t i = 0; i < prefix; ++i) script.push_back({' ', i, i});
  std::size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (a[prefix + i] == b[prefix + j]) {
      script.push_back({' ', prefix + i, prefix + j});
      ++i;
      ++j;
    } else if (len[i + 1][j] >= len[i][j + 1]) {
      script.push_back({'-', prefix + i, SeqOp::npos});
      ++i;
    } else {
      script.push_back({'+', SeqOp::npos, prefix + j});
      ++j;
    }
  }
  while (i < n) {
    script.push_back({'-', prefix + i, SeqOp::npos});
    ++i;
  }
  while (j < m) {
    script.push_back({'+', SeqOp::npos, prefix + j});
    ++j;
  }
  for (std::size_t k = 0; k < suffix; ++k) {
    script.push_back({' ', a.size() - suffix + k, b.size() - suffix + k});
  }
  return script;
}

std::vector<LineOp> diff_lines(const std::string& before,
                               const std::string& after) {
  std::vector<std::string> a = split_lines(before);
  std::vector<std::string> b = split_lines(after);
  std::vector<LineOp> ops;
  for (const SeqOp& op : lcs_align(a, b)) {
    ops.push_back({op.tag, op.tag == '+' ? b[op.b_index] : a[op.a_index]});
  }
  return ops;
}

std::string unified_diff(const std::string& before_path,
                         const std::string& after_path,
                         const std::string& before, const std::string& after,
                         int context) {
  if (before == after) return "";
  std::vector<LineOp> ops = diff_lines(before, after);

  bool before_ends_nl = before.empty() || before.back() == '\n';
  bool after_ends_nl = after.empty() || after.back() == '\n';

  // group changed op indices into hunks, merging when the gap between
  // changes is at most twice the context width
  struct Hunk {
    std::size_t first_op, last_op;  // inclusive op range
  };
  std::vector<Hunk> hunks;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    if (ops[k].tag == ' ') continue;
    if (!hunks.empty()) {
      std::size_t gap = k - hunks.back().last_op - 1;
      if (gap <= static_cast<std::size_t>(2 * context)) {
        hunks.back().last_op = k;
        continue;
      }
    }
    hunks.push_back({k, k});
  }

  std::ostringstream out;
  out << "--- " << before_path << "\n+++ " << after_path << "\n";

  std::size_t a_seen = 0, b_seen = 0, op_cursor = 0;
  std::size_t a_total = split_lines(before).size();
  std::size_t b_total = split_lines(after).size();

  for (const Hunk& h : hunks) {
    std::size_t start_op =
        h.first_op >= static_cast<std::size_t>(context) ? h.first_op - context : 0;
    std::size_t end_op =
        std::min(ops.size() - 1, h.last_op + static_cast<std::size_t>(context));

    // advance line counters to the start of the hunk
    for (; op_cursor < start_op; ++op_cursor) {
      if (ops[op_cursor].tag != '+') ++a_seen;
      if (ops[op_cursor].tag != '-') ++b_seen;
    }

    std::size_t a_count = 0, b_count = 0;
    for (std::size_t k = start_op; k <= end_op; ++k) {
      if (ops[k].tag != '+') ++a_count;
      if (ops[k].tag != '-') ++b_count;
    }
    std::size_t a_start = a_count == 0 ? a_seen : a_seen + 1;
    std::size_t b_start = b_count == 0 ? b_seen : b_seen + 1;
    out << "@@ -" << a_start << "," << a_count << " +" << b_start << ","
        << b_count << " @@\n";

    for (std::size_t k = start_op; k <= end_op; ++k) {
      out << ops[k].tag << ops[k].line << "\n";
      if (ops[k].tag != '+') {
        ++a_seen;
        if (a_seen == a_total && !before_ends_nl) {
          out << "\\ No newline at end of file\n";
        }
      }
      if (ops[k].tag != '-') {
        ++b_seen;
        if (b_seen == b_total && !after_ends_nl) {
          out << "\\ No newline at end of file\n";
        }
      }
    }
    op_cursor = end_op + 1;
  }
  return out.str();
}

int token_modification_count(const std::string& before,
                             const std::string& after) {
  if (before == after) return 0;
  std::vector<std::string> a = significant_texts(before);
  std::vector<std::string> b = significant_texts(after);
  auto script = lcs_align(a, b);
  int total = 0;
  std::size_t k = 0;
  while (k < script.size()) {
    if (script[k].tag == ' ') {
      ++k;
      continue;
    }
    int dels = 0, ins = 0;
    while (k < script.size() && script[k].tag != ' ') {
      if (script[k].tag == '-') ++dels;
      if (script[k].tag == '+') ++ins;
      ++k;
    }
    total += std::max(dels, ins);
  }
  return total;
}

}  // namespace a4

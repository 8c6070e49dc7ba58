#pragma once

#include <string>
#include <vector>

namespace a4 {

struct LineOp {
  char tag;  // ' ' keep, '-' delete, '+' insert
  std::string line;
};

// Index-level LCS alignment over string sequences: ' ' ops carry both
// indices, '-' only a_index, '+' only b_index (the missing side is npos).
struct SeqOp {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  char tag;
  std::size_t a_index = npos;
  std::size_t b_index = npos;
};
std::vector<SeqOp> lcs_align(const std::vector<std::string>& a,
                             const std::vector<std::string>& b);

// Longest-common-subsequence line diff; keeps are shared lines.
std::vector<LineOp> diff_lines(const std::string& before, const std::string& after);

// Standard unified format with @@ hunks and `context` lines of context.
// Empty result when the inputs are byte-identical.
std::string unified_diff(const std::string& before_path,
                         const std::string& after_path,
                         const std::string& before, const std::string& after,
                         int context = 3);

// Token-level effort metric: significant tokens of both texts are aligned
// by LCS; each contiguous changed region contributes
// max(deleted, inserted). A rename counts 1, an inserted ", null" counts 2.
int token_modification_count(const std::string& before, const std::string& after);

}  // namespace a4

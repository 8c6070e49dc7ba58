#include "a4/render.hpp"

#include <algorithm>

namespace a4 {

OverlappingEditsError::OverlappingEditsError(const SpanEdit& a, const SpanEdit& b)
    : std::runtime_error("overlapping edits at [" + std::to_string(a.span.begin) +
                         ", " + std::to_string(a.span.end) + ") and [" +
                         std::to_string(b.span.begin) + ", " +
                         std::to_string(b.span.end) + ")"),
      first(a.span),
      second(b.span) {}

std::string apply_edits(const std::string& source, std::vector<SpanEdit> edits) {
  std::stable_sort(edits.begin(), edits.end(),
                   [](const SpanEdit& a, const SpanEdit& b) {
                     if (a.span.begin != b.span.begin)
                       return a.span.begin < b.span.begin;
                     return a.span.end < b.span.end;
                   });
  for (std::size_t i = 0; i + 1 < edits.size(); ++i) {
    const SpanEdit& a = edits[i];
    const SpanEdit& b = edits[i + 1];
    bool both_insertions_same_spot =
        a.span.empty() && b.span.empty() && a.span.begin == b.span.begin;
    if (both_insertions_same_spot || a.span.end > b.span.begin) {
      throw OverlappingEditsError(a, b);
    }
  }
  std::string out;
  out.reserve(source.size());
  std::size_t cursor = 0;
  for (const SpanEdit& e : edits) {
    if (e.span.end > source.size()) throw OverlappingEditsError(e, e);
    out.append(source, cursor, e.span.begin - cursor);
    out += e.text;
    cursor = e.span.end;
  }
  out.append(source, cursor, source.size() - cursor);
  return out;
}

}  // namespace a4

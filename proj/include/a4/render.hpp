#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "a4/span.hpp"

namespace a4 {

// A splice: bytes in `span` are replaced by `text`. Insertions use an empty
// span (begin == end) at the insertion offset.
struct SpanEdit {
  ByteSpan span;
  std::string text;
};

class OverlappingEditsError : public std::runtime_error {
 public:
  OverlappingEditsError(const SpanEdit& a, const SpanEdit& b);
  ByteSpan first;
  ByteSpan second;
};

// Applies edits to `source` and returns the rewritten text. Untouched bytes
// pass through verbatim. Throws OverlappingEditsError when two edits cover
// the same byte; touching ranges (one ends where the next begins) are fine,
// as are multiple insertions at distinct offsets.
std::string apply_edits(const std::string& source, std::vector<SpanEdit> edits);

}  // namespace a4

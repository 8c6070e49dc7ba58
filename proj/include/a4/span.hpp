#pragma once

#include <cstddef>
#include <string>

namespace a4 {

// Half-open byte range [begin, end) into a source buffer.
struct ByteSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - begin; }
  bool empty() const { return begin == end; }
  bool contains(std::size_t offset) const { return offset >= begin && offset < end; }
  bool contains(const ByteSpan& other) const {
    return other.begin >= begin && other.end <= end;
  }
  bool overlaps(const ByteSpan& other) const {
    return begin < other.end && other.begin < end;
  }

  friend bool operator==(const ByteSpan& a, const ByteSpan& b) {
    return a.begin == b.begin && a.end == b.end;
  }
};

struct Diagnostic {
  ByteSpan span;
  std::string message;
};

}  // namespace a4

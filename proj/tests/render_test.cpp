#include "a4/render.hpp"

#include <gtest/gtest.h>

namespace a4 {
namespace {

TEST(Render, SingleReplacement) {
  std::string src = "int color = res.getColor(id);";
  auto out = apply_edits(src, {{{16, 24}, "getTint"}});
  EXPECT_EQ(out, "int color = res.getTint(id);");
}

TEST(Render, InsertionAtOffset) {
  std::string src = "f(a);";
  auto out = apply_edits(src, {{{3, 3}, ", null"}});
  EXPECT_EQ(out, "f(a, null);");
}

TEST(Render, DeletionLeavesRestIntact) {
  std::string src = "f(a, b);";
  auto out = apply_edits(src, {{{3, 6}, ""}});
  EXPECT_EQ(out, "f(a);");
}

TEST(Render, MultipleDisjointEditsApplyInOnePass) {
  std::string src = "aaa bbb ccc";
  auto out = apply_edits(src, {{{8, 11}, "CCC"}, {{0, 3}, "AAA"}});
  EXPECT_EQ(out, "AAA bbb CCC");
}

TEST(Render, TouchingEditsAreAllowed) {
  std::string src = "abcdef";
  auto out = apply_edits(src, {{{0, 3}, "X"}, {{3, 6}, "Y"}});
  EXPECT_EQ(out, "XY");
}

TEST(Render, UntouchedBytesSurviveVerbatim) {
  std::string src = "keep\t\t  odd  spacing /*and comments*/ intact";
  auto out = apply_edits(src, {{{0, 4}, "hold"}});
  EXPECT_EQ(out, "hold\t\t  odd  spacing /*and comments*/ intact");
}

TEST(Render, OverlapThrows) {
  std::string src = "abcdef";
  EXPECT_THROW(apply_edits(src, {{{0, 4}, "X"}, {{2, 6}, "Y"}}),
               OverlappingEditsError);
}

TEST(Render, InsertionInsideReplacedRangeThrows) {
  std::string src = "abcdef";
  EXPECT_THROW(apply_edits(src, {{{0, 4}, "X"}, {{2, 2}, "Y"}}),
               OverlappingEditsError);
}

TEST(Render, DuplicateInsertionPointThrows) {
  std::string src = "abc";
  EXPECT_THROW(apply_edits(src, {{{1, 1}, "X"}, {{1, 1}, "Y"}}),
               OverlappingEditsError);
}

TEST(Render, InsertionTouchingReplacementBoundaryIsAllowed) {
  std::string src = "abcdef";
  auto out = apply_edits(src, {{{2, 2}, "-"}, {{2, 4}, "CD"}});
  EXPECT_EQ(out, "ab-CDef");
}

TEST(Render, EmptyEditListIsIdentity) {
  std::string src = "unchanged";
  EXPECT_EQ(apply_edits(src, {}), src);
}

}  // namespace
}  // namespace a4

#include "histslice/line_diff.hpp"
#include "histslice/text.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace histslice;

TEST(SplitLines, RecordsMissingFinalNewline) {
  auto t = split_lines("a\nb");
  EXPECT_EQ(t.lines, (std::vector<std::string>{"a", "b"}));
  EXPECT_TRUE(t.missing_newline);
  EXPECT_EQ(join_lines(t), "a\nb");
}

TEST(SplitLines, NormalizesCarriageReturns) {
  auto t = split_lines("a\r\nb\rc\n");
  EXPECT_EQ(t.lines, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_FALSE(t.missing_newline);
}

TEST(SplitLines, EmptyTextHasNoLines) {
  auto t = split_lines("");
  EXPECT_TRUE(t.lines.empty());
  EXPECT_FALSE(t.missing_newline);
  EXPECT_EQ(join_lines(t), "");
}

TEST(LooksBinary, NulByteMarksBinary) {
  EXPECT_TRUE(looks_binary(std::string("ab\0cd", 5)));
  EXPECT_FALSE(looks_binary("plain text\n"));
}

TEST(DiffLines, PureInsertionUsesInsertionPoint) {
  auto hunks = diff_lines({"a", "b"}, {"a", "x", "b"});
  ASSERT_EQ(hunks.size(), 1u);
  EXPECT_EQ(hunks[0].old_start, 2u);
  EXPECT_EQ(hunks[0].old_len, 0u);
  EXPECT_EQ(hunks[0].new_start, 2u);
  EXPECT_EQ(hunks[0].new_lines, (std::vector<std::string>{"x"}));
}

TEST(DiffLines, AppendAtEndPointsPastLastLine) {
  auto hunks = diff_lines({"a"}, {"a", "b"});
  ASSERT_EQ(hunks.size(), 1u);
  EXPECT_EQ(hunks[0].old_start, 2u);
  EXPECT_EQ(hunks[0].old_len, 0u);
}

TEST(DiffLines, IdenticalInputsHaveNoHunks) {
  EXPECT_TRUE(diff_lines({"a", "b"}, {"a", "b"}).empty());
}

TEST(DiffLines, ReplacementKeepsBothSides) {
  auto hunks = diff_lines({"a", "b", "c"}, {"a", "B", "c"});
  ASSERT_EQ(hunks.size(), 1u);
  EXPECT_EQ(hunks[0].old_lines, (std::vector<std::string>{"b"}));
  EXPECT_EQ(hunks[0].new_lines, (std::vector<std::string>{"B"}));
}

TEST(ApplyHunks, RejectsMismatchedPreImage) {
  auto hunks = diff_lines({"a", "b"}, {"a", "c"});
  EXPECT_THROW(apply_hunks({"a", "z"}, hunks), std::invalid_argument);
}

// Hunks must replay exactly, be sorted and disjoint, and keep the common
// lines as long as an LCS.
TEST(DiffLines, RandomPairsReplayAndAreMinimal) {
  std::mt19937 rng(11);
  auto random_lines = [&] {
    std::vector<std::string> v(std::uniform_int_distribution<int>(0, 30)(rng));
    for (auto &l : v)
      l = std::string(1, char('a' + rng() % 4));
    return v;
  };
  for (int i = 0; i < 500; ++i) {
    auto a = random_lines(), b = random_lines();
    auto hunks = diff_lines(a, b);
    ASSERT_EQ(apply_hunks(a, hunks), b);
    std::size_t removed = 0;
    for (std::size_t k = 0; k < hunks.size(); ++k) {
      removed += hunks[k].old_len;
      if (k > 0) {
        // Separated by at least one common line.
        EXPECT_LT(hunks[k - 1].old_start + hunks[k - 1].old_len, hunks[k].old_start);
      }
    }
    // Reference LCS length by dynamic programming.
    std::vector<std::vector<int>> dp(a.size() + 1, std::vector<int>(b.size() + 1));
    for (std::size_t x = a.size(); x-- > 0;)
      for (std::size_t y = b.size(); y-- > 0;)
        dp[x][y] = a[x] == b[y] ? dp[x + 1][y + 1] + 1
                                : std::max(dp[x + 1][y], dp[x][y + 1]);
    EXPECT_EQ(a.size() - removed, std::size_t(dp[0][0]));
  }
}

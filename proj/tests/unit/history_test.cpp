#include "builders.hpp"

#include "histslice/error.hpp"
#include "histslice/history.hpp"

#include <gtest/gtest.h>

#include <fstream>

using namespace histslice;
namespace fx = histslice::testing;
using fx::HistoryBuilder;
using Files = std::map<std::string, std::string>;

namespace {

History two_commits() {
  HistoryBuilder b(Files{{"a.txt", "one\ntwo\n"}});
  b.commit("c1", "edit", {{"a.txt", "one\n2\n"}, {"b.txt", "new\n"}});
  b.commit("c2", "remove", {{"a.txt", std::nullopt}});
  return b.build();
}

} // namespace

TEST(Fixture, ParsesKindsAndHunks) {
  History h = two_commits();
  ASSERT_EQ(h.size(), 2u);
  const Commit &c1 = h.commit(CommitId{"c1"});
  ASSERT_EQ(c1.file_changes.size(), 2u);
  EXPECT_EQ(c1.file_changes[0].kind, ChangeKind::modified);
  EXPECT_EQ(c1.file_changes[1].kind, ChangeKind::added);
  EXPECT_EQ(c1.file_changes[0].hunks.size(), 1u);
  EXPECT_EQ(h.commit(CommitId{"c2"}).file_changes[0].kind, ChangeKind::deleted);
  EXPECT_EQ(*h.commit(CommitId{"c2"}).parent, CommitId{"c1"});
}

TEST(Fixture, RoundTripsThroughWriter) {
  History h = two_commits();
  EXPECT_EQ(parse_fixture(write_fixture(h)), h);
}

TEST(Fixture, BaseSnapshotIsThePreImage) {
  auto base = two_commits().base_snapshot();
  ASSERT_EQ(base.size(), 1u);
  EXPECT_EQ(base.at(FilePath{"a.txt"}), "one\ntwo\n");
}

TEST(Fixture, ChangeElementsSkipUnchangedFiles) {
  HistoryBuilder b(Files{{"a.txt", "x\n"}});
  b.commit("c1", "noop", {{"a.txt", "x\n"}});
  b.commit("c2", "edit", {{"a.txt", "y\n"}});
  auto elements = change_elements(b.build());
  ASSERT_EQ(elements.size(), 1u);
  EXPECT_EQ(elements[0].commit.value, "c2");
}

TEST(Fixture, BinaryFilesAreNotElements) {
  HistoryBuilder b;
  b.commit("c1", "bin", {{"img.bin", std::string("\0\1\2", 3)}, {"a.txt", "a\n"}});
  History h = b.build();
  EXPECT_TRUE(h.first().file_changes[1].binary ||
              h.first().file_changes[0].binary);
  EXPECT_EQ(change_elements(h).size(), 1u);
}

TEST(Fixture, RejectsMalformedDocuments) {
  EXPECT_THROW(parse_fixture("not json"), MalformedFixture);
  EXPECT_THROW(parse_fixture(R"({"commits": 3})"), MalformedFixture);
  EXPECT_THROW(parse_fixture(R"({"commits": [{"id": "a", "message": "m",
      "timestamp": 1, "files": [{"path": "../x", "before": null,
      "after": "x"}]}]})"),
               MalformedFixture);
  EXPECT_THROW(parse_fixture(R"({"commits": [
      {"id": "a", "message": "m", "timestamp": 1, "files": []},
      {"id": "a", "message": "m", "timestamp": 2, "files": []}]})"),
               InputError);
}

TEST(Fixture, RejectsInconsistentChains) {
  // The second commit's before text does not match what the first wrote.
  EXPECT_THROW(parse_fixture(R"({"commits": [
      {"id": "a", "message": "m", "timestamp": 1,
       "files": [{"path": "f", "before": null, "after": "x\n"}]},
      {"id": "b", "message": "m", "timestamp": 2,
       "files": [{"path": "f", "before": "y\n", "after": "z\n"}]}]})"),
               MalformedFixture);
}

TEST(Fixture, MissingFileIsAnInputError) {
  EXPECT_THROW(load_fixture_history("/nonexistent/history.json"), InputError);
}

TEST(Paths, Normalization) {
  EXPECT_TRUE(is_normalized_path("src/a.java"));
  EXPECT_FALSE(is_normalized_path("/abs"));
  EXPECT_FALSE(is_normalized_path("a/../b"));
  EXPECT_FALSE(is_normalized_path("./a"));
  EXPECT_FALSE(is_normalized_path(""));
}

// Every hunk of every file change, replayed on the before text, must give the
// after text.
TEST(Fixture, HunksReplayEveryChange) {
  History h = fx::final_sweep_scenario().builder.build();
  for (const auto &c : h.commits())
    for (const auto &fc : c.file_changes) {
      std::vector<std::string> before =
          fc.before ? fc.before->lines : std::vector<std::string>{};
      std::vector<std::string> after =
          fc.after ? fc.after->lines : std::vector<std::string>{};
      EXPECT_EQ(apply_hunks(before, fc.hunks), after) << c.id.value;
    }
}

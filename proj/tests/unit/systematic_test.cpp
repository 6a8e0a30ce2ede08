#include "builders.hpp"

#include "histslice/systematic.hpp"

#include <gtest/gtest.h>

using namespace histslice;
namespace fx = histslice::testing;

namespace {

AbstractEditScript script(const std::string &before, const std::string &after) {
  return {EditType::update, before, after, NodeKind::Literal};
}

MemberKey method(const std::string &file, const std::string &sig) {
  return {FilePath{file}, MemberKind::method, sig};
}

CommitEditSummary two_file_summary() {
  CommitEditSummary s;
  s.commit = CommitId{"c"};
  s.file_count = 2;
  s.per_member[method("A.java", "A.m()")] = {script("1", "2")};
  s.per_member[method("B.java", "B.m()")] = {script("1", "2")};
  return s;
}

} // namespace

TEST(Classify, UniformMembersAreSystematicAndSplittable) {
  auto v = classify(two_file_summary());
  EXPECT_EQ(v.kind, SystematicKind::ast_systematic);
  EXPECT_TRUE(v.splittable);
  ASSERT_TRUE(v.uniform_script_set);
  EXPECT_EQ(*v.uniform_script_set, (ScriptSet{script("1", "2")}));
  EXPECT_FALSE(v.witness);
}

TEST(Classify, DifferingMemberGivesWitness) {
  auto s = two_file_summary();
  s.per_member[method("B.java", "B.n()")] = {script("1", "3")};
  auto v = classify(s);
  EXPECT_EQ(v.kind, SystematicKind::non_systematic);
  EXPECT_FALSE(v.splittable);
  ASSERT_TRUE(v.witness);
  EXPECT_NE(s.per_member.at(v.witness->first), s.per_member.at(v.witness->second));
}

TEST(Classify, NonMemberChurnTakesPartInTheComparison) {
  auto s = two_file_summary();
  s.non_member_scripts = {script("import a;", "import b;")};
  auto v = classify(s);
  EXPECT_EQ(v.kind, SystematicKind::non_systematic);
  ASSERT_TRUE(v.witness);
  EXPECT_TRUE(v.witness->first == non_member_key() ||
              v.witness->second == non_member_key());
}

TEST(Classify, WholeFileChangesAreNeverSystematic) {
  auto s = two_file_summary();
  s.whole_file_changes = {FilePath{"C.java"}};
  EXPECT_EQ(classify(s).kind, SystematicKind::non_systematic);
  s = two_file_summary();
  s.unparseable_files = {FilePath{"A.java"}};
  EXPECT_EQ(classify(s).kind, SystematicKind::non_systematic);
}

TEST(Classify, SingleFileCommitIsNotSplittable) {
  auto s = two_file_summary();
  s.file_count = 1;
  auto v = classify(s);
  EXPECT_EQ(v.kind, SystematicKind::ast_systematic);
  EXPECT_FALSE(v.splittable);
}

TEST(Classify, LayoutOnly) {
  CommitEditSummary s;
  s.file_count = 3;
  s.syntax_identical = true;
  auto v = classify(s);
  EXPECT_EQ(v.kind, SystematicKind::whitespace_or_comment_only);
  EXPECT_TRUE(v.splittable);
}

TEST(Classify, EmptySummaryIsNotSystematic) {
  CommitEditSummary s;
  s.file_count = 2;
  EXPECT_EQ(classify(s).kind, SystematicKind::non_systematic);
}

TEST(DetectAll, MatchesHandLabelledCorpus) {
  auto corpus = fx::detector_corpus();
  auto verdicts = detect_all(corpus.builder.build());
  ASSERT_EQ(verdicts.size(), corpus.kind.size());
  for (const auto &[id, kind] : corpus.kind) {
    const auto &v = verdicts.at(CommitId{id});
    EXPECT_EQ(v.kind, kind) << id << ": " << v.reason;
    EXPECT_EQ(v.splittable, corpus.splittable.at(id)) << id;
    EXPECT_FALSE(v.reason.empty());
  }
}

// Adding a member whose edits differ from the rest can only turn a verdict
// towards non-systematic, never the other way.
TEST(DetectAll, ExtraDistinctEditIsConservative) {
  auto corpus = fx::detector_corpus();
  History h = corpus.builder.build();
  for (const auto &c : h.commits()) {
    auto s = summarize_commit(c);
    if (s.per_member.empty() && s.non_member_scripts.empty())
      continue; // the extra member would be the only one
    auto before = classify(s);
    s.per_member[method("Z.java", "Z.extra()")] = {script("odd", "edit")};
    s.syntax_identical = false;
    auto after = classify(s);
    EXPECT_EQ(after.kind, SystematicKind::non_systematic) << c.id.value;
    EXPECT_FALSE(after.splittable);
    if (before.kind == SystematicKind::non_systematic) {
      EXPECT_EQ(after.kind, before.kind);
    }
  }
}

TEST(DetectAll, SweepScenarioMarksOnlyTheSweep) {
  auto sc = fx::final_sweep_scenario();
  auto verdicts = detect_all(sc.builder.build());
  for (const auto &[id, v] : verdicts)
    EXPECT_EQ(v.splittable, id.value == sc.sweep_id) << id.value;
  EXPECT_EQ(verdicts.at(CommitId{sc.sweep_id}).kind, SystematicKind::ast_systematic);
}

TEST(SystematicKind, Names) {
  EXPECT_EQ(to_string(SystematicKind::ast_systematic), "ast_systematic");
  EXPECT_EQ(to_string(SystematicKind::whitespace_or_comment_only),
            "whitespace_or_comment_only");
  EXPECT_EQ(to_string(SystematicKind::non_systematic), "non_systematic");
}

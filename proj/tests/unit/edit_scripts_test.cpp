#include "builders.hpp"

#include "histslice/edit_scripts.hpp"

#include <gtest/gtest.h>

using namespace histslice;
namespace fx = histslice::testing;

namespace {

std::map<MemberKey, ScriptSet> scripts_for(const std::string &before,
                                           const std::string &after) {
  SyntaxTree a = parse(before), b = parse(after);
  return abstract_scripts(tree_diff(a, b), a, b, FilePath{"X.java"});
}

std::vector<std::string> keys(const std::map<MemberKey, ScriptSet> &m) {
  std::vector<std::string> out;
  for (const auto &[k, _] : m)
    out.push_back(to_string(k));
  return out;
}

} // namespace

TEST(AbstractScripts, FinalOnLocalAndParameterAbstractToOneScript) {
  auto m = scripts_for("class A { void m(int a) { int b = a; } }",
                       "class A { void m(final int a) { final int b = a; } }");
  ASSERT_EQ(m.size(), 1u);
  const auto &[key, set] = *m.begin();
  EXPECT_EQ(key.kind, MemberKind::method);
  EXPECT_EQ(key.signature, "A.m(int)");
  ASSERT_EQ(set.size(), 1u);
  EXPECT_EQ(set.begin()->change_type, EditType::insert);
  EXPECT_EQ(set.begin()->after_fragment, "final");
}

TEST(AbstractScripts, FragmentsKeepArguments) {
  auto m = scripts_for(
      "class A { void m() { foo(1); } void n() { foo(1); } void o() { foo(2); } }",
      "class A { void m() { bar(1); } void n() { bar(1); } void o() { bar(2); } }");
  ASSERT_EQ(m.size(), 3u);
  const auto &sets = m;
  auto it = sets.begin();
  const ScriptSet &m_set = it++->second;
  const ScriptSet &n_set = it++->second;
  const ScriptSet &o_set = it->second;
  EXPECT_EQ(m_set, n_set);
  EXPECT_NE(m_set, o_set);
  EXPECT_EQ(to_string(*m_set.begin()), "update MethodCall \"foo(1)\" -> \"bar(1)\"");
}

TEST(AbstractScripts, MemberKeysNameEveryDeclarationKind) {
  auto m = scripts_for(
      "package p; class A { int f = 1, g; A(int x) { a(); } static { x(); } { y(); }"
      " class In { void z(String[] s) { } } enum E { K(1) } }",
      "package q; class A { int f = 2, g; A(int x) { b(); } static { x2(); } { y2(); }"
      " class In { void z(String[] s) { w(); } } enum E { K(2) } }");
  EXPECT_EQ(keys(m), (std::vector<std::string>{
                         "X.java#method:A.In.z(String[])",
                         "X.java#constructor:A.<init>(int)",
                         "X.java#field:A.E.K",
                         "X.java#field:A.f,g",
                         "X.java#initializer:A.<clinit>#0",
                         "X.java#initializer:A.<instance>#0",
                         "X.java#non-member",
                     }));
}

TEST(AbstractScripts, AnonymousClassMembersNestUnderTheirMethod) {
  auto m = scripts_for(
      "class A { void m() { Runnable r = new Runnable() { public void run() { a(); } }; } }",
      "class A { void m() { Runnable r = new Runnable() { public void run() { b(); } }; } }");
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.begin()->first.signature, "A.m().new Runnable#0.run()");
}

TEST(AbstractScripts, DeletesAreKeyedInTheBeforeTree) {
  auto m = scripts_for("class A { void gone() { x(); } void kept() {} }",
                       "class A { void kept() {} }");
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.begin()->first.signature, "A.gone()");
  for (const auto &s : m.begin()->second)
    EXPECT_EQ(s.change_type, EditType::remove);
}

TEST(AbstractScripts, SignaturesSurviveReformatting) {
  SyntaxTree a = parse("class A { void m(int a, String b) { } }");
  SyntaxTree b = parse("class A {\n  void m(int a,\n      String b)\n  {\n  }\n}\n");
  NodeId method_a = kNoNode, method_b = kNoNode;
  for (NodeId id : a.preorder())
    if (a.node(id).kind == NodeKind::MethodDecl)
      method_a = id;
  for (NodeId id : b.preorder())
    if (b.node(id).kind == NodeKind::MethodDecl)
      method_b = id;
  EXPECT_EQ(enclosing_member(a, method_a, FilePath{"X.java"}),
            enclosing_member(b, method_b, FilePath{"X.java"}));
}

TEST(SummarizeCommit, WholeFileAndUnparseableChangesAreRecorded) {
  fx::HistoryBuilder b(std::map<std::string, std::string>{
      {"A.java", "class A { int x; }"}, {"B.java", "class B {}"}, {"r.txt", "a\n"}});
  b.commit("c1", "mixed",
           {{"A.java", "class A { int x; int y; }"},
            {"B.java", "class B { broken"},
            {"C.java", "class C {}"},
            {"r.txt", "b\n"}});
  CommitEditSummary s = summarize_commit(b.build(), CommitId{"c1"});
  EXPECT_EQ(s.file_count, 4u);
  EXPECT_EQ(s.unparseable_files, (std::vector<FilePath>{{"B.java"}}));
  EXPECT_EQ(s.whole_file_changes, (std::vector<FilePath>{{"C.java"}, {"r.txt"}}));
  ASSERT_EQ(s.per_member.size(), 1u);
  EXPECT_EQ(to_string(s.per_member.begin()->first), "A.java#field:A.y");
  EXPECT_FALSE(s.syntax_identical);
}

TEST(SummarizeCommit, LayoutOnlyChangeIsSyntaxIdentical) {
  fx::HistoryBuilder b(std::map<std::string, std::string>{{"A.java", "class A { int x; }\n"}});
  b.commit("c1", "fmt", {{"A.java", "// header\nclass A {\n    int x;\n}\n"}});
  CommitEditSummary s = summarize_commit(b.build(), CommitId{"c1"});
  EXPECT_TRUE(s.syntax_identical);
  EXPECT_TRUE(s.per_member.empty());
}

TEST(SourceFiles, OnlyJavaIsParsed) {
  EXPECT_TRUE(is_source_file(FilePath{"a/B.java"}));
  EXPECT_FALSE(is_source_file(FilePath{"a/B.kt"}));
  EXPECT_FALSE(is_source_file(FilePath{"java"}));
}

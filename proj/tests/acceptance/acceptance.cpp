// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include "builders.hpp"
#include "oracles.hpp"
#include "process.hpp"
#include "random_gen.hpp"

#include "histslice/dependency_graph.hpp"
#include "histslice/error.hpp"
#include "histslice/patch.hpp"
#include "histslice/pipeline.hpp"
#include "histslice/report.hpp"
#include "histslice/slicer.hpp"
#include "histslice/systematic.hpp"
#include "histslice/tree_diff.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace histslice;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct NamedFixture {
  std::string name;
  testing::HistoryBuilder builder;
};

std::vector<NamedFixture> curated_fixtures() {
  return {{"final-sweep", testing::final_sweep_scenario().builder},
          {"reduction", testing::reduction_scenario().builder},
          {"detector-corpus", testing::detector_corpus().builder}};
}

std::set<ChangeElement> element_set(const HistorySlice &s) {
  return {s.elements.begin(), s.elements.end()};
}

std::set<std::string> commit_set(const HistorySlice &s) {
  std::set<std::string> out;
  for (const auto &c : s.commits)
    out.insert(c.source.value);
  return out;
}

fs::path scratch_dir(const std::string &name) {
  auto dir = fs::temp_directory_path() /
             ("histslice-acceptance-" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- AC1 -------------------------------------------------------------------

Outcome closure_oracle_check() {
  std::mt19937 rng(20240101);
  std::size_t criteria = 0, mismatches = 0;
  double slicing_seconds = 0;
  for (int g = 0; g < 500; ++g) {
    auto rg = testing::random_graph(rng, 50, 200);
    std::map<CommitId, SystematicVerdict> verdicts;
    for (const auto &n : rg.nodes) {
      auto &v = verdicts[n.commit];
      v.commit = n.commit;
      v.splittable = rg.splittable.count(n.commit) > 0;
      v.kind = v.splittable ? SystematicKind::ast_systematic
                            : SystematicKind::non_systematic;
    }
    DependencyGraph full(rg.nodes, rg.edges);
    DependencyGraph reduced = eliminate(full, verdicts);
    validate(reduced);
    auto reach = testing::closure_oracle(reduced);
    auto reach_all = testing::closure_oracle(full);

    std::set<CommitId> commits;
    for (const auto &n : rg.nodes)
      commits.insert(n.commit);
    for (const auto &c : commits) {
      auto start = std::chrono::steady_clock::now();
      HistorySlice s = slice(reduced, {c});
      slicing_seconds += std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
      ++criteria;
      std::set<ChangeElement> expected;
      std::size_t expected_original = 0;
      std::vector<bool> seen(rg.nodes.size(), false);
      for (std::size_t i = 0; i < rg.nodes.size(); ++i) {
        if (rg.nodes[i].commit != c)
          continue;
        for (std::size_t j = 0; j < rg.nodes.size(); ++j) {
          if (reach[i][j])
            expected.insert(rg.nodes[j]);
          if (reach_all[i][j] && !seen[j]) {
            seen[j] = true;
            ++expected_original;
          }
        }
      }
      if (element_set(s) != expected || s.size != expected.size() ||
          s.original_size != expected_original)
        ++mismatches;
    }
  }
  std::ostringstream d;
  d << "500 graphs, " << criteria << " criteria, " << mismatches
    << " mismatches, slicing " << slicing_seconds << " s";
  return {mismatches == 0 && slicing_seconds < 5.0, d.str()};
}

// --- AC2 -------------------------------------------------------------------

Outcome textual_oracle_check() {
  std::mt19937 rng(424242);
  testing::RandomHistoryOptions opts;
  opts.max_commits = 15;
  opts.max_lines = 200;
  std::size_t mismatches = 0, edges = 0;
  for (int i = 0; i < 200; ++i) {
    History h = testing::random_text_history(rng, opts).build();
    auto got = textual_deps(h, 0);
    auto want = testing::textual_oracle(h, 0);
    edges += want.size();
    if (got != want)
      ++mismatches;
  }
  std::ostringstream d;
  d << "200 histories, " << edges << " oracle edges, " << mismatches
    << " mismatching histories";
  return {mismatches == 0, d.str()};
}

// --- AC3 -------------------------------------------------------------------

Outcome monotonicity_check() {
  std::size_t criteria = 0, violations = 0;
  auto check = [&](const History &h) {
    Analysis with = analyze(h, 3, true);
    Analysis without = analyze(h, 3, false);
    auto a = slice_all(with.graph, with.history);
    auto b = slice_all(without.graph, without.history);
    if (a.size() != b.size()) {
      ++violations;
      return;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      ++criteria;
      auto small = element_set(a[i]);
      auto big = element_set(b[i]);
      if (a[i].criterion != b[i].criterion ||
          !std::includes(big.begin(), big.end(), small.begin(), small.end()))
        ++violations;
    }
  };
  for (const auto &f : curated_fixtures())
    check(f.builder.build());
  std::mt19937 rng(99);
  for (int i = 0; i < 50; ++i)
    check(testing::random_text_history(rng).build());
  std::ostringstream d;
  d << "3 curated + 50 random fixtures, " << criteria << " criteria, "
    << violations << " violations";
  return {violations == 0, d.str()};
}

// --- AC4 -------------------------------------------------------------------

Outcome sweep_regression_check() {
  auto sc = testing::final_sweep_scenario();
  History h = sc.builder.build();
  std::ostringstream d;
  if (h.size() != 16)
    return {false, "fixture has " + std::to_string(h.size()) + " commits"};

  Analysis without = analyze(h, 3, false);
  HistorySlice big = slice(without.graph, {CommitId{sc.criterion_id}});
  std::set<std::string> expected_big(sc.overlapped_ids.begin(),
                                     sc.overlapped_ids.end());
  expected_big.insert(sc.sweep_id);
  expected_big.insert(sc.criterion_id);
  bool sweep_whole = false;
  for (const auto &c : big.commits)
    if (c.source.value == sc.sweep_id)
      sweep_whole = !c.split && c.included_files.size() == 20;
  const bool big_ok = commit_set(big) == expected_big && big.size == 35 &&
                      sweep_whole;

  Analysis with = analyze(h, 3, true);
  HistorySlice small = slice(with.graph, {CommitId{sc.criterion_id}});
  auto small_commits = commit_set(small);
  std::set<std::string> vanished;
  for (const auto &c : commit_set(big))
    if (!small_commits.count(c))
      vanished.insert(c);
  bool sweep_split = false;
  for (const auto &c : small.commits)
    if (c.source.value == sc.sweep_id)
      sweep_split = c.split && c.included_files ==
                                   std::vector<FilePath>{{sc.criterion_file}};
  std::set<std::string> overlapped(sc.overlapped_ids.begin(),
                                   sc.overlapped_ids.end());
  const bool small_ok = vanished == overlapped && sweep_split && small.size == 2;

  d << "without elimination " << big.commits.size() << " commits/" << big.size
    << " elements; with elimination " << small.commits.size() << " commits/"
    << small.size << " elements, " << vanished.size()
    << " commits vanished, sweep split to "
    << (sweep_split ? "1 file" : "something else");
  return {big_ok && small_ok, d.str()};
}

// --- AC5 -------------------------------------------------------------------

Outcome detector_corpus_check() {
  auto corpus = testing::detector_corpus();
  History h = corpus.builder.build();
  auto verdicts = detect_all(h);
  std::size_t agree = 0;
  std::ostringstream misses;
  for (const auto &[id, kind] : corpus.kind) {
    const auto &v = verdicts.at(CommitId{id});
    if (v.kind == kind && v.splittable == corpus.splittable.at(id))
      ++agree;
    else
      misses << " " << id << "=" << to_string(v.kind)
             << (v.splittable ? "/split" : "");
  }
  std::ostringstream d;
  d << agree << "/" << corpus.kind.size() << " labels agree" << misses.str();
  return {agree == corpus.kind.size() && corpus.kind.size() >= 20 &&
              corpus.kind.size() == h.size(),
          d.str()};
}

// --- AC6 -------------------------------------------------------------------

Outcome reduction_check() {
  auto sc = testing::reduction_scenario();
  History h = sc.builder.build();
  Analysis with = analyze(h, 3, true);
  Analysis without = analyze(h, 3, false);
  auto report = compare_reports(reduced_sizes(slice_all(with.graph, h)),
                                reduced_sizes(slice_all(without.graph, h)));
  std::size_t row_mismatches = 0;
  if (report.per_criterion.size() != sc.expected.size())
    row_mismatches = sc.expected.size();
  else
    for (std::size_t i = 0; i < sc.expected.size(); ++i) {
      const auto &got = report.per_criterion[i];
      const auto &want = sc.expected[i];
      if (got.criterion.value != want.criterion ||
          got.original_size != want.original_size ||
          got.reduced_size != want.reduced_size)
        ++row_mismatches;
    }
  const double want_mean =
      double(sc.mean_numerator) / double(sc.mean_denominator);
  const bool mean_ok = std::abs(report.mean_reduction_pct - want_mean) < 1e-9;
  std::ostringstream d;
  d << report.per_criterion.size() << " rows, " << row_mismatches
    << " mismatching, mean " << format_pct(report.mean_reduction_pct)
    << "% (expected " << format_pct(want_mean) << "%)";
  return {row_mismatches == 0 && mean_ok && report.mean_reduction_pct > 0,
          d.str()};
}

// --- AC7 -------------------------------------------------------------------

Outcome patch_safety_check() {
  std::size_t series = 0, patches = 0;
  std::vector<std::string> failures;
  for (const auto &f : curated_fixtures()) {
    History h = f.builder.build();
    Analysis a = analyze(h, 3, true);
    for (const auto &s : slice_all(a.graph, h)) {
      auto dir = scratch_dir(f.name + "-" + s.criterion.value);
      try {
        patches += materialize(h, s, dir, 3).size();
        ++series;
      } catch (const PatchConflict &e) {
        failures.push_back(f.name + ":" + s.criterion.value + " (" + e.what() +
                           ")");
      }
    }
  }

  // Ablation: leave the sweep out of the criterion's series.
  auto sc = testing::final_sweep_scenario();
  History h = sc.builder.build();
  Analysis a = analyze(h, 3, true);
  HistorySlice s = slice(a.graph, {CommitId{sc.criterion_id}});
  std::erase_if(s.commits, [&](const SliceCommit &c) {
    return c.source.value == sc.sweep_id;
  });
  std::erase_if(s.elements, [&](const ChangeElement &e) {
    return e.commit.value == sc.sweep_id;
  });
  std::string ablation = "no conflict";
  bool ablation_ok = false;
  try {
    materialize(h, s, scratch_dir("ablation"), 3);
  } catch (const PatchConflict &e) {
    ablation = "PatchConflict at " + e.commit() + ":" + e.file();
    ablation_ok =
        e.commit() == sc.criterion_id && e.file() == sc.criterion_file;
  }

  std::ostringstream d;
  d << series << " series (" << patches << " patches) applied, "
    << failures.size() << " conflicts";
  for (const auto &f : failures)
    d << " [" << f << "]";
  d << "; ablation without " << sc.sweep_id << ": " << ablation;
  return {failures.empty() && ablation_ok, d.str()};
}

// --- AC8 -------------------------------------------------------------------

Outcome tree_diff_check() {
  std::mt19937 rng(8080);
  std::size_t unsound = 0, unparseable = 0, ops = 0;
  for (int i = 0; i < 1000; ++i) {
    auto pair = testing::random_program_pair(rng);
    SyntaxTree before = parse(pair.before);
    SyntaxTree after = parse(pair.after);
    if (!before.parseable() || !after.parseable()) {
      ++unparseable;
      continue;
    }
    try {
      TreeDiff diff = tree_diff(before, after);
      ops += diff.ops.size();
      if (!isomorphic(apply_edit_ops(before, diff.ops), after))
        ++unsound;
    } catch (const std::exception &) {
      ++unsound;
    }
  }
  std::ostringstream d;
  d << "1000 pairs, " << ops << " ops, " << unsound << " unsound, "
    << unparseable << " unparseable";
  return {unsound == 0 && unparseable == 0, d.str()};
}

// --- AC9 -------------------------------------------------------------------

Outcome determinism_check() {
  auto dir = scratch_dir("determinism");
  auto fixture = dir / "history.json";
  {
    std::ofstream out(fixture, std::ios::binary);
    out << testing::reduction_scenario().builder.fixture_text();
  }
  const std::string cli = HISTSLICE_CLI;
  const std::string fx = fixture.string();
  std::vector<std::vector<std::string>> runs = {
      {cli, "report", "--fixture", fx, "--format", "json"},
      {cli, "report", "--fixture", fx, "--format", "csv"},
      {cli, "deps", "--fixture", fx, "--format", "json"},
      {cli, "deps", "--fixture", fx, "--format", "csv"},
      {cli, "detect", "--fixture", fx, "--format", "json"},
      {cli, "detect", "--fixture", fx, "--format", "csv"},
      {cli, "slice", "--fixture", fx, "--format", "json"},
      {cli, "slice", "--fixture", fx, "--format", "csv"},
  };
  std::size_t differing = 0, failed = 0;
  for (const auto &argv : runs) {
    auto first = detail::run_process(argv);
    auto second = detail::run_process(argv);
    if (first.exit_code != 0 || second.exit_code != 0)
      ++failed;
    else if (first.out != second.out || first.out.empty())
      ++differing;
  }

  auto patch_run = [&](const std::string &name) {
    auto out = dir / name;
    auto r = detail::run_process({cli, "slice", "--fixture", fx, "--criterion",
                                  "d5", "--patches", out.string()});
    std::map<std::string, std::string> files;
    if (r.exit_code != 0)
      return files;
    for (const auto &e : fs::recursive_directory_iterator(out))
      if (e.is_regular_file())
        files[fs::relative(e.path(), out).string()] = read_file(e.path());
    return files;
  };
  auto p1 = patch_run("patches-1");
  auto p2 = patch_run("patches-2");
  const bool patches_ok = !p1.empty() && p1 == p2;

  std::ostringstream d;
  d << runs.size() << " JSON/CSV commands run twice, " << differing
    << " differing, " << failed << " failed; patch series of " << p1.size()
    << " files " << (patches_ok ? "identical" : "differs");
  return {differing == 0 && failed == 0 && patches_ok, d.str()};
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
      {"AC1 closure oracle", closure_oracle_check},
      {"AC2 textual-dependency oracle", textual_oracle_check},
      {"AC3 monotonicity", monotonicity_check},
      {"AC4 final-sweep regression", sweep_regression_check},
      {"AC5 detector corpus", detector_corpus_check},
      {"AC6 reduction measurement", reduction_check},
      {"AC7 patch safety", patch_safety_check},
      {"AC8 tree-diff soundness", tree_diff_check},
      {"AC9 determinism", determinism_check},
  };
  int failures = 0;
  for (const auto &[name, check] : checks) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception &e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail
              << std::endl;
    failures += o.pass ? 0 : 1;
  }
  fs::remove_all(fs::temp_directory_path() /
                 ("histslice-acceptance-" + std::to_string(::getpid())));
  return failures == 0 ? 0 : 1;
}

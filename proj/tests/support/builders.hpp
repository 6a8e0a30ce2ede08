#pragma once

#include "histslice/history.hpp"
#include "histslice/systematic.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace histslice::testing {

/// Accumulates fixture commits against a running snapshot so that every
/// commit's "before" text is right by construction.
class HistoryBuilder {
public:
  using Changes = std::map<std::string, std::optional<std::string>>;

  explicit HistoryBuilder(std::map<std::string, std::string> base = {});

  /// `changes` maps a path to its new text, or to nullopt to delete it.
  HistoryBuilder &commit(const std::string &id, const std::string &message,
                         const Changes &changes);

  const std::map<std::string, std::string> &snapshot() const { return current_; }
  const std::map<std::string, std::string> &base() const { return base_; }

  std::string fixture_text() const;
  History build() const;

private:
  std::map<std::string, std::string> base_;
  std::map<std::string, std::string> current_;
  std::vector<std::string> commits_; // serialized commit objects
  std::int64_t clock_ = 1700000000;
};

/// A 20-file `final` sweep preceded by 14 commits that each edit a line the
/// sweep later rewrites, and followed by a criterion commit that edits one
/// sweep-only line (16 commits in all).
struct SweepScenario {
  HistoryBuilder builder;
  std::string sweep_id;     ///< "c15"
  std::string criterion_id; ///< "c16"
  std::string criterion_file;
  std::vector<std::string> overlapped_ids; ///< c01..c14
};
SweepScenario final_sweep_scenario();

/// Synthetic history with two injected sweeps, one AST-level and one
/// whitespace-only, and the slice sizes they imply.
struct ReductionScenario {
  HistoryBuilder builder;
  struct Row {
    std::string criterion;
    std::size_t original_size;
    std::size_t reduced_size;
  };
  std::vector<Row> expected;
  /// Mean reduction over rows with original size >= 3, as an exact fraction.
  long mean_numerator;
  long mean_denominator;
};
ReductionScenario reduction_scenario();

/// Hand-labelled commits for the detector.
struct LabelledCorpus {
  HistoryBuilder builder;
  std::map<std::string, SystematicKind> kind;
  std::map<std::string, bool> splittable;
};
LabelledCorpus detector_corpus();

} // namespace histslice::testing

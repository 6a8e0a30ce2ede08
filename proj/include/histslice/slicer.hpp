#pragma once

#include "histslice/dependency_graph.hpp"
#include "histslice/history.hpp"

#include <string>
#include <vector>

namespace histslice {

struct SliceCriterion {
  CommitId commit;
};

/// One commit of the reconstituted history.
struct SliceCommit {
  CommitId source;
  std::vector<FilePath> included_files; ///< sorted
  bool split = false; ///< true iff some of the source's files were left out

  bool operator==(const SliceCommit &) const = default;
};

struct HistorySlice {
  CommitId criterion;
  std::vector<ChangeElement> elements; ///< E*, in history order
  std::vector<SliceCommit> commits;    ///< oldest first
  std::size_t size = 0;                ///< |E*| over effective edges
  std::size_t original_size = 0;       ///< |E*| over all edges
  std::size_t original_commit_count = 0;

  /// 1 - size / original_size, or 0 for an empty slice.
  double reduction_ratio() const {
    return original_size == 0 ? 0.0
                              : 1.0 - double(size) / double(original_size);
  }

  bool operator==(const HistorySlice &) const = default;
};

/// Reflexive-transitive closure of the criterion's elements over the
/// graph's effective edges. Throws UnknownCriterion when the commit owns no
/// element of the graph.
HistorySlice slice(const DependencyGraph &graph, const SliceCriterion &criterion);

/// One slice per commit that owns elements, in history order; criteria are
/// sliced in parallel.
std::vector<HistorySlice> slice_all(const DependencyGraph &graph,
                                    const History &history);

} // namespace histslice

#include "histslice/slicer.hpp"

#include "histslice/error.hpp"
#include "histslice/parallel.hpp"

#include <algorithm>

namespace histslice {

namespace {

std::vector<bool> reach(const DependencyGraph &graph,
                        const std::vector<std::uint32_t> &seeds,
                        bool effective_only) {
  std::vector<bool> seen(graph.nodes().size(), false);
  std::vector<std::uint32_t> queue;
  for (std::uint32_t s : seeds) {
    if (!seen[s]) {
      seen[s] = true;
      queue.push_back(s);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (std::uint32_t e : graph.out_edges(queue[head])) {
      if (effective_only && graph.is_eliminated(e))
        continue;
      std::uint32_t to = graph.edges()[e].to;
      if (!seen[to]) {
        seen[to] = true;
        queue.push_back(to);
      }
    }
  }
  return seen;
}

} // namespace

HistorySlice slice(const DependencyGraph &graph,
                   const SliceCriterion &criterion) {
  const auto seeds = graph.elements_of(criterion.commit);
  if (seeds.empty())
    throw UnknownCriterion("commit " + criterion.commit.value +
                           " has no change elements");
  const auto effective = reach(graph, seeds, true);
  const auto all = reach(graph, seeds, false);

  HistorySlice out;
  out.criterion = criterion.commit;
  const auto &nodes = graph.nodes();
  for (std::uint32_t i = 0; i < nodes.size(); ++i) {
    if (all[i])
      ++out.original_size;
    if (!effective[i])
      continue;
    out.elements.push_back(nodes[i]);
  }
  out.size = out.elements.size();

  // Group by commit; nodes are grouped by commit in history order.
  for (std::uint32_t i = 0; i < nodes.size();) {
    std::uint32_t j = i;
    bool any = false, any_original = false;
    while (j < nodes.size() && nodes[j].commit == nodes[i].commit) {
      any = any || effective[j];
      any_original = any_original || all[j];
      ++j;
    }
    if (any_original)
      ++out.original_commit_count;
    if (any) {
      SliceCommit sc;
      sc.source = nodes[i].commit;
      const bool splittable = graph.split_commits().count(sc.source) > 0;
      for (std::uint32_t k = i; k < j; ++k)
        if (effective[k] || !splittable)
          sc.included_files.push_back(nodes[k].file);
      sc.split = sc.included_files.size() < j - i;
      std::sort(sc.included_files.begin(), sc.included_files.end());
      out.commits.push_back(std::move(sc));
    }
    i = j;
  }
  return out;
}

std::vector<HistorySlice> slice_all(const DependencyGraph &graph,
                                    const History &history) {
  std::vector<CommitId> criteria;
  for (const auto &c : history.commits())
    if (!graph.elements_of(c.id).empty())
      criteria.push_back(c.id);
  std::vector<HistorySlice> out(criteria.size());
  parallel_for(criteria.size(),
               [&](std::size_t i) { out[i] = slice(graph, {criteria[i]}); });
  return out;
}

} // namespace histslice

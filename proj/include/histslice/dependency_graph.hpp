#pragma once

#include "histslice/history.hpp"
#include "histslice/systematic.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace histslice {

enum class DepKind { textual, build, commit };

std::string_view to_string(DepKind kind);

/// `from` needs `to`: textual edges point at older elements, build edges at
/// older elements or at another file of the same commit.
struct Dependency {
  ChangeElement from;
  ChangeElement to;
  DepKind kind = DepKind::textual;

  auto operator<=>(const Dependency &) const = default;
};

using DependencySet = std::set<Dependency>;

/// Blame-style extraction: every hunk of an element, widened by `context`
/// lines on both sides of its pre-image, is traced back through older
/// commits (remapping line numbers across their hunks) to the element that
/// last wrote each covered line. A re-added path also depends on the element
/// that removed it, and a walk that crosses a rename depends on the rename.
DependencySet textual_deps(const History &history, std::size_t context = 3);

/// Def-use approximation: an element that inserts or updates a reference to
/// a name depends on every older element that introduced, or last changed
/// the header of, a type, method, constructor, field or enum constant with
/// that simple name, and on other files of its own commit that do so.
DependencySet build_deps(const History &history);

/// All ordered pairs of distinct elements within each commit.
DependencySet commit_deps(const History &history);

class DependencyGraph {
public:
  struct Edge {
    std::uint32_t from = 0;
    std::uint32_t to = 0;
    DepKind kind = DepKind::textual;

    auto operator<=>(const Edge &) const = default;
  };

  DependencyGraph() = default;

  /// `nodes` must be in history order; every edge endpoint must be a node.
  DependencyGraph(std::vector<ChangeElement> nodes, const DependencySet &edges);

  const std::vector<ChangeElement> &nodes() const { return nodes_; }
  std::optional<std::uint32_t> index_of(const ChangeElement &element) const;

  /// Sorted by (from, to, kind) in node order.
  const std::vector<Edge> &edges() const { return edges_; }
  Dependency dependency(const Edge &edge) const;

  bool is_eliminated(std::size_t edge_index) const {
    return !eliminated_.empty() && eliminated_[edge_index];
  }
  std::size_t eliminated_count() const;

  /// Commits whose commit edges were eliminated.
  const std::set<CommitId> &split_commits() const { return split_commits_; }

  /// Edge indices leaving `node`.
  const std::vector<std::uint32_t> &out_edges(std::uint32_t node) const {
    return out_[node];
  }

  /// Position of the commit among the commits that own elements.
  std::uint32_t commit_rank(std::uint32_t node) const { return rank_[node]; }

  /// Node indices of the commit's elements, in path order; empty when the
  /// commit has none.
  std::vector<std::uint32_t> elements_of(const CommitId &commit) const;

  std::size_t count(DepKind kind, bool effective_only) const;

private:
  friend DependencyGraph eliminate(DependencyGraph graph,
                                   const std::map<CommitId, SystematicVerdict> &);

  std::vector<ChangeElement> nodes_;
  std::map<ChangeElement, std::uint32_t> index_;
  std::vector<std::uint32_t> rank_;
  std::unordered_map<CommitId, std::vector<std::uint32_t>> by_commit_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::uint32_t>> out_;
  std::vector<bool> eliminated_;
  std::set<CommitId> split_commits_;
};

/// Textual, build and commit dependencies over the history's elements.
DependencyGraph build_graph(const History &history, std::size_t context = 3);

/// Marks the commit edges of every splittable commit as eliminated. Textual
/// and build edges are kept. Throws InvariantViolation if a commit of the
/// graph has no verdict.
DependencyGraph eliminate(DependencyGraph graph,
                          const std::map<CommitId, SystematicVerdict> &verdicts);

/// Checks orientation, commit-edge symmetry and the elimination mask; throws
/// InvariantViolation.
void validate(const DependencyGraph &graph);

/// "fromCommit:fromFile<TAB>kind<TAB>toCommit:toFile" lines, effective edges
/// only.
std::string to_edge_list(const DependencyGraph &graph);

/// {"nodes": [...], "edges": [{"from","to","kind","eliminated"}]}
std::string to_json(const DependencyGraph &graph);

} // namespace histslice

#pragma once

#include "builders.hpp"
#include "histslice/dependency_graph.hpp"

#include <random>
#include <set>
#include <string>

namespace histslice::testing {

struct RandomHistoryOptions {
  int max_commits = 15;
  int max_lines = 200;
  int max_files = 4;
  bool add_and_delete = true; ///< allow file additions, deletions, re-additions
};

/// Line-oriented text files edited at random. Lines come from a tiny
/// alphabet so the line differ faces many equally long alignments.
HistoryBuilder random_text_history(std::mt19937 &rng,
                                   const RandomHistoryOptions &options = {});

struct RandomGraph {
  std::vector<ChangeElement> nodes; ///< history order
  DependencySet edges;
  std::set<CommitId> splittable;
};

/// Graph with well-formed edges: commit cliques (kept or dropped per commit)
/// plus random backward textual and build edges.
RandomGraph random_graph(std::mt19937 &rng, std::size_t max_nodes = 50,
                         std::size_t max_edges = 200);

struct ProgramPair {
  std::string before;
  std::string after;
};

/// A random program in the parser's Java subset and a mutated copy (edited
/// literals, modifiers, inserted, deleted and moved statements and members,
/// renamed methods, reformatting and comments).
ProgramPair random_program_pair(std::mt19937 &rng);

} // namespace histslice::testing

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace histslice {

/// One contiguous replaced region between two versions of a file, with no
/// context lines.
///
/// `old_start`/`new_start` are 1-based. For an empty side (pure insertion or
/// pure deletion) the start is the line number the region would occupy, i.e.
/// the insertion point, which may be one past the last line.
struct Hunk {
  std::size_t old_start = 1;
  std::size_t old_len = 0;
  std::size_t new_start = 1;
  std::size_t new_len = 0;
  std::vector<std::string> old_lines;
  std::vector<std::string> new_lines;

  bool operator==(const Hunk &) const = default;
};

/// Longest-common-subsequence line diff (Myers, linear space). Hunks are
/// sorted and non-overlapping.
std::vector<Hunk> diff_lines(const std::vector<std::string> &before,
                             const std::vector<std::string> &after);

/// Replays hunks onto `before`. Throws std::invalid_argument if a hunk's old
/// lines do not match.
std::vector<std::string> apply_hunks(const std::vector<std::string> &before,
                                     const std::vector<Hunk> &hunks);

} // namespace histslice

#pragma once

#include "histslice/history.hpp"
#include "histslice/slicer.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace histslice {

/// File path -> full contents.
using Snapshot = std::map<FilePath, std::string>;

struct PatchFile {
  std::string name; ///< e.g. "0001-Add-final-qualifiers.patch"
  std::string text;
};

/// git-style unified diff of one file change ("diff --git" header, hunks
/// with `context` lines, "\ No newline at end of file" markers).
std::string render_file_diff(const FileChange &change, std::size_t context = 3);

/// mbox-like patch with From/Date/Subject headers for `files` of `commit`.
std::string render_patch(const Commit &commit,
                         const std::vector<const FileChange *> &files,
                         bool split, std::size_t index, std::size_t total,
                         std::size_t context = 3);

/// One patch per slice commit, numbered in history order. Split commits keep
/// only their included files and get a "[split]" subject suffix; binary
/// changes travel with unsplit commits.
std::vector<PatchFile> render_series(const History &history,
                                     const HistorySlice &slice,
                                     std::size_t context = 3);

/// Applies a patch produced by render_patch to `snapshot`. Hunks must match
/// exactly but may sit at an offset. Throws PatchConflict naming the commit
/// and file whose pre-image was not found. Binary sections are replayed as
/// presence changes only.
void apply_patch(Snapshot &snapshot, std::string_view patch_text);

/// Renders the series, replays it onto the history's base snapshot and,
/// once every patch applies, writes the files into `out_dir` (created if
/// missing). Throws PatchConflict before writing anything.
std::vector<PatchFile> materialize(const History &history,
                                   const HistorySlice &slice,
                                   const std::filesystem::path &out_dir,
                                   std::size_t context = 3);

} // namespace histslice

#pragma once

#include "histslice/line_diff.hpp"
#include "histslice/text.hpp"

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace histslice {

/// Full hash for Git sources, any unique token for fixtures.
struct CommitId {
  std::string value;

  auto operator<=>(const CommitId &) const = default;
};

/// Repository-relative, '/'-separated, with no '.', '..' or leading '/'.
struct FilePath {
  std::string value;

  auto operator<=>(const FilePath &) const = default;
};

bool is_normalized_path(std::string_view path);

enum class ChangeKind { added, modified, deleted, renamed };

std::string_view to_string(ChangeKind kind);

struct FileChange {
  FilePath path;
  ChangeKind kind = ChangeKind::modified;
  std::optional<FilePath> old_path; ///< set for renames
  std::vector<Hunk> hunks;
  std::optional<TextLines> before; ///< absent for added files
  std::optional<TextLines> after;  ///< absent for deleted files
  bool binary = false;             ///< binary changes carry no hunks

  /// Path of the file in the parent snapshot.
  const FilePath &source_path() const { return old_path ? *old_path : path; }

  bool operator==(const FileChange &) const = default;
};

struct Commit {
  CommitId id;
  std::optional<CommitId> parent;
  std::string author;
  std::string message;
  std::int64_t timestamp = 0; ///< seconds since epoch, UTC
  std::vector<FileChange> file_changes;

  const FileChange *find(const FilePath &path) const;

  bool operator==(const Commit &) const = default;
};

/// A linear range of commits, oldest first. Immutable once built.
class History {
public:
  History() = default;

  /// Validates linearity and id uniqueness; throws InvariantViolation.
  explicit History(std::vector<Commit> commits);

  const std::vector<Commit> &commits() const { return commits_; }
  std::size_t size() const { return commits_.size(); }
  bool empty() const { return commits_.empty(); }

  const Commit &first() const { return commits_.front(); }
  const Commit &last() const { return commits_.back(); }

  std::optional<std::size_t> index_of(const CommitId &id) const;
  const Commit &commit(const CommitId &id) const;

  /// File contents as they were before the first commit of the range.
  /// Binary files are included with their raw bytes.
  std::map<FilePath, std::string> base_snapshot() const;

  bool operator==(const History &other) const {
    return commits_ == other.commits_;
  }

private:
  std::vector<Commit> commits_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// The atomic unit of slicing: one file changed by one commit.
struct ChangeElement {
  CommitId commit;
  FilePath file;

  auto operator<=>(const ChangeElement &) const = default;
};

std::string to_string(const ChangeElement &element);

/// One element per (commit, changed text file), in history order and then by
/// path. Binary files are not change elements.
std::vector<ChangeElement> change_elements(const History &history);

/// Builds a FileChange from the two versions of a file, deriving the kind,
/// binary flag and hunks. Returns nullopt when nothing changed.
std::optional<FileChange>
make_file_change(FilePath path, std::optional<FilePath> old_path,
                 const std::optional<std::string> &before,
                 const std::optional<std::string> &after);

// Fixture documents: {"commits": [{"id", "message", "timestamp",
// "author"?, "files": [{"path", "before", "after"}]}]}, oldest first, with
// full texts; null before means added, null after means deleted.
History parse_fixture(std::string_view json_text);
History load_fixture_history(const std::filesystem::path &fixture_path);
std::string write_fixture(const History &history);

/// Loads the commits in (from, to] from a local Git repository.
History load_git_history(const std::filesystem::path &repo,
                         const std::string &from, const std::string &to);

} // namespace histslice

template <> struct std::hash<histslice::CommitId> {
  std::size_t operator()(const histslice::CommitId &id) const noexcept {
    return std::hash<std::string>{}(id.value);
  }
};

template <> struct std::hash<histslice::FilePath> {
  std::size_t operator()(const histslice::FilePath &p) const noexcept {
    return std::hash<std::string>{}(p.value);
  }
};

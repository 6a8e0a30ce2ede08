#include "histslice/history.hpp"

#include "histslice/error.hpp"

#include <set>

namespace histslice {

bool is_normalized_path(std::string_view path) {
  if (path.empty() || path.front() == '/' || path.back() == '/')
    return false;
  std::size_t start = 0;
  while (start <= path.size()) {
    std::size_t end = path.find('/', start);
    if (end == std::string_view::npos)
      end = path.size();
    auto part = path.substr(start, end - start);
    if (part.empty() || part == "." || part == "..")
      return false;
    start = end + 1;
  }
  return path.find('\\') == std::string_view::npos;
}

std::string_view to_string(ChangeKind kind) {
  switch (kind) {
  case ChangeKind::added:
    return "added";
  case ChangeKind::modified:
    return "modified";
  case ChangeKind::deleted:
    return "deleted";
  case ChangeKind::renamed:
    return "renamed";
  }
  return "?";
}

const FileChange *Commit::find(const FilePath &path) const {
  for (const auto &fc : file_changes)
    if (fc.path == path)
      return &fc;
  return nullptr;
}

History::History(std::vector<Commit> commits) : commits_(std::move(commits)) {
  for (std::size_t i = 0; i < commits_.size(); ++i) {
    const auto &c = commits_[i];
    if (c.id.value.empty())
      throw InvariantViolation("commit with empty id");
    if (!index_.emplace(c.id.value, i).second)
      throw InvariantViolation("duplicate commit id " + c.id.value);
    if (i > 0 && (!c.parent || *c.parent != commits_[i - 1].id))
      throw InvariantViolation("commit " + c.id.value +
                               " does not follow its predecessor");
    if (c.file_changes.empty())
      throw InvariantViolation("commit " + c.id.value + " changes nothing");
    std::set<FilePath> seen;
    for (const auto &fc : c.file_changes)
      if (!seen.insert(fc.path).second)
        throw InvariantViolation("commit " + c.id.value +
                                 " lists a file twice: " + fc.path.value);
  }
}

std::optional<std::size_t> History::index_of(const CommitId &id) const {
  auto it = index_.find(id.value);
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

const Commit &History::commit(const CommitId &id) const {
  auto idx = index_of(id);
  if (!idx)
    throw UnknownCommit("unknown commit " + id.value);
  return commits_[*idx];
}

std::map<FilePath, std::string> History::base_snapshot() const {
  std::map<FilePath, std::string> snapshot;
  std::set<FilePath> touched;
  for (const auto &c : commits_) {
    for (const auto &fc : c.file_changes) {
      const FilePath &src = fc.source_path();
      if (!touched.count(src) && fc.before)
        snapshot.emplace(src, join_lines(*fc.before));
      touched.insert(src);
      touched.insert(fc.path);
    }
  }
  return snapshot;
}

std::string to_string(const ChangeElement &element) {
  return element.commit.value + ":" + element.file.value;
}

std::vector<ChangeElement> change_elements(const History &history) {
  std::vector<ChangeElement> out;
  for (const auto &c : history.commits())
    for (const auto &fc : c.file_changes)
      if (!fc.binary)
        out.push_back({c.id, fc.path});
  return out;
}

namespace {

// In unified-diff terms a last line without its newline differs from the
// same text followed by a newline. Tagging it with a '\n', which no split
// line can contain, keeps the line differ from pairing the two.
std::vector<std::string> diff_keys(const TextLines &text) {
  std::vector<std::string> keys = text.lines;
  if (text.missing_newline && !keys.empty())
    keys.back() += '\n';
  return keys;
}

void strip_tags(std::vector<std::string> &lines) {
  for (auto &l : lines)
    if (!l.empty() && l.back() == '\n')
      l.pop_back();
}

} // namespace

std::optional<FileChange>
make_file_change(FilePath path, std::optional<FilePath> old_path,
                 const std::optional<std::string> &before,
                 const std::optional<std::string> &after) {
  if (!before && !after)
    return std::nullopt;
  FileChange fc;
  fc.path = std::move(path);
  if (before)
    fc.before = split_lines(*before);
  if (after)
    fc.after = split_lines(*after);
  if (old_path && *old_path != fc.path && before && after) {
    fc.kind = ChangeKind::renamed;
    fc.old_path = std::move(old_path);
  } else if (!before) {
    fc.kind = ChangeKind::added;
  } else if (!after) {
    fc.kind = ChangeKind::deleted;
  } else {
    fc.kind = ChangeKind::modified;
    if (*fc.before == *fc.after)
      return std::nullopt;
  }
  fc.binary = (before && looks_binary(*before)) || (after && looks_binary(*after));
  if (!fc.binary) {
    fc.hunks = diff_lines(fc.before ? diff_keys(*fc.before) : std::vector<std::string>{},
                          fc.after ? diff_keys(*fc.after) : std::vector<std::string>{});
    for (auto &h : fc.hunks) {
      strip_tags(h.old_lines);
      strip_tags(h.new_lines);
    }
  }
  return fc;
}

} // namespace histslice

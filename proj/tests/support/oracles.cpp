#include "oracles.hpp"

#include <map>
#include <optional>
#include <stdexcept>

namespace histslice::testing {

namespace {

struct LineOwner {
  std::optional<ChangeElement> writer; // empty: base text or behind a binary
  std::vector<ChangeElement> renames;
};

using FileOwners = std::vector<LineOwner>;

} // namespace

DependencySet textual_oracle(const History &history, std::size_t context) {
  std::map<FilePath, FileOwners> owners;
  std::map<FilePath, std::optional<ChangeElement>> removed_by;
  auto lines_of = [&](const FilePath &path, std::size_t n) -> FileOwners & {
    auto [it, fresh] = owners.try_emplace(path, n, LineOwner{});
    if (!fresh && it->second.size() != n)
      throw std::logic_error("oracle lost track of " + path.value);
    return it->second;
  };

  DependencySet out;
  for (const auto &commit : history.commits()) {
    std::map<FilePath, FileOwners> next;
    std::vector<FilePath> gone;
    for (const auto &fc : commit.file_changes) {
      const ChangeElement self{commit.id, fc.path};
      const FilePath &src = fc.source_path();
      if (fc.binary) {
        // Nothing older is visible through a binary version: forget the
        // file so its next text version starts from unowned lines.
        gone.push_back(src);
        gone.push_back(fc.path);
        removed_by[fc.path] = std::nullopt;
        if (fc.kind == ChangeKind::renamed)
          removed_by[src] = std::nullopt;
        continue;
      }
      if (fc.kind == ChangeKind::added) {
        if (auto it = removed_by.find(fc.path);
            it != removed_by.end() && it->second)
          out.insert({self, *it->second, DepKind::textual});
        removed_by[fc.path] = std::nullopt;
        next[fc.path] = FileOwners(fc.after->lines.size(), LineOwner{self, {}});
        continue;
      }

      const std::size_t n = fc.before->lines.size();
      FileOwners before = lines_of(src, n);
      for (const auto &h : fc.hunks) {
        long lo = long(h.old_start) - long(context);
        long hi = long(h.old_start) + long(h.old_len) - 1 + long(context);
        for (long l = std::max(1L, lo); l <= std::min(long(n), hi); ++l) {
          const auto &owner = before[std::size_t(l - 1)];
          if (owner.writer)
            out.insert({self, *owner.writer, DepKind::textual});
          for (const auto &r : owner.renames)
            out.insert({self, r, DepKind::textual});
        }
      }

      if (fc.kind == ChangeKind::deleted) {
        gone.push_back(fc.path);
        removed_by[fc.path] = self;
        continue;
      }
      FileOwners after = before;
      for (auto h = fc.hunks.rbegin(); h != fc.hunks.rend(); ++h) {
        auto at = after.begin() + long(h->old_start) - 1;
        after.erase(at, at + long(h->old_len));
        after.insert(after.begin() + long(h->old_start) - 1, h->new_len,
                     LineOwner{self, {}});
      }
      if (fc.kind == ChangeKind::renamed) {
        for (auto &owner : after)
          if (!(owner.writer && *owner.writer == self))
            owner.renames.push_back(self);
        gone.push_back(src);
        removed_by[src] = self;
      }
      removed_by[fc.path] = std::nullopt;
      next[fc.path] = std::move(after);
    }
    for (const auto &p : gone)
      owners.erase(p);
    for (auto &[p, v] : next)
      owners[p] = std::move(v);
  }
  return out;
}

std::vector<std::vector<bool>> closure_oracle(const DependencyGraph &graph) {
  const std::size_t n = graph.nodes().size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    reach[i][i] = true;
  for (std::size_t e = 0; e < graph.edges().size(); ++e)
    if (!graph.is_eliminated(e))
      reach[graph.edges()[e].from][graph.edges()[e].to] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j])
            reach[i][j] = true;
  return reach;
}

} // namespace histslice::testing

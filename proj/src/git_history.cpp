#include "histslice/error.hpp"
#include "histslice/history.hpp"

#include "process.hpp"

#include <algorithm>
#include <sstream>

namespace histslice {

namespace {

class GitRepo {
public:
  explicit GitRepo(std::filesystem::path repo) : repo_(std::move(repo)) {}

  detail::ProcessResult run(std::vector<std::string> args) const {
    args.insert(args.begin(), {"git", "-C", repo_.string()});
    return detail::run_process(args, {"LC_ALL=C", "GIT_PAGER=cat"});
  }

  std::string must(std::vector<std::string> args) const {
    auto r = run(args);
    if (r.exit_code != 0) {
      std::string cmd;
      for (const auto &a : args)
        cmd += " " + a;
      throw InputError("git" + cmd + " failed: " + r.err);
    }
    return r.out;
  }

  std::string resolve(const std::string &rev) const {
    auto r = run({"rev-parse", "--verify", "--quiet", rev + "^{commit}"});
    if (r.exit_code != 0)
      throw UnknownCommit("unknown commit " + rev);
    return trim(r.out);
  }

  std::string blob(const std::string &sha) const {
    return must({"cat-file", "blob", sha});
  }

  static std::string trim(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == ' '))
      s.pop_back();
    return s;
  }

private:
  std::filesystem::path repo_;
};

struct RawEntry {
  std::string src_mode, dst_mode, src_sha, dst_sha;
  char status = 'M';
  std::string path;
  std::string new_path;
};

std::vector<RawEntry> parse_raw_z(const std::string &out) {
  std::vector<RawEntry> entries;
  std::size_t pos = 0;
  auto next_field = [&]() {
    auto end = out.find('\0', pos);
    if (end == std::string::npos)
      end = out.size();
    std::string field = out.substr(pos, end - pos);
    pos = end + 1;
    return field;
  };
  while (pos < out.size()) {
    std::string header = next_field();
    if (header.empty() || header[0] != ':')
      continue;
    std::istringstream hs(header.substr(1));
    RawEntry e;
    std::string status;
    hs >> e.src_mode >> e.dst_mode >> e.src_sha >> e.dst_sha >> status;
    e.status = status.empty() ? 'M' : status[0];
    e.path = next_field();
    if (e.status == 'R' || e.status == 'C')
      e.new_path = next_field();
    entries.push_back(std::move(e));
  }
  return entries;
}

bool is_gitlink(const std::string &mode) { return mode == "160000"; }

} // namespace

History load_git_history(const std::filesystem::path &repo,
                         const std::string &from, const std::string &to) {
  GitRepo git(repo);
  if (!std::filesystem::is_directory(repo) ||
      git.run({"rev-parse", "--git-dir"}).exit_code != 0)
    throw NotARepository(repo.string() + " is not a git repository");

  const std::string from_sha = git.resolve(from);
  const std::string to_sha = git.resolve(to);
  if (from_sha == to_sha)
    throw EmptyRange("range " + from + ".." + to + " contains no commits");
  if (git.run({"merge-base", "--is-ancestor", from_sha, to_sha}).exit_code != 0)
    throw NotLinearHistory(from + " is not an ancestor of " + to);

  std::istringstream revs(
      git.must({"rev-list", "--reverse", "--parents", from_sha + ".." + to_sha}));
  std::vector<std::pair<std::string, std::string>> chain;
  std::string line;
  std::string expected_parent = from_sha;
  while (std::getline(revs, line)) {
    std::istringstream ls(line);
    std::vector<std::string> ids;
    for (std::string id; ls >> id;)
      ids.push_back(id);
    if (ids.empty())
      continue;
    if (ids.size() != 2)
      throw NotLinearHistory("commit " + ids[0] + " has " +
                             std::to_string(ids.size() - 1) + " parents");
    if (ids[1] != expected_parent)
      throw NotLinearHistory("commit " + ids[0] +
                             " is not on the first-parent chain");
    chain.emplace_back(ids[0], ids[1]);
    expected_parent = ids[0];
  }
  if (chain.empty() || chain.back().first != to_sha)
    throw NotLinearHistory("range " + from + ".." + to + " is not linear");

  std::vector<Commit> commits;
  for (const auto &[sha, parent_sha] : chain) {
    Commit c;
    c.id.value = sha;
    std::string meta =
        git.must({"show", "-s", "--format=%an <%ae>%x00%at%x00%B", sha});
    auto p1 = meta.find('\0');
    auto p2 = meta.find('\0', p1 + 1);
    c.author = meta.substr(0, p1);
    c.timestamp = std::stoll(meta.substr(p1 + 1, p2 - p1 - 1));
    c.message = GitRepo::trim(meta.substr(p2 + 1));

    auto raw = parse_raw_z(git.must(
        {"diff-tree", "-r", "-z", "-M", "--raw", "--no-commit-id", parent_sha,
         sha}));
    for (const auto &e : raw) {
      if (is_gitlink(e.src_mode) || is_gitlink(e.dst_mode))
        continue;
      std::optional<std::string> before, after;
      const bool has_src = e.status != 'A';
      const bool has_dst = e.status != 'D';
      if (has_src)
        before = git.blob(e.src_sha);
      if (has_dst)
        after = git.blob(e.dst_sha);
      std::optional<FilePath> old_path;
      FilePath path{e.path};
      if (e.status == 'R') {
        old_path = FilePath{e.path};
        path = FilePath{e.new_path};
      }
      if (auto fc = make_file_change(path, old_path, before, after))
        c.file_changes.push_back(std::move(*fc));
    }
    if (c.file_changes.empty())
      continue;
    std::sort(c.file_changes.begin(), c.file_changes.end(),
              [](const FileChange &a, const FileChange &b) {
                return a.path < b.path;
              });
    c.parent = commits.empty() ? CommitId{from_sha} : commits.back().id;
    commits.push_back(std::move(c));
  }
  if (commits.empty())
    throw EmptyRange("range " + from + ".." + to + " changes no files");
  return History(std::move(commits));
}

} // namespace histslice

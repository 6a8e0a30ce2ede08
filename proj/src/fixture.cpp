#include "histslice/error.hpp"
#include "histslice/history.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace histslice {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string &where, const std::string &what) {
  throw MalformedFixture(where + ": " + what);
}

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

std::string require_string(const json &obj, const char *key,
                           const std::string &where) {
  auto it = obj.find(key);
  if (it == obj.end())
    malformed(where, std::string("missing field \"") + key + "\"");
  if (!it->is_string())
    malformed(where + "." + key, "expected a string");
  return it->get<std::string>();
}

std::optional<std::string> nullable_string(const json &obj, const char *key,
                                           const std::string &where) {
  auto it = obj.find(key);
  if (it == obj.end())
    malformed(where, std::string("missing field \"") + key + "\"");
  if (it->is_null())
    return std::nullopt;
  if (!it->is_string())
    malformed(where + "." + key, "expected a string or null");
  return it->get<std::string>();
}

std::string trim_message(std::string message) {
  while (!message.empty() &&
         (message.back() == '\n' || message.back() == '\r' ||
          message.back() == ' '))
    message.pop_back();
  return message;
}

} // namespace

History parse_fixture(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error &e) {
    malformed(line_col(json_text, e.byte == 0 ? 0 : e.byte - 1),
              "invalid JSON");
  }
  if (!doc.is_object() || !doc.contains("commits") ||
      !doc["commits"].is_array())
    malformed("document", "expected an object with a \"commits\" array");

  // Contents as of the latest commit, for continuity checks. Absent entries
  // were never seen; nullopt means deleted.
  std::map<FilePath, std::optional<std::string>> snapshot;
  std::set<std::string> ids;
  std::vector<Commit> commits;

  const auto &list = doc["commits"];
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "commits[" + std::to_string(i) + "]";
    const json &jc = list[i];
    if (!jc.is_object())
      malformed(where, "expected an object");

    Commit c;
    c.id.value = require_string(jc, "id", where);
    if (c.id.value.empty())
      malformed(where + ".id", "empty commit id");
    if (!ids.insert(c.id.value).second)
      malformed(where + ".id", "duplicate commit id \"" + c.id.value + "\"");
    c.message = trim_message(require_string(jc, "message", where));
    if (!jc.contains("timestamp") || !jc["timestamp"].is_number_integer())
      malformed(where + ".timestamp", "expected an integer");
    c.timestamp = jc["timestamp"].get<std::int64_t>();
    if (auto it = jc.find("author"); it != jc.end()) {
      if (!it->is_string())
        malformed(where + ".author", "expected a string");
      c.author = it->get<std::string>();
    }
    if (!jc.contains("files") || !jc["files"].is_array())
      malformed(where + ".files", "expected an array");

    std::set<std::string> paths;
    std::vector<std::pair<FilePath, std::optional<std::string>>> updates;
    const auto &files = jc["files"];
    for (std::size_t k = 0; k < files.size(); ++k) {
      const std::string fwhere = where + ".files[" + std::to_string(k) + "]";
      const json &jf = files[k];
      if (!jf.is_object())
        malformed(fwhere, "expected an object");
      std::string path = require_string(jf, "path", fwhere);
      if (!is_normalized_path(path))
        malformed(fwhere + ".path", "path \"" + path + "\" is not normalized");
      if (!paths.insert(path).second)
        malformed(fwhere + ".path", "path \"" + path + "\" listed twice");
      auto before = nullable_string(jf, "before", fwhere);
      auto after = nullable_string(jf, "after", fwhere);
      if (!before && !after)
        malformed(fwhere, "before and after are both null");

      FilePath fp{path};
      if (auto it = snapshot.find(fp); it != snapshot.end()) {
        const auto &current = it->second;
        auto norm = [](const std::optional<std::string> &t) {
          return t ? std::optional(join_lines(split_lines(*t))) : std::nullopt;
        };
        if (norm(current) != norm(before))
          malformed(fwhere + ".before",
                    "does not match the file as left by earlier commits");
      }
      updates.emplace_back(fp, after);
      if (auto fc = make_file_change(fp, std::nullopt, before, after))
        c.file_changes.push_back(std::move(*fc));
    }
    for (auto &[fp, after] : updates)
      snapshot[fp] = std::move(after);

    if (c.file_changes.empty())
      continue;
    std::sort(c.file_changes.begin(), c.file_changes.end(),
              [](const FileChange &a, const FileChange &b) {
                return a.path < b.path;
              });
    if (!commits.empty())
      c.parent = commits.back().id;
    commits.push_back(std::move(c));
  }
  return History(std::move(commits));
}

History load_fixture_history(const std::filesystem::path &fixture_path) {
  std::ifstream in(fixture_path, std::ios::binary);
  if (!in)
    throw MalformedFixture(fixture_path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_fixture(ss.str());
  } catch (const MalformedFixture &e) {
    throw MalformedFixture(fixture_path.string() + ": " + e.what());
  }
}

std::string write_fixture(const History &history) {
  json commits = json::array();
  for (const auto &c : history.commits()) {
    json jc;
    jc["id"] = c.id.value;
    jc["message"] = c.message;
    jc["timestamp"] = c.timestamp;
    if (!c.author.empty())
      jc["author"] = c.author;
    json files = json::array();
    for (const auto &fc : c.file_changes) {
      if (fc.kind == ChangeKind::renamed) {
        // The fixture format has no renames; spell them as delete + add.
        files.push_back({{"path", fc.old_path->value},
                         {"before", join_lines(*fc.before)},
                         {"after", nullptr}});
        files.push_back({{"path", fc.path.value},
                         {"before", nullptr},
                         {"after", join_lines(*fc.after)}});
        continue;
      }
      json jf;
      jf["path"] = fc.path.value;
      jf["before"] = fc.before ? json(join_lines(*fc.before)) : json(nullptr);
      jf["after"] = fc.after ? json(join_lines(*fc.after)) : json(nullptr);
      files.push_back(std::move(jf));
    }
    jc["files"] = std::move(files);
    commits.push_back(std::move(jc));
  }
  json doc;
  doc["commits"] = std::move(commits);
  return doc.dump(2) + "\n";
}

} // namespace histslice

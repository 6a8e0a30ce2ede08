#include "histslice/patch.hpp"

#include "histslice/error.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <optional>

namespace histslice {

namespace {

constexpr std::string_view kNoNewline = "\\ No newline at end of file\n";

void emit_line(std::string &out, char tag, const std::string &line,
               bool missing_newline) {
  out += tag;
  out += line;
  out += '\n';
  if (missing_newline)
    out += kNoNewline;
}

std::string range(std::size_t start, std::size_t len) {
  // An empty range names the line before it, as diff(1) does.
  return std::to_string(len == 0 ? start - 1 : start) + "," +
         std::to_string(len);
}

void render_hunks(std::string &out, const FileChange &fc, std::size_t context) {
  static const TextLines kEmpty;
  const TextLines &old_text = fc.before ? *fc.before : kEmpty;
  const TextLines &new_text = fc.after ? *fc.after : kEmpty;
  const std::size_t n = old_text.lines.size(), m = new_text.lines.size();
  const auto &hunks = fc.hunks;

  for (std::size_t g = 0; g < hunks.size();) {
    std::size_t last = g;
    while (last + 1 < hunks.size() &&
           hunks[last + 1].old_start <=
               hunks[last].old_start + hunks[last].old_len + 2 * context)
      ++last;
    const Hunk &first_h = hunks[g];
    const Hunk &last_h = hunks[last];
    const std::size_t lead = std::min(context, first_h.old_start - 1);
    const std::size_t old_from = first_h.old_start - lead;
    const std::size_t new_from = first_h.new_start - lead;
    const std::size_t old_end =
        std::min(n, last_h.old_start + last_h.old_len - 1 + context);
    const std::size_t trail = old_end + 1 - (last_h.old_start + last_h.old_len);

    std::string body;
    std::size_t old_count = 0, new_count = 0;
    std::size_t o = old_from, nw = new_from;
    auto context_line = [&] {
      emit_line(body, ' ', old_text.lines[o - 1],
                o == n && old_text.missing_newline);
      ++o;
      ++nw;
      ++old_count;
      ++new_count;
    };
    for (std::size_t k = g; k <= last; ++k) {
      const Hunk &h = hunks[k];
      while (o < h.old_start)
        context_line();
      for (const auto &line : h.old_lines) {
        emit_line(body, '-', line, o == n && old_text.missing_newline);
        ++o;
        ++old_count;
      }
      for (const auto &line : h.new_lines) {
        emit_line(body, '+', line, nw == m && new_text.missing_newline);
        ++nw;
        ++new_count;
      }
    }
    for (std::size_t t = 0; t < trail; ++t)
      context_line();

    out += "@@ -" + range(old_from, old_count) + " +" +
           range(new_from, new_count) + " @@\n";
    out += body;
    g = last + 1;
  }
}

std::string format_date(std::int64_t timestamp) {
  std::time_t t = static_cast<std::time_t>(timestamp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  static const char *kDays[] = {"Sun", "Mon", "Tue", "Wed", "Thu", "Fri", "Sat"};
  static const char *kMonths[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                  "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s, %02d %s %04d %02d:%02d:%02d +0000",
                kDays[tm.tm_wday], tm.tm_mday, kMonths[tm.tm_mon],
                tm.tm_year + 1900, tm.tm_hour, tm.tm_min, tm.tm_sec);
  return buf;
}

std::string slug(std::string_view subject) {
  std::string out;
  bool dash = false;
  for (char c : subject) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.') {
      if (dash && !out.empty())
        out += '-';
      dash = false;
      out += c;
    } else {
      dash = true;
    }
    if (out.size() >= 52)
      break;
  }
  while (!out.empty() && out.back() == '.')
    out.pop_back();
  return out.empty() ? "patch" : out;
}

} // namespace

std::string render_file_diff(const FileChange &fc, std::size_t context) {
  const std::string &src = fc.source_path().value;
  const std::string &dst = fc.path.value;
  std::string out = "diff --git a/" + src + " b/" + dst + "\n";
  switch (fc.kind) {
  case ChangeKind::added:
    out += "new file mode 100644\n";
    break;
  case ChangeKind::deleted:
    out += "deleted file mode 100644\n";
    break;
  case ChangeKind::renamed:
    out += "rename from " + src + "\nrename to " + dst + "\n";
    break;
  case ChangeKind::modified:
    break;
  }
  if (fc.binary) {
    out += "Binary files " +
           (fc.kind == ChangeKind::added ? std::string("/dev/null")
                                         : "a/" + src) +
           " and " +
           (fc.kind == ChangeKind::deleted ? std::string("/dev/null")
                                           : "b/" + dst) +
           " differ\n";
    return out;
  }
  if (fc.hunks.empty())
    return out;
  out += fc.kind == ChangeKind::added ? "--- /dev/null\n" : "--- a/" + src + "\n";
  out += fc.kind == ChangeKind::deleted ? "+++ /dev/null\n" : "+++ b/" + dst + "\n";
  render_hunks(out, fc, context);
  return out;
}

std::string render_patch(const Commit &commit,
                         const std::vector<const FileChange *> &files,
                         bool split, std::size_t index, std::size_t total,
                         std::size_t context) {
  std::string subject = commit.message.substr(0, commit.message.find('\n'));
  std::string body;
  if (auto nl = commit.message.find('\n'); nl != std::string::npos) {
    body = commit.message.substr(nl + 1);
    body.erase(0, body.find_first_not_of('\n') == std::string::npos
                      ? body.size()
                      : body.find_first_not_of('\n'));
  }
  if (split)
    subject += " [split]";

  std::string out = "From " + commit.id.value + " Mon Sep 17 00:00:00 2001\n";
  out += "From: " + (commit.author.empty() ? std::string("unknown") : commit.author) +
         "\n";
  out += "Date: " + format_date(commit.timestamp) + "\n";
  out += "Subject: [PATCH " + std::to_string(index) + "/" +
         std::to_string(total) + "] " + subject + "\n\n";
  if (!body.empty()) {
    out += body;
    if (out.back() != '\n')
      out += '\n';
    out += '\n';
  }
  out += "---\n";
  for (const FileChange *fc : files)
    out += render_file_diff(*fc, context);
  return out;
}

std::vector<PatchFile> render_series(const History &history,
                                     const HistorySlice &slice,
                                     std::size_t context) {
  std::vector<PatchFile> out;
  const std::size_t total = slice.commits.size();
  for (std::size_t i = 0; i < total; ++i) {
    const SliceCommit &sc = slice.commits[i];
    const Commit &commit = history.commit(sc.source);
    std::vector<const FileChange *> files;
    for (const auto &fc : commit.file_changes) {
      bool keep = fc.binary
                      ? !sc.split
                      : std::binary_search(sc.included_files.begin(),
                                           sc.included_files.end(), fc.path);
      if (keep)
        files.push_back(&fc);
    }
    std::string subject = commit.message.substr(0, commit.message.find('\n'));
    char prefix[32];
    std::snprintf(prefix, sizeof prefix, "%04zu-", i + 1);
    out.push_back({prefix + slug(subject) + ".patch",
                   render_patch(commit, files, sc.split, i + 1, total, context)});
  }
  return out;
}

namespace {

struct ParsedHunk {
  std::size_t old_start = 0;
  std::size_t old_len = 0;
  std::vector<std::string> old_lines;
  std::vector<std::string> new_lines;
  bool old_missing_newline = false;
  bool new_missing_newline = false;
};

struct ParsedFile {
  std::string old_path;
  std::string new_path;
  bool added = false;
  bool deleted = false;
  bool renamed = false;
  bool binary = false;
  std::vector<ParsedHunk> hunks;
};

struct ParsedPatch {
  std::string commit;
  std::vector<ParsedFile> files;
};

bool starts_with(std::string_view s, std::string_view p) {
  return s.substr(0, p.size()) == p;
}

ParsedPatch parse_patch(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos < text.size();) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos)
      nl = text.size();
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  ParsedPatch patch;
  std::size_t i = 0;
  if (!lines.empty() && starts_with(lines[0], "From ")) {
    std::string_view rest = lines[0].substr(5);
    patch.commit = std::string(rest.substr(0, rest.find(' ')));
  }
  auto malformed = [&](const std::string &why) {
    return PatchConflict(patch.commit, "", "malformed patch: " + why);
  };
  while (i < lines.size() && !starts_with(lines[i], "diff --git "))
    ++i;
  while (i < lines.size()) {
    if (!starts_with(lines[i], "diff --git "))
      throw malformed("expected a diff header");
    ParsedFile file;
    {
      std::string_view header = lines[i].substr(11);
      std::size_t split = header.find(" b/");
      if (!starts_with(header, "a/") || split == std::string_view::npos)
        throw malformed("bad diff header");
      file.old_path = std::string(header.substr(2, split - 2));
      file.new_path = std::string(header.substr(split + 3));
    }
    ++i;
    while (i < lines.size() && !starts_with(lines[i], "diff --git ")) {
      std::string_view l = lines[i];
      if (starts_with(l, "new file mode")) {
        file.added = true;
      } else if (starts_with(l, "deleted file mode")) {
        file.deleted = true;
      } else if (starts_with(l, "rename from ")) {
        file.renamed = true;
        file.old_path = std::string(l.substr(12));
      } else if (starts_with(l, "rename to ")) {
        file.new_path = std::string(l.substr(10));
      } else if (starts_with(l, "Binary files ")) {
        file.binary = true;
      } else if (starts_with(l, "--- ") || starts_with(l, "+++ ")) {
        // paths already known from the header
      } else if (starts_with(l, "@@ -")) {
        ParsedHunk h;
        std::size_t a = 0, b = 0, c = 0, d = 0;
        if (std::sscanf(std::string(l).c_str(), "@@ -%zu,%zu +%zu,%zu @@", &a,
                        &b, &c, &d) != 4)
          throw malformed("bad hunk header");
        h.old_start = b == 0 ? a + 1 : a;
        h.old_len = b;
        std::size_t seen_old = 0, seen_new = 0;
        char last_tag = 0;
        ++i;
        while (i < lines.size() && (seen_old < b || seen_new < d ||
                                    (i < lines.size() && starts_with(lines[i], "\\")))) {
          std::string_view body = lines[i];
          if (body.empty())
            throw malformed("empty hunk line");
          char tag = body[0];
          std::string content(body.substr(1));
          if (tag == '\\') {
            if (last_tag == ' ' || last_tag == '-')
              h.old_missing_newline = true;
            if (last_tag == ' ' || last_tag == '+')
              h.new_missing_newline = true;
          } else if (tag == ' ') {
            h.old_lines.push_back(content);
            h.new_lines.push_back(std::move(content));
            ++seen_old;
            ++seen_new;
          } else if (tag == '-') {
            h.old_lines.push_back(std::move(content));
            ++seen_old;
          } else if (tag == '+') {
            h.new_lines.push_back(std::move(content));
            ++seen_new;
          } else {
            throw malformed("bad hunk line");
          }
          last_tag = tag;
          ++i;
        }
        if (seen_old != b || seen_new != d)
          throw malformed("truncated hunk");
        file.hunks.push_back(std::move(h));
        continue;
      }
      ++i;
    }
    patch.files.push_back(std::move(file));
  }
  return patch;
}

bool block_matches(const TextLines &text, std::size_t at,
                   const ParsedHunk &h) {
  const auto &lines = text.lines;
  if (at < 1 || at - 1 + h.old_lines.size() > lines.size())
    return false;
  for (std::size_t k = 0; k < h.old_lines.size(); ++k)
    if (lines[at - 1 + k] != h.old_lines[k])
      return false;
  const bool at_end = at - 1 + h.old_lines.size() == lines.size();
  if (h.old_missing_newline && !(at_end && text.missing_newline))
    return false;
  if (at_end && !h.old_lines.empty() && text.missing_newline &&
      !h.old_missing_newline)
    return false;
  return true;
}

std::optional<TextLines> apply_hunks_fuzzy(TextLines text,
                                           const std::vector<ParsedHunk> &hunks) {
  long shift = 0;
  std::size_t floor = 1; // first line a later hunk may touch
  for (const auto &h : hunks) {
    const long expected = long(h.old_start) + shift;
    const long lo = long(floor);
    const long hi = long(text.lines.size()) + 1 - long(h.old_lines.size());
    std::optional<long> found;
    for (long d = 0; !found && (expected - d >= lo || expected + d <= hi); ++d) {
      for (long at : {expected - d, expected + d}) {
        if (at >= lo && at <= hi && block_matches(text, std::size_t(at), h)) {
          found = at;
          break;
        }
      }
    }
    if (!found)
      return std::nullopt;
    const std::size_t at = std::size_t(*found);
    const bool at_end = at - 1 + h.old_lines.size() == text.lines.size();
    text.lines.erase(text.lines.begin() + long(at - 1),
                     text.lines.begin() + long(at - 1 + h.old_lines.size()));
    text.lines.insert(text.lines.begin() + long(at - 1), h.new_lines.begin(),
                      h.new_lines.end());
    if (at_end)
      text.missing_newline = h.new_missing_newline;
    shift += *found - expected + long(h.new_lines.size()) - long(h.old_lines.size());
    floor = at + h.new_lines.size();
  }
  return text;
}

} // namespace

void apply_patch(Snapshot &snapshot, std::string_view patch_text) {
  ParsedPatch patch = parse_patch(patch_text);
  for (const auto &file : patch.files) {
    auto conflict = [&](const std::string &path, const std::string &why) {
      return PatchConflict(patch.commit, path,
                           "patch " + patch.commit + " does not apply to " +
                               path + ": " + why);
    };
    FilePath src{file.old_path}, dst{file.new_path};
    if (file.added) {
      if (snapshot.count(dst))
        throw conflict(dst.value, "file already exists");
      if (file.binary) {
        snapshot[dst] = {};
        continue;
      }
      auto result = apply_hunks_fuzzy(TextLines{}, file.hunks);
      if (!result)
        throw conflict(dst.value, "hunk does not apply");
      snapshot[dst] = join_lines(*result);
      continue;
    }
    auto it = snapshot.find(src);
    if (it == snapshot.end())
      throw conflict(src.value, "file does not exist");
    if (file.binary) {
      std::string content = std::move(it->second);
      snapshot.erase(it);
      if (!file.deleted)
        snapshot[dst] = std::move(content);
      continue;
    }
    auto result = apply_hunks_fuzzy(split_lines(it->second), file.hunks);
    if (!result)
      throw conflict(src.value, "hunk does not apply");
    if (file.deleted) {
      if (!result->lines.empty())
        throw conflict(src.value, "deleted file has remaining lines");
      snapshot.erase(it);
      continue;
    }
    if (file.renamed) {
      if (dst != src && snapshot.count(dst))
        throw conflict(dst.value, "rename target already exists");
      snapshot.erase(it);
    }
    snapshot[dst] = join_lines(*result);
  }
}

std::vector<PatchFile> materialize(const History &history,
                                   const HistorySlice &slice,
                                   const std::filesystem::path &out_dir,
                                   std::size_t context) {
  std::vector<PatchFile> series = render_series(history, slice, context);
  Snapshot snapshot = history.base_snapshot();
  for (const auto &p : series)
    apply_patch(snapshot, p.text);

  std::filesystem::create_directories(out_dir);
  for (const auto &p : series) {
    std::ofstream out(out_dir / p.name, std::ios::binary);
    out << p.text;
    if (!out)
      throw InputError("cannot write " + (out_dir / p.name).string());
  }
  return series;
}

} // namespace histslice

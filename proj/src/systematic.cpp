#include "histslice/systematic.hpp"

#include "histslice/parallel.hpp"

namespace histslice {

std::string_view to_string(SystematicKind kind) {
  switch (kind) {
  case SystematicKind::ast_systematic:
    return "ast_systematic";
  case SystematicKind::whitespace_or_comment_only:
    return "whitespace_or_comment_only";
  case SystematicKind::non_systematic:
    return "non_systematic";
  }
  return "?";
}

MemberKey non_member_key() { return MemberKey{{}, MemberKind::non_member, {}}; }

SystematicVerdict classify(const CommitEditSummary &summary) {
  SystematicVerdict v;
  v.commit = summary.commit;

  if (!summary.unparseable_files.empty()) {
    v.reason = "unparseable file " + summary.unparseable_files.front().value;
    return v;
  }
  if (!summary.whole_file_changes.empty()) {
    v.reason = "whole-file change " + summary.whole_file_changes.front().value;
    return v;
  }
  if (summary.syntax_identical) {
    v.kind = SystematicKind::whitespace_or_comment_only;
    v.splittable = summary.file_count >= 2;
    v.reason = "no syntax tree differences";
    return v;
  }

  std::vector<std::pair<MemberKey, const ScriptSet *>> members;
  for (const auto &[key, scripts] : summary.per_member)
    members.emplace_back(key, &scripts);
  if (!summary.non_member_scripts.empty())
    members.emplace_back(non_member_key(), &summary.non_member_scripts);

  if (members.empty()) {
    v.reason = "no member changes";
    return v;
  }
  const ScriptSet &first = *members.front().second;
  for (std::size_t i = 1; i < members.size(); ++i) {
    if (*members[i].second != first) {
      v.witness = std::make_pair(members.front().first, members[i].first);
      v.reason = "script sets differ";
      return v;
    }
  }
  if (first.empty()) {
    v.reason = "empty script set";
    return v;
  }
  v.kind = SystematicKind::ast_systematic;
  v.splittable = summary.file_count >= 2;
  v.uniform_script_set = first;
  v.reason = members.size() == 1 ? "single changed member"
                                 : "uniform edits across members";
  return v;
}

std::map<CommitId, SystematicVerdict> detect_all(const History &history) {
  const auto &commits = history.commits();
  std::vector<SystematicVerdict> verdicts(commits.size());
  parallel_for(commits.size(), [&](std::size_t i) {
    verdicts[i] = classify(summarize_commit(commits[i]));
  });
  std::map<CommitId, SystematicVerdict> out;
  for (auto &v : verdicts)
    out.emplace(v.commit, std::move(v));
  return out;
}

} // namespace histslice

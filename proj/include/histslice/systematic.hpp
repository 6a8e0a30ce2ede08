#pragma once

#include "histslice/edit_scripts.hpp"
#include "histslice/history.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>

namespace histslice {

enum class SystematicKind { ast_systematic, whitespace_or_comment_only, non_systematic };

std::string_view to_string(SystematicKind kind);

struct SystematicVerdict {
  CommitId commit;
  SystematicKind kind = SystematicKind::non_systematic;
  bool splittable = false;
  /// Two members whose script sets differ (non-systematic commits only).
  std::optional<std::pair<MemberKey, MemberKey>> witness;
  /// The script set shared by every changed member (AST-systematic only).
  std::optional<ScriptSet> uniform_script_set;
  /// Short human-readable explanation of the verdict.
  std::string reason;
};

/// Key under which non-member scripts take part in the uniformity check.
MemberKey non_member_key();

SystematicVerdict classify(const CommitEditSummary &summary);

/// One verdict per commit; commits are summarized in parallel.
std::map<CommitId, SystematicVerdict> detect_all(const History &history);

} // namespace histslice

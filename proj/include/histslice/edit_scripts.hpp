#pragma once

#include "histslice/history.hpp"
#include "histslice/syntax_tree.hpp"
#include "histslice/tree_diff.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace histslice {

enum class MemberKind {
  method,
  constructor,
  field,
  initializer,
  type_level,
  non_member, ///< package, imports and other top-level churn
};

std::string_view to_string(MemberKind kind);

/// Identifies one declaration in one file. The signature is built from names
/// and parameter types only, so it survives reformatting.
struct MemberKey {
  FilePath file;
  MemberKind kind = MemberKind::non_member;
  std::string signature;

  auto operator<=>(const MemberKey &) const = default;
};

std::string to_string(const MemberKey &key);

/// A fine-grained change with its location erased.
struct AbstractEditScript {
  EditType change_type = EditType::insert;
  std::string before_fragment;
  std::string after_fragment;
  NodeKind node_kind = NodeKind::Opaque;

  auto operator<=>(const AbstractEditScript &) const = default;
};

using ScriptSet = std::set<AbstractEditScript>;

std::string to_string(const AbstractEditScript &script);

struct CommitEditSummary {
  CommitId commit;
  std::size_t file_count = 0; ///< changed files, binaries included
  std::map<MemberKey, ScriptSet> per_member;
  ScriptSet non_member_scripts;
  bool syntax_identical = false;
  /// Changed source files that failed to parse on either side.
  std::vector<FilePath> unparseable_files;
  /// Files that cannot be compared member by member: additions, deletions,
  /// renames, binaries and non-source files.
  std::vector<FilePath> whole_file_changes;
};

/// Signature key of the innermost member enclosing `node` (inclusive).
MemberKey enclosing_member(const SyntaxTree &tree, NodeId node,
                           const FilePath &file);

/// Abstracts each raw op and groups it by the member that encloses the
/// changed node: in the before tree for deletes, updates and moves, in the
/// after tree for inserts.
std::map<MemberKey, ScriptSet> abstract_scripts(const TreeDiff &diff,
                                                const SyntaxTree &before,
                                                const SyntaxTree &after,
                                                const FilePath &file);

AbstractEditScript abstract_op(const EditOp &op, const SyntaxTree &before,
                               const SyntaxTree &after);

/// True for files the parser is meant to understand.
bool is_source_file(const FilePath &path);

CommitEditSummary summarize_commit(const Commit &commit);
CommitEditSummary summarize_commit(const History &history, const CommitId &id);

} // namespace histslice

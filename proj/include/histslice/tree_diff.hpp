#pragma once

#include "histslice/syntax_tree.hpp"

#include <string>
#include <vector>

namespace histslice {

enum class EditType { insert, remove, update, move };

std::string_view to_string(EditType type);

/// One node-level operation on the working copy of the before-tree.
///
/// Node ids live in the working id space: ids below the before-tree's size
/// name before-tree nodes, larger ids name nodes created by earlier inserts
/// (assigned in order, starting at before.size()).
struct EditOp {
  EditType type = EditType::insert;
  NodeId node = kNoNode;       ///< working id of the node acted on
  NodeId parent = kNoNode;     ///< insert/move: new parent (working id)
  std::size_t position = 0;    ///< insert/move: index among the new siblings
  NodeKind kind = NodeKind::Opaque; ///< insert: kind of the new node
  std::string label;           ///< insert/update: new label
  NodeId before_node = kNoNode; ///< remove/update/move: node in `before`
  NodeId after_node = kNoNode;  ///< insert/update/move: node in `after`
};

struct TreeDiff {
  std::vector<EditOp> ops;
  /// before node -> matched after node (kNoNode when unmatched).
  std::vector<NodeId> before_to_after;
  /// after node -> matched before node (kNoNode when unmatched).
  std::vector<NodeId> after_to_before;
};

/// Matches the two trees (identical subtrees top-down, similar containers
/// bottom-up, then a per-parent recovery pass) and derives an edit script
/// from the matching. Throws DiffOnUnparseable if either tree is flagged
/// unparseable. Deterministic.
TreeDiff tree_diff(const SyntaxTree &before, const SyntaxTree &after);

/// Replays `ops` on a copy of `before`. The result carries kinds and labels
/// only (no tokens). Throws std::invalid_argument on an ill-formed op.
SyntaxTree apply_edit_ops(const SyntaxTree &before,
                          const std::vector<EditOp> &ops);

} // namespace histslice

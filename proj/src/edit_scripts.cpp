#include "histslice/edit_scripts.hpp"

#include "histslice/error.hpp"

#include <functional>

namespace histslice {

std::string_view to_string(MemberKind kind) {
  switch (kind) {
  case MemberKind::method:
    return "method";
  case MemberKind::constructor:
    return "constructor";
  case MemberKind::field:
    return "field";
  case MemberKind::initializer:
    return "initializer";
  case MemberKind::type_level:
    return "type-level";
  case MemberKind::non_member:
    return "non-member";
  }
  return "?";
}

std::string to_string(const MemberKey &key) {
  std::string out = key.file.value;
  out += '#';
  out += to_string(key.kind);
  if (!key.signature.empty()) {
    out += ':';
    out += key.signature;
  }
  return out;
}

std::string to_string(const AbstractEditScript &script) {
  std::string out{to_string(script.change_type)};
  out += ' ';
  out += to_string(script.node_kind);
  out += " \"" + script.before_fragment + "\" -> \"" + script.after_fragment +
         "\"";
  return out;
}

namespace {

NodeId child_of_kind(const SyntaxTree &tree, NodeId id, NodeKind kind) {
  for (NodeId c : tree.node(id).children)
    if (tree.node(c).kind == kind)
      return c;
  return kNoNode;
}

bool is_anonymous_class(const SyntaxTree &tree, NodeId id) {
  return tree.node(id).kind == NodeKind::New &&
         child_of_kind(tree, id, NodeKind::TypeBody) != kNoNode;
}

std::optional<MemberKind> scope_kind(const SyntaxTree &tree, NodeId id) {
  switch (tree.node(id).kind) {
  case NodeKind::TypeDecl:
    return MemberKind::type_level;
  case NodeKind::MethodDecl:
    return MemberKind::method;
  case NodeKind::CtorDecl:
    return MemberKind::constructor;
  case NodeKind::FieldDecl:
  case NodeKind::EnumConstant:
    return MemberKind::field;
  case NodeKind::Initializer:
    return MemberKind::initializer;
  case NodeKind::New:
    if (is_anonymous_class(tree, id))
      return MemberKind::type_level;
    return std::nullopt;
  default:
    return std::nullopt;
  }
}

std::string parameter_types(const SyntaxTree &tree, NodeId decl) {
  std::string out = "(";
  NodeId params = child_of_kind(tree, decl, NodeKind::Params);
  if (params != kNoNode) {
    bool first = true;
    for (NodeId p : tree.node(params).children) {
      if (!first)
        out += ',';
      first = false;
      NodeId ty = child_of_kind(tree, p, NodeKind::TypeRef);
      if (ty != kNoNode)
        out += tree.node(ty).label;
    }
  }
  return out + ")";
}

// Position of `id` among the earlier nodes of `scope` that render to the
// same segment text, so repeated initializers and anonymous classes get
// distinct keys.
std::size_t ordinal_within(const SyntaxTree &tree, NodeId scope, NodeId id,
                           const std::function<bool(NodeId)> &same) {
  std::size_t n = 0;
  std::vector<NodeId> stack{scope};
  while (!stack.empty()) {
    NodeId cur = stack.back();
    stack.pop_back();
    if (cur == id)
      return n;
    if (cur != scope && same(cur))
      ++n;
    const auto &ch = tree.node(cur).children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it)
      stack.push_back(*it);
  }
  return n;
}

std::string segment(const SyntaxTree &tree, NodeId id, NodeId scope) {
  const Node &n = tree.node(id);
  switch (n.kind) {
  case NodeKind::TypeDecl: {
    NodeId name = child_of_kind(tree, id, NodeKind::Name);
    return name == kNoNode ? std::string("?") : tree.node(name).label;
  }
  case NodeKind::MethodDecl: {
    NodeId name = child_of_kind(tree, id, NodeKind::Name);
    return (name == kNoNode ? std::string("?") : tree.node(name).label) +
           parameter_types(tree, id);
  }
  case NodeKind::CtorDecl:
    return "<init>" + parameter_types(tree, id);
  case NodeKind::FieldDecl: {
    std::string out;
    for (NodeId c : n.children)
      if (tree.node(c).kind == NodeKind::VarDeclarator) {
        if (!out.empty())
          out += ',';
        out += tree.node(c).label;
      }
    return out;
  }
  case NodeKind::EnumConstant:
    return n.label;
  case NodeKind::Initializer: {
    std::string base = n.label == "static" ? "<clinit>" : "<instance>";
    std::size_t k = ordinal_within(tree, n.parent, id, [&](NodeId other) {
      return tree.node(other).kind == NodeKind::Initializer &&
             tree.node(other).parent == n.parent &&
             tree.node(other).label == n.label;
    });
    return base + "#" + std::to_string(k);
  }
  case NodeKind::New: {
    NodeId ty = child_of_kind(tree, id, NodeKind::TypeRef);
    std::string label = ty == kNoNode ? std::string() : tree.node(ty).label;
    std::size_t k = 0;
    if (scope != kNoNode)
      k = ordinal_within(tree, scope, id, [&](NodeId other) {
        if (!is_anonymous_class(tree, other))
          return false;
        NodeId oty = child_of_kind(tree, other, NodeKind::TypeRef);
        return oty != kNoNode && tree.node(oty).label == label;
      });
    return "new " + label + "#" + std::to_string(k);
  }
  default:
    return {};
  }
}

std::string fragment_or_kind(const SyntaxTree &tree, NodeId id) {
  std::string text = tree.fragment(id);
  if (text.empty())
    return "<" + std::string(to_string(tree.node(id).kind)) + ">";
  return text;
}

} // namespace

MemberKey enclosing_member(const SyntaxTree &tree, NodeId node,
                           const FilePath &file) {
  std::vector<NodeId> scopes;
  for (NodeId cur = node; cur != kNoNode; cur = tree.node(cur).parent) {
    if (cur == node && tree.node(cur).kind == NodeKind::New)
      continue; // an anonymous class expression belongs to its user
    if (scope_kind(tree, cur))
      scopes.push_back(cur);
  }
  MemberKey key;
  key.file = file;
  if (scopes.empty())
    return key;
  key.kind = *scope_kind(tree, scopes.front());
  for (std::size_t i = scopes.size(); i-- > 0;) {
    NodeId outer = i + 1 < scopes.size() ? scopes[i + 1] : kNoNode;
    if (!key.signature.empty())
      key.signature += '.';
    key.signature += segment(tree, scopes[i], outer);
  }
  return key;
}

bool is_source_file(const FilePath &path) {
  const std::string &p = path.value;
  return p.size() > 5 && p.compare(p.size() - 5, 5, ".java") == 0;
}

AbstractEditScript abstract_op(const EditOp &op, const SyntaxTree &before,
                               const SyntaxTree &after) {
  AbstractEditScript s;
  s.change_type = op.type;
  switch (op.type) {
  case EditType::insert:
    s.after_fragment = fragment_or_kind(after, op.after_node);
    s.node_kind = after.node(op.after_node).kind;
    break;
  case EditType::remove:
    s.before_fragment = fragment_or_kind(before, op.before_node);
    s.node_kind = before.node(op.before_node).kind;
    break;
  case EditType::update:
  case EditType::move:
    s.before_fragment = fragment_or_kind(before, op.before_node);
    s.after_fragment = fragment_or_kind(after, op.after_node);
    s.node_kind = before.node(op.before_node).kind;
    break;
  }
  return s;
}

std::map<MemberKey, ScriptSet> abstract_scripts(const TreeDiff &diff,
                                                const SyntaxTree &before,
                                                const SyntaxTree &after,
                                                const FilePath &file) {
  std::map<MemberKey, ScriptSet> out;
  for (const auto &op : diff.ops) {
    MemberKey key = op.type == EditType::insert
                        ? enclosing_member(after, op.after_node, file)
                        : enclosing_member(before, op.before_node, file);
    out[key].insert(abstract_op(op, before, after));
  }
  return out;
}

CommitEditSummary summarize_commit(const Commit &commit) {
  CommitEditSummary summary;
  summary.commit = commit.id;
  summary.file_count = commit.file_changes.size();
  for (const auto &fc : commit.file_changes) {
    if (fc.binary || fc.kind != ChangeKind::modified ||
        !is_source_file(fc.path) || !fc.before || !fc.after) {
      summary.whole_file_changes.push_back(fc.path);
      continue;
    }
    SyntaxTree before = parse(join_lines(*fc.before));
    SyntaxTree after = parse(join_lines(*fc.after));
    if (!before.parseable() || !after.parseable()) {
      summary.unparseable_files.push_back(fc.path);
      continue;
    }
    TreeDiff diff = tree_diff(before, after);
    if (diff.ops.empty())
      continue;
    for (auto &[key, scripts] : abstract_scripts(diff, before, after, fc.path)) {
      if (key.kind == MemberKind::non_member)
        summary.non_member_scripts.insert(scripts.begin(), scripts.end());
      else
        summary.per_member[key].insert(scripts.begin(), scripts.end());
    }
  }
  summary.syntax_identical = summary.whole_file_changes.empty() &&
                             summary.unparseable_files.empty() &&
                             summary.per_member.empty() &&
                             summary.non_member_scripts.empty();
  return summary;
}

CommitEditSummary summarize_commit(const History &history, const CommitId &id) {
  return summarize_commit(history.commit(id));
}

} // namespace histslice

#include "histslice/syntax_tree.hpp"

#include <functional>

namespace histslice {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
  case NodeKind::CompilationUnit:
    return "CompilationUnit";
  case NodeKind::PackageDecl:
    return "PackageDecl";
  case NodeKind::ImportDecl:
    return "ImportDecl";
  case NodeKind::TypeDecl:
    return "TypeDecl";
  case NodeKind::TypeBody:
    return "TypeBody";
  case NodeKind::TypeParams:
    return "TypeParams";
  case NodeKind::Extends:
    return "Extends";
  case NodeKind::Implements:
    return "Implements";
  case NodeKind::EnumConstant:
    return "EnumConstant";
  case NodeKind::Modifiers:
    return "Modifiers";
  case NodeKind::Modifier:
    return "Modifier";
  case NodeKind::Annotation:
    return "Annotation";
  case NodeKind::Name:
    return "Name";
  case NodeKind::TypeRef:
    return "TypeRef";
  case NodeKind::FieldDecl:
    return "FieldDecl";
  case NodeKind::VarDeclarator:
    return "VarDeclarator";
  case NodeKind::MethodDecl:
    return "MethodDecl";
  case NodeKind::CtorDecl:
    return "CtorDecl";
  case NodeKind::Params:
    return "Params";
  case NodeKind::Param:
    return "Param";
  case NodeKind::Throws:
    return "Throws";
  case NodeKind::Initializer:
    return "Initializer";
  case NodeKind::Block:
    return "Block";
  case NodeKind::LocalVarDecl:
    return "LocalVarDecl";
  case NodeKind::LocalTypeDecl:
    return "LocalTypeDecl";
  case NodeKind::ExprStmt:
    return "ExprStmt";
  case NodeKind::If:
    return "If";
  case NodeKind::While:
    return "While";
  case NodeKind::DoWhile:
    return "DoWhile";
  case NodeKind::For:
    return "For";
  case NodeKind::ForInit:
    return "ForInit";
  case NodeKind::ForUpdate:
    return "ForUpdate";
  case NodeKind::ForEach:
    return "ForEach";
  case NodeKind::Return:
    return "Return";
  case NodeKind::Throw:
    return "Throw";
  case NodeKind::Break:
    return "Break";
  case NodeKind::Continue:
    return "Continue";
  case NodeKind::Try:
    return "Try";
  case NodeKind::Resources:
    return "Resources";
  case NodeKind::Catch:
    return "Catch";
  case NodeKind::Finally:
    return "Finally";
  case NodeKind::Switch:
    return "Switch";
  case NodeKind::SwitchCase:
    return "SwitchCase";
  case NodeKind::Synchronized:
    return "Synchronized";
  case NodeKind::Labeled:
    return "Labeled";
  case NodeKind::Assert:
    return "Assert";
  case NodeKind::EmptyStmt:
    return "EmptyStmt";
  case NodeKind::Assign:
    return "Assign";
  case NodeKind::Conditional:
    return "Conditional";
  case NodeKind::Binary:
    return "Binary";
  case NodeKind::Unary:
    return "Unary";
  case NodeKind::Postfix:
    return "Postfix";
  case NodeKind::Cast:
    return "Cast";
  case NodeKind::InstanceOf:
    return "InstanceOf";
  case NodeKind::MethodCall:
    return "MethodCall";
  case NodeKind::Args:
    return "Args";
  case NodeKind::FieldAccess:
    return "FieldAccess";
  case NodeKind::ArrayAccess:
    return "ArrayAccess";
  case NodeKind::New:
    return "New";
  case NodeKind::NewArray:
    return "NewArray";
  case NodeKind::ArrayInit:
    return "ArrayInit";
  case NodeKind::Literal:
    return "Literal";
  case NodeKind::Identifier:
    return "Identifier";
  case NodeKind::This:
    return "This";
  case NodeKind::Super:
    return "Super";
  case NodeKind::Lambda:
    return "Lambda";
  case NodeKind::MethodRef:
    return "MethodRef";
  case NodeKind::ClassLiteral:
    return "ClassLiteral";
  case NodeKind::Parens:
    return "Parens";
  case NodeKind::Opaque:
    return "Opaque";
  case NodeKind::Unparseable:
    return "Unparseable";
  }
  return "?";
}

NodeId SyntaxTree::add_node(NodeKind kind, std::string label) {
  Node n;
  n.kind = kind;
  n.label = std::move(label);
  nodes_.push_back(std::move(n));
  return NodeId(nodes_.size() - 1);
}

void SyntaxTree::add_child(NodeId parent, NodeId child) {
  nodes_[parent].children.push_back(child);
  nodes_[child].parent = parent;
}

std::string SyntaxTree::fragment(NodeId id) const {
  const Node &n = nodes_[id];
  std::string out;
  for (std::uint32_t t = n.first_token; t < n.end_token && t < tokens_.size();
       ++t) {
    if (t != n.first_token && tokens_[t].space_before)
      out.push_back(' ');
    out += tokens_[t].text;
  }
  return out;
}

void SyntaxTree::compute_spans() {
  for (NodeId id : preorder()) {
    Node &n = nodes_[id];
    if (n.end_token > n.first_token && n.end_token <= tokens_.size()) {
      n.start_line = tokens_[n.first_token].line;
      n.end_line = tokens_[n.end_token - 1].line;
    } else if (n.parent != kNoNode) {
      n.start_line = n.end_line = nodes_[n.parent].start_line;
    }
  }
}

std::vector<NodeId> SyntaxTree::preorder() const {
  std::vector<NodeId> out;
  if (root_ == kNoNode)
    return out;
  std::vector<NodeId> stack{root_};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    out.push_back(id);
    const auto &ch = nodes_[id].children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it)
      stack.push_back(*it);
  }
  return out;
}

std::vector<NodeId> SyntaxTree::postorder() const {
  std::vector<NodeId> out;
  if (root_ == kNoNode)
    return out;
  std::vector<std::pair<NodeId, std::size_t>> stack{{root_, 0}};
  while (!stack.empty()) {
    auto &[id, next] = stack.back();
    const auto &ch = nodes_[id].children;
    if (next < ch.size()) {
      NodeId child = ch[next++];
      stack.emplace_back(child, 0);
    } else {
      out.push_back(id);
      stack.pop_back();
    }
  }
  return out;
}

std::string SyntaxTree::dump() const {
  std::string out;
  std::function<void(NodeId, int)> rec = [&](NodeId id, int depth) {
    const Node &n = nodes_[id];
    out.append(std::size_t(depth) * 2, ' ');
    out += to_string(n.kind);
    if (!n.label.empty())
      out += ": " + n.label;
    out += "\n";
    for (NodeId c : n.children)
      rec(c, depth + 1);
  };
  if (root_ != kNoNode)
    rec(root_, 0);
  return out;
}

bool isomorphic(const SyntaxTree &a, NodeId na, const SyntaxTree &b,
                NodeId nb) {
  std::vector<std::pair<NodeId, NodeId>> stack{{na, nb}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    const Node &nx = a.node(x);
    const Node &ny = b.node(y);
    if (nx.kind != ny.kind || nx.label != ny.label ||
        nx.children.size() != ny.children.size())
      return false;
    for (std::size_t i = 0; i < nx.children.size(); ++i)
      stack.emplace_back(nx.children[i], ny.children[i]);
  }
  return true;
}

bool isomorphic(const SyntaxTree &a, const SyntaxTree &b) {
  if (a.root() == kNoNode || b.root() == kNoNode)
    return a.root() == b.root();
  return isomorphic(a, a.root(), b, b.root());
}

} // namespace histslice

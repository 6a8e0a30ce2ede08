#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace histslice {

enum class NodeKind : std::uint8_t {
  CompilationUnit,
  PackageDecl,
  ImportDecl,
  TypeDecl,
  TypeBody,
  TypeParams,
  Extends,
  Implements,
  EnumConstant,
  Modifiers,
  Modifier,
  Annotation,
  Name,
  TypeRef,
  FieldDecl,
  VarDeclarator,
  MethodDecl,
  CtorDecl,
  Params,
  Param,
  Throws,
  Initializer,
  Block,
  LocalVarDecl,
  LocalTypeDecl,
  ExprStmt,
  If,
  While,
  DoWhile,
  For,
  ForInit,
  ForUpdate,
  ForEach,
  Return,
  Throw,
  Break,
  Continue,
  Try,
  Resources,
  Catch,
  Finally,
  Switch,
  SwitchCase,
  Synchronized,
  Labeled,
  Assert,
  EmptyStmt,
  Assign,
  Conditional,
  Binary,
  Unary,
  Postfix,
  Cast,
  InstanceOf,
  MethodCall,
  Args,
  FieldAccess,
  ArrayAccess,
  New,
  NewArray,
  ArrayInit,
  Literal,
  Identifier,
  This,
  Super,
  Lambda,
  MethodRef,
  ClassLiteral,
  Parens,
  Opaque,
  Unparseable,
};

std::string_view to_string(NodeKind kind);

enum class TokenKind : std::uint8_t { Ident, Keyword, Number, String, Char, Op, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  std::uint32_t line = 0;
  bool space_before = false; ///< whitespace or a comment precedes the token
};

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct Node {
  NodeKind kind = NodeKind::Opaque;
  std::string label;
  NodeId parent = kNoNode;
  std::vector<NodeId> children;
  std::uint32_t first_token = 0; ///< token range [first_token, end_token)
  std::uint32_t end_token = 0;
  std::uint32_t start_line = 0;
  std::uint32_t end_line = 0;
};

/// A parsed source file. Nodes are stored in creation order; the root is not
/// necessarily node 0.
class SyntaxTree {
public:
  NodeId add_node(NodeKind kind, std::string label = {});
  void add_child(NodeId parent, NodeId child);
  /// Drops every node created at or after `count` (parser backtracking).
  void truncate(std::size_t count) { nodes_.resize(count); }

  const Node &node(NodeId id) const { return nodes_[id]; }
  Node &node(NodeId id) { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }

  NodeId root() const { return root_; }
  void set_root(NodeId id) { root_ = id; }

  bool parseable() const { return parseable_; }
  void set_parseable(bool value) { parseable_ = value; }

  const std::vector<Token> &tokens() const { return tokens_; }
  void set_tokens(std::vector<Token> tokens) { tokens_ = std::move(tokens); }

  /// Source text of the node with comments dropped and every whitespace run
  /// collapsed to one space.
  std::string fragment(NodeId id) const;

  /// Fills in line spans from token ranges; empty nodes inherit their
  /// parent's start line.
  void compute_spans();

  std::vector<NodeId> preorder() const;
  std::vector<NodeId> postorder() const;

  /// Indented "Kind: label" dump, one node per line.
  std::string dump() const;

private:
  std::vector<Node> nodes_;
  std::vector<Token> tokens_;
  NodeId root_ = kNoNode;
  bool parseable_ = true;
};

/// Ordered, labelled tree equality (spans and tokens are ignored).
bool isomorphic(const SyntaxTree &a, NodeId na, const SyntaxTree &b, NodeId nb);
bool isomorphic(const SyntaxTree &a, const SyntaxTree &b);

/// Lexes and parses a Java-subset compilation unit. Never throws: input that
/// does not fit the grammar yields a single Unparseable node and
/// parseable() == false.
SyntaxTree parse(std::string_view source);

} // namespace histslice

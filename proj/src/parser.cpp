// Recursive-descent parser for the Java subset the corpus uses: type, field,
// method and constructor declarations, modifiers and annotations, the usual
// statements, expressions with Java precedence, lambdas and method refs.
//
// Subtree builders return detached roots; the caller attaches them. That
// keeps backtracking a matter of resetting the token cursor and truncating
// the node vector.

#include "histslice/syntax_tree.hpp"

#include "lexer.hpp"

#include <unordered_set>

namespace histslice {

namespace {

struct ParseFailure {
  std::uint32_t token;
};

const std::unordered_set<std::string_view> kModifierWords = {
    "public",    "private",      "protected", "static",   "final",
    "abstract",  "native",       "synchronized", "transient", "volatile",
    "strictfp",  "default"};

const std::unordered_set<std::string_view> kPrimitives = {
    "boolean", "byte", "char", "short", "int", "long", "float", "double", "void"};

const std::unordered_set<std::string_view> kAssignOps = {
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="};

int binary_precedence(std::string_view op) {
  if (op == "||")
    return 1;
  if (op == "&&")
    return 2;
  if (op == "|")
    return 3;
  if (op == "^")
    return 4;
  if (op == "&")
    return 5;
  if (op == "==" || op == "!=")
    return 6;
  if (op == "<" || op == ">" || op == "<=" || op == ">=" || op == "instanceof")
    return 7;
  if (op == "<<" || op == ">>" || op == ">>>")
    return 8;
  if (op == "+" || op == "-")
    return 9;
  if (op == "*" || op == "/" || op == "%")
    return 10;
  return 0;
}

bool word_like(const Token &t) {
  return t.kind == TokenKind::Ident || t.kind == TokenKind::Keyword ||
         t.kind == TokenKind::Number;
}

class Parser {
public:
  Parser(SyntaxTree &tree, const std::vector<Token> &toks)
      : t_(tree), toks_(toks) {}

  NodeId compilation_unit() {
    NodeId cu = begin(NodeKind::CompilationUnit);
    // Package annotations are rare; accept and drop them.
    std::uint32_t save = pos_;
    if (at("@")) {
      NodeId mods = modifiers();
      bool package_follows = at("package");
      std::uint32_t after = pos_;
      reset(save, mods);
      if (package_follows)
        pos_ = after;
    }
    if (at("package")) {
      NodeId pkg = begin_at(NodeKind::PackageDecl, save);
      ++pos_;
      t_.node(pkg).label = qualified_name();
      expect(";");
      attach(cu, finish(pkg));
    }
    while (at("import")) {
      NodeId imp = begin(NodeKind::ImportDecl);
      ++pos_;
      std::uint32_t from = pos_;
      while (!at(";") && !at_end())
        ++pos_;
      t_.node(imp).label = normalized_text(from, pos_);
      expect(";");
      attach(cu, finish(imp));
    }
    while (!at_end()) {
      if (accept(";"))
        continue;
      std::uint32_t start = pos_;
      NodeId mods = modifiers();
      attach(cu, type_declaration(mods, start));
    }
    return finish(cu);
  }

private:
  // --- token helpers -----------------------------------------------------

  const Token &peek(std::size_t k = 0) const {
    std::size_t i = std::min<std::size_t>(pos_ + k, toks_.size() - 1);
    return toks_[i];
  }
  bool at_end() const { return peek().kind == TokenKind::End; }
  bool at(std::string_view text) const {
    return peek().kind != TokenKind::End && peek().text == text &&
           peek().kind != TokenKind::String && peek().kind != TokenKind::Char;
  }
  bool at_ident() const { return peek().kind == TokenKind::Ident; }
  bool accept(std::string_view text) {
    if (at(text)) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(std::string_view text) {
    if (!accept(text))
      fail();
  }
  [[noreturn]] void fail() const { throw ParseFailure{pos_}; }

  std::string ident() {
    if (!at_ident())
      fail();
    return toks_[pos_++].text;
  }

  // '>' tokens are single; glue adjacent ones (and a trailing '=') back into
  // the operator the source spelled. Returns the operator and its length in
  // tokens.
  std::pair<std::string, std::uint32_t> glued_gt() const {
    std::string op = ">";
    std::uint32_t n = 1;
    while (n < 3 && peek(n).text == ">" && !peek(n).space_before &&
           peek(n).kind == TokenKind::Op) {
      op += ">";
      ++n;
    }
    if (peek(n).kind == TokenKind::Op && !peek(n).space_before &&
        (peek(n).text == "=" )) {
      op += "=";
      ++n;
    } else if (n == 1 && peek(1).kind == TokenKind::Op &&
               !peek(1).space_before && peek(1).text == "==") {
      // ">==" is not Java; leave it to fail later.
    }
    return {op, n};
  }

  std::string normalized_text(std::uint32_t from, std::uint32_t to) const {
    std::string out;
    for (std::uint32_t i = from; i < to; ++i) {
      if (i > from && word_like(toks_[i - 1]) && word_like(toks_[i]))
        out.push_back(' ');
      out += toks_[i].text;
    }
    return out;
  }

  // --- node helpers ------------------------------------------------------

  NodeId begin(NodeKind kind, std::string label = {}) {
    NodeId id = t_.add_node(kind, std::move(label));
    t_.node(id).first_token = pos_;
    return id;
  }
  NodeId begin_at(NodeKind kind, std::uint32_t first, std::string label = {}) {
    NodeId id = t_.add_node(kind, std::move(label));
    t_.node(id).first_token = first;
    return id;
  }
  NodeId finish(NodeId id) {
    t_.node(id).end_token = pos_;
    return id;
  }
  void attach(NodeId parent, NodeId child) { t_.add_child(parent, child); }
  void reset(std::uint32_t pos, NodeId first_discarded) {
    pos_ = pos;
    t_.truncate(first_discarded);
  }
  std::size_t mark() const { return t_.size(); }

  std::string qualified_name() {
    std::string name = ident();
    while (at(".") && peek(1).kind == TokenKind::Ident) {
      ++pos_;
      name += "." + ident();
    }
    return name;
  }

  // --- declarations ------------------------------------------------------

  NodeId modifiers() {
    NodeId mods = begin(NodeKind::Modifiers);
    for (;;) {
      if (peek().kind == TokenKind::Keyword && kModifierWords.count(peek().text) &&
          !(peek().text == "default" && (peek(1).text == ":" || peek(1).text == "->"))) {
        NodeId m = begin(NodeKind::Modifier, peek().text);
        ++pos_;
        attach(mods, finish(m));
      } else if (at("@") && peek(1).text != "interface") {
        NodeId a = begin(NodeKind::Annotation);
        ++pos_;
        std::string name = "@" + qualified_name();
        if (at("(")) {
          std::uint32_t from = pos_;
          skip_balanced("(", ")");
          name += normalized_text(from, pos_);
        }
        t_.node(a).label = std::move(name);
        attach(mods, finish(a));
      } else {
        break;
      }
    }
    return finish(mods);
  }

  void skip_balanced(std::string_view open, std::string_view close) {
    int depth = 0;
    do {
      if (at_end())
        fail();
      if (at(open))
        ++depth;
      else if (at(close))
        --depth;
      ++pos_;
    } while (depth > 0);
  }

  bool at_type_keyword() const {
    return at("class") || at("interface") || at("enum") ||
           (at("@") && peek(1).text == "interface") ||
           (at_ident() && peek().text == "record" && peek(1).kind == TokenKind::Ident);
  }

  NodeId type_declaration(NodeId mods, std::uint32_t start) {
    if (!at_type_keyword())
      fail();
    std::string keyword = peek().text;
    if (keyword == "@") {
      ++pos_;
      keyword = "@interface";
    }
    ++pos_;
    NodeId decl = begin_at(NodeKind::TypeDecl, start, keyword);
    attach(decl, mods);
    NodeId name = begin(NodeKind::Name);
    t_.node(name).label = ident();
    attach(decl, finish(name));
    if (at("<"))
      attach(decl, type_params());
    if (keyword == "record" && at("("))
      attach(decl, params());
    if (at("extends")) {
      NodeId ext = begin(NodeKind::Extends);
      ++pos_;
      attach(ext, type());
      while (accept(","))
        attach(ext, type());
      attach(decl, finish(ext));
    }
    if (at("implements") || (at_ident() && peek().text == "permits")) {
      NodeId impl = begin(NodeKind::Implements);
      ++pos_;
      attach(impl, type());
      while (accept(","))
        attach(impl, type());
      attach(decl, finish(impl));
    }
    attach(decl, type_body(keyword == "enum", t_.node(name).label));
    return finish(decl);
  }

  NodeId type_params() {
    NodeId tp = begin(NodeKind::TypeParams);
    std::uint32_t from = pos_;
    int depth = 0;
    do {
      if (at_end())
        fail();
      if (at("<"))
        ++depth;
      else if (at(">"))
        --depth;
      ++pos_;
    } while (depth > 0);
    t_.node(tp).label = normalized_text(from, pos_);
    return finish(tp);
  }

  NodeId type_body(bool is_enum, const std::string &type_name) {
    NodeId body = begin(NodeKind::TypeBody);
    expect("{");
    if (is_enum) {
      while (!at(";") && !at("}")) {
        std::uint32_t start = pos_;
        NodeId mods = modifiers(); // annotations on constants
        t_.truncate(mods);
        pos_ = start;
        while (at("@")) {
          ++pos_;
          qualified_name();
          if (at("("))
            skip_balanced("(", ")");
        }
        NodeId c = begin_at(NodeKind::EnumConstant, start);
        t_.node(c).label = ident();
        if (at("("))
          attach(c, arguments());
        if (at("{"))
          attach(c, type_body(false, type_name));
        attach(body, finish(c));
        if (!accept(","))
          break;
      }
      accept(";");
    }
    while (!accept("}")) {
      if (at_end())
        fail();
      if (accept(";"))
        continue;
      attach(body, member(type_name));
    }
    return finish(body);
  }

  NodeId member(const std::string &type_name) {
    std::uint32_t start = pos_;
    NodeId mods = modifiers();
    if (at_type_keyword())
      return type_declaration(mods, start);
    if (at("{")) {
      NodeId init = begin_at(NodeKind::Initializer, start);
      for (NodeId m : t_.node(mods).children)
        if (t_.node(m).label == "static")
          t_.node(init).label = "static";
      attach(init, mods);
      attach(init, block());
      return finish(init);
    }
    NodeId tparams = kNoNode;
    if (at("<"))
      tparams = type_params();
    if (at_ident() && peek(1).text == "(" ) {
      NodeId ctor = begin_at(NodeKind::CtorDecl, start);
      attach(ctor, mods);
      if (tparams != kNoNode)
        attach(ctor, tparams);
      NodeId name = begin(NodeKind::Name);
      t_.node(name).label = ident();
      attach(ctor, finish(name));
      attach(ctor, params());
      if (at("throws"))
        attach(ctor, throws_clause());
      attach(ctor, block());
      return finish(ctor);
    }
    if (at_ident() && peek().text == type_name && peek(1).text == "{") {
      // Compact record constructor.
      NodeId ctor = begin_at(NodeKind::CtorDecl, start);
      attach(ctor, mods);
      NodeId name = begin(NodeKind::Name);
      t_.node(name).label = ident();
      attach(ctor, finish(name));
      attach(ctor, block());
      return finish(ctor);
    }
    NodeId ty = type();
    if (at_ident() && peek(1).text == "(") {
      NodeId method = begin_at(NodeKind::MethodDecl, start);
      attach(method, mods);
      if (tparams != kNoNode)
        attach(method, tparams);
      attach(method, ty);
      NodeId name = begin(NodeKind::Name);
      t_.node(name).label = ident();
      attach(method, finish(name));
      attach(method, params());
      while (at("[") && peek(1).text == "]") {
        pos_ += 2;
        t_.node(ty).label += "[]";
      }
      if (at("throws"))
        attach(method, throws_clause());
      if (accept("default")) {
        // Annotation element default value.
        attach(method, element_value());
        expect(";");
      } else if (!accept(";")) {
        attach(method, block());
      }
      return finish(method);
    }
    if (tparams != kNoNode)
      fail();
    NodeId field = begin_at(NodeKind::FieldDecl, start);
    attach(field, mods);
    attach(field, ty);
    attach(field, declarator());
    while (accept(","))
      attach(field, declarator());
    expect(";");
    return finish(field);
  }

  NodeId element_value() {
    if (at("{"))
      return array_init();
    if (at("@")) {
      NodeId a = begin(NodeKind::Annotation);
      ++pos_;
      std::string name = "@" + qualified_name();
      if (at("(")) {
        std::uint32_t from = pos_;
        skip_balanced("(", ")");
        name += normalized_text(from, pos_);
      }
      t_.node(a).label = std::move(name);
      return finish(a);
    }
    return expression();
  }

  NodeId throws_clause() {
    NodeId th = begin(NodeKind::Throws);
    expect("throws");
    attach(th, type());
    while (accept(","))
      attach(th, type());
    return finish(th);
  }

  NodeId params() {
    NodeId ps = begin(NodeKind::Params);
    expect("(");
    if (!at(")")) {
      do {
        attach(ps, param(true));
      } while (accept(","));
    }
    expect(")");
    return finish(ps);
  }

  NodeId param(bool allow_varargs) {
    NodeId p = begin(NodeKind::Param);
    attach(p, modifiers());
    NodeId ty = type();
    if (allow_varargs && accept("..."))
      t_.node(ty).label += "...";
    attach(p, ty);
    NodeId name = begin(NodeKind::Name);
    if (at("this")) {
      ++pos_;
      t_.node(name).label = "this";
    } else {
      t_.node(name).label = ident();
    }
    while (at("[") && peek(1).text == "]") {
      pos_ += 2;
      t_.node(ty).label += "[]";
    }
    attach(p, finish(name));
    return finish(p);
  }

  NodeId declarator() {
    NodeId d = begin(NodeKind::VarDeclarator);
    std::string name = ident();
    while (at("[") && peek(1).text == "]") {
      pos_ += 2;
      name += "[]";
    }
    t_.node(d).label = std::move(name);
    if (accept("=")) {
      if (at("{"))
        attach(d, array_init());
      else
        attach(d, expression());
    }
    return finish(d);
  }

  // --- types -------------------------------------------------------------

  /// Leaf TypeRef whose label is the canonical spelling of the type.
  NodeId type() {
    NodeId ty = begin(NodeKind::TypeRef);
    std::uint32_t from = pos_;
    skip_type();
    t_.node(ty).label = normalized_text(from, pos_);
    return finish(ty);
  }

  void skip_type_annotations() {
    while (at("@") && peek(1).text != "interface") {
      ++pos_;
      qualified_name();
      if (at("("))
        skip_balanced("(", ")");
    }
  }

  void skip_type() {
    skip_type_annotations();
    if (peek().kind == TokenKind::Keyword && kPrimitives.count(peek().text)) {
      ++pos_;
    } else {
      ident();
      if (at("<"))
        skip_type_args();
      while (at(".") && peek(1).kind == TokenKind::Ident) {
        ++pos_;
        ident();
        if (at("<"))
          skip_type_args();
      }
    }
    while (at("[") && peek(1).text == "]")
      pos_ += 2;
  }

  void skip_type_args() {
    expect("<");
    if (accept(">"))
      return; // diamond
    do {
      skip_type_annotations();
      if (accept("?")) {
        if (accept("extends") || accept("super"))
          skip_type();
      } else {
        skip_type();
        while (accept("&"))
          skip_type();
      }
    } while (accept(","));
    expect(">");
  }

  /// Speculative: does a type followed by an identifier start here?
  bool looks_like_declaration() {
    std::uint32_t save = pos_;
    try {
      skip_type();
      bool ok = at_ident();
      pos_ = save;
      return ok;
    } catch (const ParseFailure &) {
      pos_ = save;
      return false;
    }
  }

  // --- statements --------------------------------------------------------

  NodeId block() {
    NodeId b = begin(NodeKind::Block);
    expect("{");
    while (!accept("}")) {
      if (at_end())
        fail();
      attach(b, statement());
    }
    return finish(b);
  }

  NodeId statement() {
    if (at("{"))
      return block();
    if (at(";")) {
      NodeId e = begin(NodeKind::EmptyStmt);
      ++pos_;
      return finish(e);
    }
    if (at("if")) {
      NodeId s = begin(NodeKind::If);
      ++pos_;
      attach(s, paren_expression());
      attach(s, statement());
      if (accept("else"))
        attach(s, statement());
      return finish(s);
    }
    if (at("while")) {
      NodeId s = begin(NodeKind::While);
      ++pos_;
      attach(s, paren_expression());
      attach(s, statement());
      return finish(s);
    }
    if (at("do")) {
      NodeId s = begin(NodeKind::DoWhile);
      ++pos_;
      attach(s, statement());
      expect("while");
      attach(s, paren_expression());
      expect(";");
      return finish(s);
    }
    if (at("for"))
      return for_statement();
    if (at("return")) {
      NodeId s = begin(NodeKind::Return);
      ++pos_;
      if (!at(";"))
        attach(s, expression());
      expect(";");
      return finish(s);
    }
    if (at("throw")) {
      NodeId s = begin(NodeKind::Throw);
      ++pos_;
      attach(s, expression());
      expect(";");
      return finish(s);
    }
    if (at("break") || at("continue")) {
      NodeId s = begin(at("break") ? NodeKind::Break : NodeKind::Continue);
      ++pos_;
      if (at_ident())
        t_.node(s).label = ident();
      expect(";");
      return finish(s);
    }
    if (at("try"))
      return try_statement();
    if (at("switch"))
      return switch_statement();
    if (at("synchronized") && peek(1).text == "(") {
      NodeId s = begin(NodeKind::Synchronized);
      ++pos_;
      attach(s, paren_expression());
      attach(s, block());
      return finish(s);
    }
    if (at("assert")) {
      NodeId s = begin(NodeKind::Assert);
      ++pos_;
      attach(s, expression());
      if (accept(":"))
        attach(s, expression());
      expect(";");
      return finish(s);
    }
    if (at_ident() && peek(1).text == ":") {
      NodeId s = begin(NodeKind::Labeled, peek().text);
      ++pos_;
      ++pos_;
      attach(s, statement());
      return finish(s);
    }
    std::uint32_t start = pos_;
    NodeId mods = modifiers();
    if (at_type_keyword() && !(at_ident() && peek(1).text == "=")) {
      NodeId local = begin_at(NodeKind::LocalTypeDecl, start);
      attach(local, type_declaration(mods, start));
      return finish(local);
    }
    bool has_mods = !t_.node(mods).children.empty();
    if (has_mods || looks_like_declaration()) {
      NodeId decl = begin_at(NodeKind::LocalVarDecl, start);
      attach(decl, mods);
      attach(decl, type());
      attach(decl, declarator());
      while (accept(","))
        attach(decl, declarator());
      expect(";");
      return finish(decl);
    }
    reset(start, mods);
    NodeId s = begin(NodeKind::ExprStmt);
    attach(s, expression());
    expect(";");
    return finish(s);
  }

  NodeId paren_expression() {
    expect("(");
    NodeId e = expression();
    expect(")");
    return e;
  }

  NodeId for_statement() {
    std::uint32_t start = pos_;
    expect("for");
    expect("(");
    // Enhanced for: modifiers type name ':'
    {
      std::uint32_t save = pos_;
      std::size_t nodes = mark();
      try {
        NodeId p = param(false);
        if (accept(":")) {
          NodeId s = begin_at(NodeKind::ForEach, start);
          attach(s, p);
          attach(s, expression());
          expect(")");
          attach(s, statement());
          return finish(s);
        }
      } catch (const ParseFailure &) {
      }
      reset(save, NodeId(nodes));
    }
    NodeId s = begin_at(NodeKind::For, start);
    NodeId init = begin(NodeKind::ForInit);
    if (!at(";")) {
      std::uint32_t istart = pos_;
      NodeId mods = modifiers();
      if (!t_.node(mods).children.empty() || looks_like_declaration()) {
        NodeId decl = begin_at(NodeKind::LocalVarDecl, istart);
        attach(decl, mods);
        attach(decl, type());
        attach(decl, declarator());
        while (accept(","))
          attach(decl, declarator());
        attach(init, finish(decl));
      } else {
        reset(istart, mods);
        attach(init, expression());
        while (accept(","))
          attach(init, expression());
      }
    }
    attach(s, finish(init));
    expect(";");
    if (!at(";"))
      attach(s, expression());
    expect(";");
    NodeId update = begin(NodeKind::ForUpdate);
    if (!at(")")) {
      attach(update, expression());
      while (accept(","))
        attach(update, expression());
    }
    attach(s, finish(update));
    expect(")");
    attach(s, statement());
    return finish(s);
  }

  NodeId try_statement() {
    NodeId s = begin(NodeKind::Try);
    expect("try");
    if (at("(")) {
      NodeId res = begin(NodeKind::Resources);
      ++pos_;
      while (!accept(")")) {
        std::uint32_t rstart = pos_;
        NodeId mods = modifiers();
        if (!t_.node(mods).children.empty() || looks_like_declaration()) {
          NodeId decl = begin_at(NodeKind::LocalVarDecl, rstart);
          attach(decl, mods);
          attach(decl, type());
          attach(decl, declarator());
          attach(res, finish(decl));
        } else {
          reset(rstart, mods);
          attach(res, expression());
        }
        if (!accept(";") && !at(")"))
          fail();
      }
      attach(s, finish(res));
    }
    attach(s, block());
    while (at("catch")) {
      NodeId c = begin(NodeKind::Catch);
      ++pos_;
      expect("(");
      NodeId p = begin(NodeKind::Param);
      attach(p, modifiers());
      NodeId ty = begin(NodeKind::TypeRef);
      std::uint32_t from = pos_;
      skip_type();
      while (accept("|"))
        skip_type();
      t_.node(ty).label = normalized_text(from, pos_);
      attach(p, finish(ty));
      NodeId name = begin(NodeKind::Name);
      t_.node(name).label = ident();
      attach(p, finish(name));
      attach(c, finish(p));
      expect(")");
      attach(c, block());
      attach(s, finish(c));
    }
    if (at("finally")) {
      NodeId f = begin(NodeKind::Finally);
      ++pos_;
      attach(f, block());
      attach(s, finish(f));
    }
    return finish(s);
  }

  NodeId switch_statement() {
    NodeId s = begin(NodeKind::Switch);
    expect("switch");
    attach(s, paren_expression());
    expect("{");
    while (!accept("}")) {
      NodeId c = begin(NodeKind::SwitchCase);
      if (accept("default")) {
        t_.node(c).label = "default";
      } else {
        expect("case");
        t_.node(c).label = "case";
        attach(c, ternary());
        while (accept(","))
          attach(c, ternary());
      }
      if (accept("->")) {
        if (at("{"))
          attach(c, block());
        else if (at("throw"))
          attach(c, statement());
        else {
          NodeId es = begin(NodeKind::ExprStmt);
          attach(es, expression());
          expect(";");
          attach(c, finish(es));
        }
      } else {
        expect(":");
        while (!at("case") && !at("default") && !at("}")) {
          if (at_end())
            fail();
          attach(c, statement());
        }
        if (at("default") && (peek(1).text != ":" && peek(1).text != "->")) {
          // 'default' starting a statement cannot happen in valid code.
          fail();
        }
      }
      attach(s, finish(c));
    }
    return finish(s);
  }

  // --- expressions -------------------------------------------------------

  NodeId expression() {
    if (auto lambda = try_lambda(); lambda != kNoNode)
      return lambda;
    std::uint32_t start = pos_;
    NodeId lhs = ternary();
    std::string op;
    std::uint32_t len = 0;
    if (at(">")) {
      auto [g, n] = glued_gt();
      if (kAssignOps.count(g)) {
        op = g;
        len = n;
      }
    } else if (peek().kind == TokenKind::Op && kAssignOps.count(peek().text)) {
      op = peek().text;
      len = 1;
    }
    if (len == 0)
      return lhs;
    pos_ += len;
    NodeId a = begin_at(NodeKind::Assign, start, op);
    attach(a, lhs);
    if (at("{"))
      attach(a, array_init());
    else
      attach(a, expression());
    return finish(a);
  }

  NodeId try_lambda() {
    std::uint32_t start = pos_;
    if (at_ident() && peek(1).text == "->") {
      NodeId l = begin(NodeKind::Lambda);
      NodeId ps = begin(NodeKind::Params);
      NodeId p = begin(NodeKind::Param);
      attach(p, finish(begin(NodeKind::Modifiers)));
      NodeId name = begin(NodeKind::Name, peek().text);
      ++pos_;
      attach(p, finish(name));
      attach(ps, finish(p));
      attach(l, finish(ps));
      expect("->");
      attach(l, at("{") ? block() : expression());
      return finish(l);
    }
    if (!at("("))
      return kNoNode;
    // Find the matching ')' and check for '->'.
    std::uint32_t i = pos_;
    int depth = 0;
    do {
      if (toks_[i].kind == TokenKind::End)
        return kNoNode;
      if (toks_[i].kind == TokenKind::Op && toks_[i].text == "(")
        ++depth;
      else if (toks_[i].kind == TokenKind::Op && toks_[i].text == ")")
        --depth;
      ++i;
    } while (depth > 0);
    if (toks_[i].text != "->" || toks_[i].kind != TokenKind::Op)
      return kNoNode;
    NodeId l = begin(NodeKind::Lambda);
    NodeId ps = begin(NodeKind::Params);
    expect("(");
    if (!at(")")) {
      do {
        if (at_ident() && (peek(1).text == "," || peek(1).text == ")")) {
          NodeId p = begin(NodeKind::Param);
          attach(p, finish(begin(NodeKind::Modifiers)));
          NodeId name = begin(NodeKind::Name, peek().text);
          ++pos_;
          attach(p, finish(name));
          attach(ps, finish(p));
        } else {
          attach(ps, param(false));
        }
      } while (accept(","));
    }
    expect(")");
    attach(l, finish(ps));
    expect("->");
    attach(l, at("{") ? block() : expression());
    (void)start;
    return finish(l);
  }

  NodeId ternary() {
    std::uint32_t start = pos_;
    NodeId cond = binary(1);
    if (!at("?"))
      return cond;
    ++pos_;
    NodeId c = begin_at(NodeKind::Conditional, start);
    attach(c, cond);
    attach(c, expression());
    expect(":");
    if (auto lambda = try_lambda(); lambda != kNoNode)
      attach(c, lambda);
    else
      attach(c, ternary());
    return finish(c);
  }

  /// Current binary operator and its token length, or {"", 0}.
  std::pair<std::string, std::uint32_t> binary_op() const {
    const Token &tk = peek();
    if (tk.kind == TokenKind::Keyword && tk.text == "instanceof")
      return {"instanceof", 1};
    if (tk.kind != TokenKind::Op)
      return {"", 0};
    if (tk.text == ">") {
      auto [op, n] = glued_gt();
      if (kAssignOps.count(op))
        return {"", 0};
      return {op, n};
    }
    if (binary_precedence(tk.text) > 0)
      return {tk.text, 1};
    return {"", 0};
  }

  NodeId binary(int min_prec) {
    std::uint32_t start = pos_;
    NodeId lhs = unary();
    for (;;) {
      auto [op, len] = binary_op();
      int prec = op.empty() ? 0 : binary_precedence(op);
      if (prec < min_prec || prec == 0)
        return lhs;
      pos_ += len;
      if (op == "instanceof") {
        NodeId io = begin_at(NodeKind::InstanceOf, start);
        attach(io, lhs);
        accept("final");
        attach(io, type());
        if (at_ident()) {
          NodeId name = begin(NodeKind::Name, peek().text);
          ++pos_;
          attach(io, finish(name));
        }
        lhs = finish(io);
        continue;
      }
      NodeId rhs = binary(prec + 1);
      NodeId b = begin_at(NodeKind::Binary, start, op);
      attach(b, lhs);
      attach(b, rhs);
      lhs = finish(b);
    }
  }

  NodeId unary() {
    if (at("+") || at("-") || at("++") || at("--") || at("!") || at("~")) {
      NodeId u = begin(NodeKind::Unary, peek().text);
      ++pos_;
      attach(u, unary());
      return finish(u);
    }
    if (at("(")) {
      if (NodeId cast = try_cast(); cast != kNoNode)
        return cast;
    }
    return postfix();
  }

  NodeId try_cast() {
    std::uint32_t save = pos_;
    std::size_t nodes = mark();
    try {
      NodeId c = begin(NodeKind::Cast);
      expect("(");
      bool primitive = peek().kind == TokenKind::Keyword &&
                       kPrimitives.count(peek().text) != 0;
      NodeId ty = begin(NodeKind::TypeRef);
      std::uint32_t from = pos_;
      skip_type();
      while (accept("&"))
        skip_type();
      t_.node(ty).label = normalized_text(from, pos_);
      finish(ty);
      expect(")");
      const Token &next = peek();
      bool follows =
          next.kind == TokenKind::Ident || next.kind == TokenKind::Number ||
          next.kind == TokenKind::String || next.kind == TokenKind::Char ||
          (next.kind == TokenKind::Keyword &&
           (next.text == "this" || next.text == "super" || next.text == "new" ||
            next.text == "true" || next.text == "false" || next.text == "null" ||
            kPrimitives.count(next.text))) ||
          (next.kind == TokenKind::Op &&
           (next.text == "(" || next.text == "!" || next.text == "~"));
      if (primitive && next.kind == TokenKind::Op &&
          (next.text == "+" || next.text == "-" || next.text == "++" ||
           next.text == "--"))
        follows = true;
      if (!follows) {
        reset(save, NodeId(nodes));
        return kNoNode;
      }
      attach(c, ty);
      if (auto lambda = try_lambda(); lambda != kNoNode)
        attach(c, lambda);
      else
        attach(c, unary());
      return finish(c);
    } catch (const ParseFailure &) {
      reset(save, NodeId(nodes));
      return kNoNode;
    }
  }

  NodeId arguments() {
    NodeId args = begin(NodeKind::Args);
    expect("(");
    if (!at(")")) {
      do {
        attach(args, expression());
      } while (accept(","));
    }
    expect(")");
    return finish(args);
  }

  NodeId postfix() {
    std::uint32_t start = pos_;
    NodeId e = primary();
    for (;;) {
      if (at(".")) {
        ++pos_;
        if (at("<")) {
          skip_type_args();
        }
        if (at("new")) {
          NodeId n = creator();
          // Qualified inner-class creation: receiver becomes first child.
          t_.node(n).first_token = t_.node(e).first_token;
          auto &ch = t_.node(n).children;
          ch.insert(ch.begin(), e);
          t_.node(e).parent = n;
          e = n;
          continue;
        }
        if (at("class")) {
          ++pos_;
          NodeId cl = begin_at(NodeKind::ClassLiteral, start);
          attach(cl, e);
          e = finish(cl);
          continue;
        }
        if (at("this") || at("super")) {
          NodeId fa = begin_at(NodeKind::FieldAccess, start, peek().text);
          ++pos_;
          attach(fa, e);
          if (at("(")) {
            t_.node(fa).kind = NodeKind::MethodCall;
            attach(fa, arguments());
          }
          e = finish(fa);
          continue;
        }
        std::string name = ident();
        if (at("(")) {
          NodeId call = begin_at(NodeKind::MethodCall, start, name);
          attach(call, e);
          attach(call, arguments());
          e = finish(call);
        } else {
          NodeId fa = begin_at(NodeKind::FieldAccess, start, name);
          attach(fa, e);
          e = finish(fa);
        }
      } else if (at("[")) {
        ++pos_;
        NodeId aa = begin_at(NodeKind::ArrayAccess, start);
        attach(aa, e);
        attach(aa, expression());
        expect("]");
        e = finish(aa);
      } else if (at("::")) {
        ++pos_;
        std::string name = at("new") ? (++pos_, std::string("new")) : ident();
        NodeId mr = begin_at(NodeKind::MethodRef, start, name);
        attach(mr, e);
        e = finish(mr);
      } else if (at("++") || at("--")) {
        NodeId p = begin_at(NodeKind::Postfix, start, peek().text);
        ++pos_;
        attach(p, e);
        e = finish(p);
      } else {
        return e;
      }
    }
  }

  NodeId primary() {
    const Token &tk = peek();
    if (tk.kind == TokenKind::Number || tk.kind == TokenKind::String ||
        tk.kind == TokenKind::Char ||
        (tk.kind == TokenKind::Keyword &&
         (tk.text == "true" || tk.text == "false" || tk.text == "null"))) {
      NodeId lit = begin(NodeKind::Literal, tk.text);
      ++pos_;
      return finish(lit);
    }
    if (at("this")) {
      if (peek(1).text == "(") {
        NodeId call = begin(NodeKind::MethodCall, "this");
        ++pos_;
        attach(call, arguments());
        return finish(call);
      }
      NodeId th = begin(NodeKind::This);
      ++pos_;
      return finish(th);
    }
    if (at("super")) {
      if (peek(1).text == "(") {
        NodeId call = begin(NodeKind::MethodCall, "super");
        ++pos_;
        attach(call, arguments());
        return finish(call);
      }
      NodeId su = begin(NodeKind::Super);
      ++pos_;
      return finish(su);
    }
    if (at("new"))
      return creator();
    if (at("(")) {
      NodeId p = begin(NodeKind::Parens);
      ++pos_;
      attach(p, expression());
      expect(")");
      return finish(p);
    }
    if (tk.kind == TokenKind::Keyword && kPrimitives.count(tk.text)) {
      // int.class, int[].class, int[]::new
      NodeId ty = type();
      if (at("::"))
        return ty;
      expect(".");
      expect("class");
      NodeId cl = begin_at(NodeKind::ClassLiteral, t_.node(ty).first_token);
      attach(cl, ty);
      return finish(cl);
    }
    if (at_ident()) {
      // Generic type reference before '::' (List<String>::new).
      if (peek(1).text == "<" || (peek(1).text == "[" && peek(2).text == "]")) {
        std::uint32_t save = pos_;
        std::size_t nodes = mark();
        try {
          NodeId ty = type();
          if (at("::"))
            return ty;
          if (at(".") && peek(1).text == "class") {
            pos_ += 2;
            NodeId cl = begin_at(NodeKind::ClassLiteral, t_.node(ty).first_token);
            attach(cl, ty);
            return finish(cl);
          }
        } catch (const ParseFailure &) {
        }
        reset(save, NodeId(nodes));
      }
      std::string name = peek().text;
      if (peek(1).text == "(") {
        NodeId call = begin(NodeKind::MethodCall, name);
        ++pos_;
        attach(call, arguments());
        return finish(call);
      }
      NodeId id = begin(NodeKind::Identifier, name);
      ++pos_;
      return finish(id);
    }
    if (at("switch")) {
      // Switch expression: reuse the statement form.
      return switch_statement();
    }
    fail();
  }

  NodeId creator() {
    std::uint32_t start = pos_;
    expect("new");
    if (at("<"))
      skip_type_args();
    std::uint32_t from = pos_;
    skip_type_annotations();
    if (peek().kind == TokenKind::Keyword && kPrimitives.count(peek().text)) {
      ++pos_;
    } else {
      ident();
      if (at("<"))
        skip_type_args();
      while (at(".") && peek(1).kind == TokenKind::Ident) {
        ++pos_;
        ident();
        if (at("<"))
          skip_type_args();
      }
    }
    std::string type_label = normalized_text(from, pos_);
    if (at("[")) {
      NodeId na = begin_at(NodeKind::NewArray, start);
      while (at("[")) {
        ++pos_;
        if (accept("]")) {
          type_label += "[]";
          continue;
        }
        attach(na, expression());
        expect("]");
        type_label += "[]";
      }
      t_.node(na).label = type_label;
      if (at("{"))
        attach(na, array_init());
      return finish(na);
    }
    NodeId n = begin_at(NodeKind::New, start);
    NodeId ty = begin_at(NodeKind::TypeRef, from, type_label);
    t_.node(ty).end_token = pos_;
    attach(n, ty);
    attach(n, arguments());
    if (at("{"))
      attach(n, type_body(false, type_label));
    return finish(n);
  }

  NodeId array_init() {
    NodeId ai = begin(NodeKind::ArrayInit);
    expect("{");
    while (!accept("}")) {
      attach(ai, at("{") ? array_init() : element_value());
      if (!accept(",") && !at("}"))
        fail();
    }
    return finish(ai);
  }

  SyntaxTree &t_;
  const std::vector<Token> &toks_;
  std::uint32_t pos_ = 0;
};

} // namespace

SyntaxTree parse(std::string_view source) {
  SyntaxTree tree;
  std::vector<Token> tokens;
  try {
    tokens = detail::lex(source);
  } catch (const detail::LexError &) {
    NodeId root = tree.add_node(NodeKind::Unparseable);
    tree.set_root(root);
    tree.set_parseable(false);
    return tree;
  }
  tree.set_tokens(std::move(tokens));
  try {
    Parser parser(tree, tree.tokens());
    tree.set_root(parser.compilation_unit());
    tree.compute_spans();
  } catch (const ParseFailure &) {
    SyntaxTree degraded;
    NodeId root = degraded.add_node(NodeKind::Unparseable);
    degraded.node(root).end_token = 0;
    degraded.set_root(root);
    degraded.set_parseable(false);
    degraded.set_tokens(tree.tokens());
    auto &n = degraded.node(root);
    n.end_token = std::uint32_t(degraded.tokens().size());
    degraded.compute_spans();
    return degraded;
  }
  return tree;
}

} // namespace histslice

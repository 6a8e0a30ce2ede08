#include "lexer.hpp"

#include <array>
#include <cctype>
#include <unordered_set>

namespace histslice::detail {

namespace {

const std::unordered_set<std::string_view> &keywords() {
  static const std::unordered_set<std::string_view> set = {
      "abstract",   "assert",       "boolean",   "break",      "byte",
      "case",       "catch",        "char",      "class",      "const",
      "continue",   "default",      "do",        "double",     "else",
      "enum",       "extends",      "final",     "finally",    "float",
      "for",        "goto",         "if",        "implements", "import",
      "instanceof", "int",          "interface", "long",       "native",
      "new",        "package",      "private",   "protected",  "public",
      "return",     "short",        "static",    "strictfp",   "super",
      "switch",     "synchronized", "this",      "throw",      "throws",
      "transient",  "try",          "void",      "volatile",   "while",
      "true",       "false",        "null"};
  return set;
}

// Longest first.
constexpr std::array<std::string_view, 24> kMultiOps = {
    "<<=", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", "+=",
    "-=",  "*=",  "/=", "%=", "&=", "|=", "^=", "<<", "@",  "?",  ":",  "~"};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool ident_part(char c) {
  return ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
}

} // namespace

bool is_java_keyword(std::string_view word) { return keywords().count(word); }

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  std::uint32_t line = 1;
  bool space = false;
  const std::size_t n = src.size();

  auto push = [&](TokenKind kind, std::size_t begin, std::size_t end,
                  std::uint32_t start_line) {
    out.push_back({kind, std::string(src.substr(begin, end - begin)),
                   start_line, space});
    space = false;
  };

  while (i < n) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
      space = true;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      space = true;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n')
        ++i;
      space = true;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      auto end = src.find("*/", i + 2);
      if (end == std::string_view::npos)
        throw LexError("unterminated comment");
      for (std::size_t k = i; k < end; ++k)
        if (src[k] == '\n')
          ++line;
      i = end + 2;
      space = true;
      continue;
    }
    const std::size_t begin = i;
    const std::uint32_t start_line = line;
    if (ident_start(c)) {
      while (i < n && ident_part(src[i]))
        ++i;
      auto word = src.substr(begin, i - begin);
      push(keywords().count(word) ? TokenKind::Keyword : TokenKind::Ident,
           begin, i, start_line);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < n &&
         std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      const bool hex = c == '0' && i + 1 < n && (src[i + 1] == 'x' || src[i + 1] == 'X');
      if (hex)
        i += 2;
      while (i < n) {
        char d = src[i];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '.') {
          if (!hex && (d == 'e' || d == 'E') && i + 1 < n &&
              (src[i + 1] == '+' || src[i + 1] == '-'))
            ++i;
          ++i;
        } else {
          break;
        }
      }
      push(TokenKind::Number, begin, i, start_line);
      continue;
    }
    if (c == '"') {
      if (src.substr(i, 3) == "\"\"\"") {
        auto end = src.find("\"\"\"", i + 3);
        if (end == std::string_view::npos)
          throw LexError("unterminated text block");
        for (std::size_t k = i; k < end; ++k)
          if (src[k] == '\n')
            ++line;
        i = end + 3;
        push(TokenKind::String, begin, i, start_line);
        continue;
      }
      ++i;
      while (i < n && src[i] != '"') {
        if (src[i] == '\n')
          throw LexError("newline in string literal");
        if (src[i] == '\\')
          ++i;
        ++i;
      }
      if (i >= n)
        throw LexError("unterminated string literal");
      ++i;
      push(TokenKind::String, begin, i, start_line);
      continue;
    }
    if (c == '\'') {
      ++i;
      while (i < n && src[i] != '\'') {
        if (src[i] == '\n')
          throw LexError("newline in character literal");
        if (src[i] == '\\')
          ++i;
        ++i;
      }
      if (i >= n)
        throw LexError("unterminated character literal");
      ++i;
      push(TokenKind::Char, begin, i, start_line);
      continue;
    }
    if (c == '>') {
      ++i;
      push(TokenKind::Op, begin, i, start_line);
      continue;
    }
    bool matched = false;
    for (auto op : kMultiOps) {
      if (src.substr(i, op.size()) == op) {
        i += op.size();
        push(TokenKind::Op, begin, i, start_line);
        matched = true;
        break;
      }
    }
    if (matched)
      continue;
    static constexpr std::string_view kSingle = "(){}[];,.=<!+-*/&|^%";
    if (kSingle.find(c) != std::string_view::npos) {
      ++i;
      push(TokenKind::Op, begin, i, start_line);
      continue;
    }
    throw LexError(std::string("unexpected character '") + c + "' on line " +
                   std::to_string(line));
  }
  out.push_back({TokenKind::End, "", line, space});
  return out;
}

} // namespace histslice::detail

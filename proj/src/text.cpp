#include "histslice/text.hpp"

#include <algorithm>

namespace histslice {

TextLines split_lines(std::string_view text) {
  TextLines out;
  std::string current;
  bool pending = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char ch = text[i];
    if (ch == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n')
        ++i;
      ch = '\n';
    }
    if (ch == '\n') {
      out.lines.push_back(std::move(current));
      current.clear();
      pending = false;
    } else {
      current.push_back(ch);
      pending = true;
    }
  }
  if (pending) {
    out.lines.push_back(std::move(current));
    out.missing_newline = true;
  }
  return out;
}

std::string join_lines(const TextLines &text) {
  std::string out;
  for (std::size_t i = 0; i < text.lines.size(); ++i) {
    out += text.lines[i];
    if (i + 1 < text.lines.size() || !text.missing_newline)
      out.push_back('\n');
  }
  return out;
}

bool looks_binary(std::string_view text) {
  auto head = text.substr(0, std::min<std::size_t>(text.size(), 8000));
  return head.find('\0') != std::string_view::npos;
}

} // namespace histslice

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace histslice {

/// A file body split on LF. `missing_newline` records that the last line had
/// no terminating newline, so the text can be rebuilt byte for byte.
struct TextLines {
  std::vector<std::string> lines;
  bool missing_newline = false;

  bool operator==(const TextLines &) const = default;
};

/// Splits text into lines, normalizing CRLF (and lone CR) to LF first.
TextLines split_lines(std::string_view text);

std::string join_lines(const TextLines &text);

/// Same heuristic git uses: a NUL byte in the first 8000 bytes.
bool looks_binary(std::string_view text);

} // namespace histslice

#pragma once

#include "histslice/syntax_tree.hpp"

#include <stdexcept>
#include <string_view>
#include <vector>

namespace histslice::detail {

struct LexError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Comments and whitespace are dropped; the last token is always End.
/// '>' is always lexed alone so nested generic closers split cleanly; the
/// expression parser glues adjacent '>' back into shift and comparison
/// operators.
std::vector<Token> lex(std::string_view source);

bool is_java_keyword(std::string_view word);

} // namespace histslice::detail

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace codecarta::miner {

struct Tok {
  enum class Kind { Ident, Number, String, Char, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  std::uint32_t line = 0;
  std::uint32_t column = 0;
  std::uint32_t end_line = 0;
  std::uint32_t end_column = 0;  // inclusive
  int doc_before = -1;  // index into LexedFile::docs
  int doc_after = -1;   // trailing "///<" style comment

  bool is(std::string_view s) const { return kind != Kind::String && kind != Kind::Char && text == s; }
  bool ident() const { return kind == Kind::Ident; }
};

struct LexedFile {
  std::vector<Tok> tokens;  // always ends with an End token
  std::vector<std::string> docs;
  std::uint32_t last_line = 1;
};

struct LexError {
  std::uint32_t line = 0;
  std::uint32_t column = 0;
  std::string message;
};

/// Tokenises C++ source. Preprocessor directives are dropped; of every
/// conditional group only the first branch is kept, except that `#if 0`
/// yields to its `#else`/`#elif`. Throws LexError for unterminated comments
/// and literals and for binary content.
LexedFile lex(std::string_view source);

}  // namespace codecarta::miner

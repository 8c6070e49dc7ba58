#pragma once

#include <string>
#include <vector>

#include "a4/span.hpp"

namespace a4 {

enum class TokenKind {
  Identifier,
  Keyword,
  Literal,
  Punctuation,
  Comment,
  Whitespace,
};

struct Token {
  TokenKind kind = TokenKind::Punctuation;
  std::string text;
  ByteSpan span;

  bool is_trivia() const {
    return kind == TokenKind::Whitespace || kind == TokenKind::Comment;
  }
};

using TokenStream = std::vector<Token>;

// Lossless tokenization: concatenating token texts reproduces the input
// byte-for-byte. Unrecognized bytes become single-character punctuation.
TokenStream tokenize(std::string_view source);

bool is_java_keyword(std::string_view word);

// Joins token texts with Java-style spacing (no space around '.', none
// before ',', ';', ')', ...). Used for normalized statement snippets.
std::string join_tokens(const std::vector<std::string>& texts);

// Non-trivia token texts of a source fragment.
std::vector<std::string> significant_texts(std::string_view source);

// Normalized single-line form of a source fragment.
std::string normalize_snippet(std::string_view source);

}  // namespace a4

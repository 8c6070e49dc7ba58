#include "a4/token.hpp"

#include <array>
#include <cctype>
#include <string_view>
#include <unordered_set>

namespace a4 {

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_ident_part(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_space_char(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

const std::unordered_set<std::string_view>& keyword_set() {
  static const std::unordered_set<std::string_view> kws = {
      "abstract", "assert", "boolean", "break", "byte", "case", "catch",
      "char", "class", "const", "continue", "default", "do", "double",
      "else", "enum", "extends", "final", "finally", "float", "for",
      "goto", "if", "implements", "import", "instanceof", "int",
      "interface", "long", "native", "new", "package", "private",
      "protected", "public", "return", "short", "static", "strictfp",
      "super", "switch", "synchronized", "this", "throw", "throws",
      "transient", "try", "void", "volatile", "while",
  };
  return kws;
}

// Multi-character operators, longest first within each leading character.
const std::array<std::string_view, 21> kMultiPunct = {
    ">>>=", ">>>", ">>=", "<<=", "==", "!=", "<=", ">=", "&&", "||",
    "++",   "--",  "+=",  "-=",  "*=", "/=", "%=", "&=", "|=", "^=",
    "->",
};

std::size_t match_punct(std::string_view rest) {
  for (std::string_view op : kMultiPunct) {
    if (rest.size() >= op.size() && rest.substr(0, op.size()) == op) {
      return op.size();
    }
  }
  if (rest.size() >= 2 && rest.substr(0, 2) == "::") return 2;
  return 1;
}

std::size_t scan_string(std::string_view src, std::size_t i) {
  // Text block.
  if (src.substr(i).size() >= 3 && src.substr(i, 3) == "\"\"\"") {
    std::size_t j = src.find("\"\"\"", i + 3);
    return j == std::string_view::npos ? src.size() : j + 3;
  }
  char quote = src[i];
  std::size_t j = i + 1;
  while (j < src.size()) {
    char c = src[j];
    if (c == '\\' && j + 1 < src.size()) {
      j += 2;
      continue;
    }
    if (c == quote) return j + 1;
    if (c == '\n') return j;  // unterminated: stop at end of line
    ++j;
  }
  return j;
}

std::size_t scan_number(std::string_view src, std::size_t i) {
  std::size_t j = i;
  if (src[j] == '0' && j + 1 < src.size() &&
      (src[j + 1] == 'x' || src[j + 1] == 'X' || src[j + 1] == 'b' || src[j + 1] == 'B')) {
    j += 2;
    while (j < src.size() &&
           (std::isxdigit(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
      ++j;
    }
  } else {
    while (j < src.size() &&
           (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
      ++j;
    }
    if (j < src.size() && src[j] == '.' && j + 1 < src.size() &&
        std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
      ++j;
      while (j < src.size() &&
             (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        ++j;
      }
    }
    if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
      std::size_t k = j + 1;
      if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
      if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
        j = k;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
    }
  }
  if (j < src.size() && (src[j] == 'l' || src[j] == 'L' || src[j] == 'f' ||
                         src[j] == 'F' || src[j] == 'd' || src[j] == 'D')) {
    ++j;
  }
  return j;
}

}  // namespace

bool is_java_keyword(std::string_view word) {
  return keyword_set().count(word) > 0;
}

TokenStream tokenize(std::string_view source) {
  TokenStream tokens;
  std::size_t i = 0;
  auto emit = [&](TokenKind kind, std::size_t end) {
    tokens.push_back(Token{kind, std::string(source.substr(i, end - i)), {i, end}});
    i = end;
  };

  while (i < source.size()) {
    char c = source[i];
    if (is_space_char(c)) {
      std::size_t j = i;
      while (j < source.size() && is_space_char(source[j])) ++j;
      emit(TokenKind::Whitespace, j);
      continue;
    }
    if (c == '/' && i + 1 < source.size() && source[i + 1] == '/') {
      std::size_t j = source.find('\n', i);
      emit(TokenKind::Comment, j == std::string_view::npos ? source.size() : j);
      continue;
    }
    if (c == '/' && i + 1 < source.size() && source[i + 1] == '*') {
      std::size_t j = source.find("*/", i + 2);
      emit(TokenKind::Comment, j == std::string_view::npos ? source.size() : j + 2);
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < source.size() && is_ident_part(source[j])) ++j;
      std::string_view word = source.substr(i, j - i);
      TokenKind kind = TokenKind::Identifier;
      if (word == "true" || word == "false" || word == "null") {
        kind = TokenKind::Literal;
      } else if (is_java_keyword(word)) {
        kind = TokenKind::Keyword;
      }
      emit(kind, j);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      emit(TokenKind::Literal, scan_number(source, i));
      continue;
    }
    if (c == '"' || c == '\'') {
      emit(TokenKind::Literal, scan_string(source, i));
      continue;
    }
    emit(TokenKind::Punctuation, i + match_punct(source.substr(i)));
  }
  return tokens;
}

std::string join_tokens(const std::vector<std::string>& texts) {
  static const std::string_view no_space_before = ".,;)]";
  static const std::string_view no_space_after = ".([@";
  std::string out;
  for (std::size_t k = 0; k < texts.size(); ++k) {
    const std::string& t = texts[k];
    if (t.empty()) continue;
    if (!out.empty()) {
      char prev = out.back();
      bool sep = true;
      if (no_space_after.find(prev) != std::string_view::npos) sep = false;
      if (t.size() == 1 && no_space_before.find(t[0]) != std::string_view::npos) {
        sep = false;
      }
      if (t[0] == '(' && (std::isalnum(static_cast<unsigned char>(prev)) ||
                          prev == '_' || prev == '$')) {
        // method call / grouping follows a name without a gap
        sep = false;
      }
      if (sep) out += ' ';
    }
    out += t;
  }
  return out;
}

std::vector<std::string> significant_texts(std::string_view source) {
  std::vector<std::string> out;
  for (const Token& t : tokenize(source)) {
    if (!t.is_trivia()) out.push_back(t.text);
  }
  return out;
}

std::string normalize_snippet(std::string_view source) {
  return join_tokens(significant_texts(source));
}

}  // namespace a4

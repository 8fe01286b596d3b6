#pragma once

// Line tokenizer shared by the .cld and scenario readers.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cld/dsl.hpp"

namespace cld::detail {

enum class TokenKind { word, string, arrow, equals };

struct Token {
  TokenKind kind = TokenKind::word;
  std::string text;  // unescaped contents for strings
  SourceSpan span;
};

struct Line {
  int number = 0;
  std::vector<Token> tokens;
};

// Splits source into non-empty logical lines. Lexical errors (unterminated
// string, bad escape) are appended to diags and the offending line dropped.
std::vector<Line> tokenize(std::string_view source, std::vector<Diagnostic> &diags);

std::optional<int> parse_int(std::string_view text);
std::optional<double> parse_double(std::string_view text);

inline Diagnostic error_at(const SourceSpan &span, std::string code, std::string message) {
  return Diagnostic{Severity::error, std::move(code), std::move(message), span};
}

// Span just past the last token of a line, used for "expected ..." errors.
SourceSpan end_of(const Line &line);

std::string describe(const Token &t);

}  // namespace cld::detail

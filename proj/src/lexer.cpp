#include "lexer.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

namespace cld::detail {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }
bool is_continuation(char c) { return (static_cast<unsigned char>(c) & 0xC0) == 0x80; }

// Code-point count of text[begin, end).
int width(std::string_view text, std::size_t begin, std::size_t end) {
  int n = 0;
  for (auto i = begin; i < end; ++i)
    if (!is_continuation(text[i])) ++n;
  return n;
}

}  // namespace

std::vector<Line> tokenize(std::string_view source, std::vector<Diagnostic> &diags) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t start = 0;
  while (start <= source.size()) {
    auto nl = source.find('\n', start);
    if (nl == std::string_view::npos) nl = source.size();
    const auto text = source.substr(start, nl - start);
    ++number;

    Line line{number, {}};
    bool bad = false;
    std::size_t i = 0;
    auto span = [&](std::size_t b, std::size_t e) {
      return SourceSpan{number, width(text, 0, b) + 1, std::max(1, width(text, b, e))};
    };
    while (i < text.size() && !bad) {
      const char c = text[i];
      if (is_space(c)) {
        ++i;
      } else if (c == '#') {
        break;
      } else if (c == '"') {
        std::string value;
        auto j = i + 1;
        bool closed = false;
        while (j < text.size()) {
          if (text[j] == '"') {
            closed = true;
            break;
          }
          if (text[j] == '\\') {
            if (j + 1 < text.size() && (text[j + 1] == '"' || text[j + 1] == '\\')) {
              value.push_back(text[j + 1]);
              j += 2;
              continue;
            }
            diags.push_back(error_at(span(j, j + 2), "SYNTAX", "invalid escape sequence in string"));
            bad = true;
            break;
          }
          value.push_back(text[j++]);
        }
        if (bad) break;
        if (!closed) {
          diags.push_back(error_at(span(i, text.size()), "SYNTAX", "unterminated string"));
          bad = true;
          break;
        }
        line.tokens.push_back({TokenKind::string, std::move(value), span(i, j + 1)});
        i = j + 1;
      } else if (c == '=') {
        line.tokens.push_back({TokenKind::equals, "=", span(i, i + 1)});
        ++i;
      } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
        line.tokens.push_back({TokenKind::arrow, "->", span(i, i + 2)});
        i += 2;
      } else {
        auto j = i;
        while (j < text.size() && !is_space(text[j]) && text[j] != '"' && text[j] != '#' &&
               text[j] != '=' && !(text[j] == '-' && j + 1 < text.size() && text[j + 1] == '>'))
          ++j;
        line.tokens.push_back({TokenKind::word, std::string(text.substr(i, j - i)), span(i, j)});
        i = j;
      }
    }
    if (!bad && !line.tokens.empty()) lines.push_back(std::move(line));
    if (nl == source.size()) break;
    start = nl + 1;
  }
  return lines;
}

std::optional<int> parse_int(std::string_view text) {
  if (text.empty()) return std::nullopt;
  for (char c : text)
    if (c < '0' || c > '9') return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<double> parse_double(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

SourceSpan end_of(const Line &line) {
  const auto &last = line.tokens.back().span;
  return {line.number, last.column + last.length, 1};
}

std::string describe(const Token &t) {
  switch (t.kind) {
    case TokenKind::string: return "string";
    case TokenKind::arrow: return "'->'";
    case TokenKind::equals: return "'='";
    case TokenKind::word: return "'" + t.text + "'";
  }
  return "token";
}

}  // namespace cld::detail

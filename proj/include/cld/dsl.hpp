#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cld/model.hpp"

namespace cld {

// 1-based line/column, length in characters (UTF-8 code points).
struct SourceSpan {
  int line = 1;
  int column = 1;
  int length = 1;

  friend bool operator==(const SourceSpan &, const SourceSpan &) = default;
};

enum class Severity { error, warning };

struct Diagnostic {
  Severity severity = Severity::error;
  std::string code;
  std::string message;
  SourceSpan span;
};

// "origin:line:col: error[CODE]: message"
std::string format_diagnostic(const Diagnostic &d, std::string_view origin);
std::string format_diagnostics(const std::vector<Diagnostic> &ds, std::string_view origin);
bool has_errors(const std::vector<Diagnostic> &ds);

struct ParseResult {
  std::optional<Model> model;  // set iff no error diagnostics
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return model.has_value(); }
};

// Parses the line-oriented .cld format:
//   model "<name>"
//   sector <id> "<name>"
//   var <int> "<name>" sector <id> [kind stock|aux]
//   link <int> -> <int> <+|-|?> ["<anchor>"]
//   loop <name> <reinforcing|balancing> = <int> <int> ...
// '#' starts a comment outside quoted strings.
ParseResult parse_model(std::string_view source);

// Canonical text form; parse_model(emit_model(m)) reproduces m.
std::string emit_model(const Model &model);

// Graphviz rendering: one cluster per sector, node label "id: name",
// minus links drawn dashed with a "−" label, unknown links dotted with "?".
std::string export_dot(const Model &model);

// JSON document {"format":1,"name","sectors","variables","links","loops"}.
std::string export_json(const Model &model);

// Inverse of export_json. Throws Error(parse) on schema violations.
Model import_json(std::string_view text);

// Quoted string literal with backslash escapes for '"' and '\\'.
std::string quote(std::string_view text);

}  // namespace cld

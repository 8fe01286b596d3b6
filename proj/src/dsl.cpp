#include "cld/dsl.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "lexer.hpp"

namespace cld {

using detail::error_at;
using detail::Line;
using detail::Token;
using detail::TokenKind;

std::string format_diagnostic(const Diagnostic &d, std::string_view origin) {
  std::ostringstream os;
  os << origin << ':' << d.span.line << ':' << d.span.column << ": "
     << (d.severity == Severity::error ? "error" : "warning") << '[' << d.code << "]: " << d.message;
  return os.str();
}

std::string format_diagnostics(const std::vector<Diagnostic> &ds, std::string_view origin) {
  std::string out;
  for (const auto &d : ds) out += format_diagnostic(d, origin) + "\n";
  return out;
}

bool has_errors(const std::vector<Diagnostic> &ds) {
  return std::any_of(ds.begin(), ds.end(), [](const Diagnostic &d) { return d.severity == Severity::error; });
}

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

namespace {

SourceSpan join(const SourceSpan &a, const SourceSpan &b) {
  if (a.line != b.line || b.column < a.column) return a;
  return {a.line, a.column, b.column + b.length - a.column};
}

SourceSpan line_span(const Line &line) { return join(line.tokens.front().span, line.tokens.back().span); }

// Sequential reader over one line's tokens; every failed expectation
// records a SYNTAX diagnostic and poisons the cursor.
class Cursor {
 public:
  Cursor(const Line &line, std::vector<Diagnostic> &diags) : line_(line), diags_(diags) {}

  bool ok() const { return ok_; }
  bool at_end() const { return pos_ >= line_.tokens.size(); }
  const Token *peek() const { return at_end() ? nullptr : &line_.tokens[pos_]; }

  const Token *next(TokenKind kind, const char *what) {
    if (!ok_) return nullptr;
    if (at_end()) return fail(detail::end_of(line_), std::string("expected ") + what + " at end of line");
    const auto &t = line_.tokens[pos_];
    if (t.kind != kind) return fail(t.span, std::string("expected ") + what + ", found " + detail::describe(t));
    ++pos_;
    return &t;
  }

  const Token *keyword(std::string_view word) {
    auto *t = next(TokenKind::word, ("'" + std::string(word) + "'").c_str());
    if (t && t->text != word) {
      --pos_;
      return fail(t->span, "expected '" + std::string(word) + "', found " + detail::describe(*t));
    }
    return t;
  }

  std::optional<std::pair<int, SourceSpan>> integer(const char *what) {
    auto *t = next(TokenKind::word, what);
    if (!t) return std::nullopt;
    auto v = detail::parse_int(t->text);
    if (!v) {
      fail(t->span, std::string("expected ") + what + ", found " + detail::describe(*t));
      return std::nullopt;
    }
    return std::pair{*v, t->span};
  }

  void finish() {
    if (ok_ && !at_end()) fail(line_.tokens[pos_].span, "unexpected " + detail::describe(line_.tokens[pos_]));
  }

  const Token *fail(const SourceSpan &span, std::string message) {
    if (ok_) diags_.push_back(error_at(span, "SYNTAX", std::move(message)));
    ok_ = false;
    return nullptr;
  }

 private:
  const Line &line_;
  std::vector<Diagnostic> &diags_;
  std::size_t pos_ = 1;
  bool ok_ = true;
};

struct SectorDecl {
  Sector sector;
  SourceSpan id_span;
};

struct VarDecl {
  Variable var;
  SourceSpan id_span, name_span, sector_span;
};

struct LinkDecl {
  Link link;
  SourceSpan line_span, from_span, to_span, polarity_span;
};

struct LoopDeclSpans {
  LoopDecl decl;
  SourceSpan name_span;
  std::vector<SourceSpan> id_spans;
};

}  // namespace

ParseResult parse_model(std::string_view source) {
  std::vector<Diagnostic> diags;
  const auto lines = detail::tokenize(source, diags);

  std::optional<std::string> model_name;
  std::vector<SectorDecl> sectors;
  std::vector<VarDecl> vars;
  std::vector<LinkDecl> links;
  std::vector<LoopDeclSpans> loops;

  for (const auto &line : lines) {
    const auto &head = line.tokens.front();
    Cursor cur(line, diags);
    if (head.kind != TokenKind::word) {
      cur.fail(head.span, "expected a directive, found " + detail::describe(head));
      continue;
    }
    if (head.text == "model") {
      auto *name = cur.next(TokenKind::string, "quoted model name");
      cur.finish();
      if (!cur.ok()) continue;
      if (model_name) {
        diags.push_back(error_at(line_span(line), "SYNTAX", "model name declared twice"));
        continue;
      }
      model_name = name->text;
    } else if (head.text == "sector") {
      auto *id = cur.next(TokenKind::word, "sector id");
      auto *name = cur.next(TokenKind::string, "quoted sector name");
      cur.finish();
      if (cur.ok()) sectors.push_back({{id->text, name->text}, id->span});
    } else if (head.text == "var") {
      auto id = cur.integer("variable id");
      auto *name = cur.next(TokenKind::string, "quoted variable name");
      cur.keyword("sector");
      auto *sector = cur.next(TokenKind::word, "sector id");
      auto kind = VariableKind::stock;
      if (cur.ok() && !cur.at_end()) {
        cur.keyword("kind");
        if (auto *k = cur.next(TokenKind::word, "'stock' or 'aux'")) {
          if (k->text == "aux") kind = VariableKind::aux;
          else if (k->text != "stock") cur.fail(k->span, "expected 'stock' or 'aux', found " + detail::describe(*k));
        }
      }
      cur.finish();
      if (cur.ok())
        vars.push_back({{VariableId{id->first}, name->text, sector->text, kind}, id->second, name->span, sector->span});
    } else if (head.text == "link") {
      auto from = cur.integer("source variable id");
      cur.next(TokenKind::arrow, "'->'");
      auto to = cur.integer("target variable id");
      auto *pol = cur.next(TokenKind::word, "polarity '+', '-' or '?'");
      auto polarity = Polarity::unknown;
      if (pol) {
        if (pol->text == "+") polarity = Polarity::plus;
        else if (pol->text == "-") polarity = Polarity::minus;
        else if (pol->text != "?") cur.fail(pol->span, "expected polarity '+', '-' or '?', found " + detail::describe(*pol));
      }
      std::optional<std::string> anchor;
      if (cur.ok() && !cur.at_end())
        if (auto *a = cur.next(TokenKind::string, "quoted anchor")) anchor = a->text;
      cur.finish();
      if (cur.ok())
        links.push_back({{VariableId{from->first}, VariableId{to->first}, polarity, anchor},
                         line_span(line), from->second, to->second, pol->span});
    } else if (head.text == "loop") {
      auto *name = cur.next(TokenKind::word, "loop name");
      auto *cls_tok = cur.next(TokenKind::word, "'reinforcing' or 'balancing'");
      std::optional<LoopClass> cls;
      if (cls_tok) {
        cls = parse_loop_class(cls_tok->text);
        if (!cls) cur.fail(cls_tok->span, "expected 'reinforcing' or 'balancing', found " + detail::describe(*cls_tok));
      }
      cur.next(TokenKind::equals, "'='");
      LoopDeclSpans decl;
      while (cur.ok() && !cur.at_end()) {
        auto id = cur.integer("variable id");
        if (!id) break;
        decl.decl.sequence.push_back(VariableId{id->first});
        decl.id_spans.push_back(id->second);
      }
      if (cur.ok() && decl.decl.sequence.size() < 2)
        cur.fail(cur.ok() && !decl.id_spans.empty() ? decl.id_spans.back() : detail::end_of(line),
                 "a loop needs at least two variables");
      if (cur.ok()) {
        decl.decl.name = name->text;
        decl.decl.cls = *cls;
        decl.name_span = name->span;
        loops.push_back(std::move(decl));
      }
    } else {
      cur.fail(head.span, "unknown directive " + detail::describe(head));
    }
  }

  // Semantic checks, each anchored at the most specific token available.
  std::set<std::string> sector_ids;
  for (const auto &s : sectors)
    if (!sector_ids.insert(s.sector.id).second)
      diags.push_back(error_at(s.id_span, "DUPLICATE_SECTOR", "sector '" + s.sector.id + "' declared twice"));

  std::set<VariableId> var_ids;
  for (const auto &v : vars) {
    if (v.var.id.value < 1) diags.push_back(error_at(v.id_span, "INVALID_ID", "variable ids must be >= 1"));
    if (!var_ids.insert(v.var.id).second)
      diags.push_back(error_at(v.id_span, "DUPLICATE_VARIABLE",
                               "variable " + std::to_string(v.var.id.value) + " declared twice"));
    if (v.var.name.empty()) diags.push_back(error_at(v.name_span, "EMPTY_NAME", "variable name is empty"));
    if (!sector_ids.count(v.var.sector))
      diags.push_back(error_at(v.sector_span, "UNKNOWN_SECTOR", "sector '" + v.var.sector + "' is not declared"));
  }

  std::set<EdgeKey> link_keys;
  for (const auto &l : links) {
    const auto key = l.link.key();
    if (l.link.from == l.link.to)
      diags.push_back(error_at(l.line_span, "SELF_LOOP",
                               "link " + to_string(key) + " joins a variable to itself"));
    if (!var_ids.count(l.link.from))
      diags.push_back(error_at(l.from_span, "UNKNOWN_VARIABLE",
                               "variable " + std::to_string(l.link.from.value) + " is not declared"));
    if (!var_ids.count(l.link.to))
      diags.push_back(error_at(l.to_span, "UNKNOWN_VARIABLE",
                               "variable " + std::to_string(l.link.to.value) + " is not declared"));
    if (!link_keys.insert(key).second)
      diags.push_back(error_at(l.line_span, "DUPLICATE_LINK", "link " + to_string(key) + " declared twice"));
    if (l.link.polarity == Polarity::unknown)
      diags.push_back({Severity::warning, "UNKNOWN_POLARITY", "link " + to_string(key) + " has unknown polarity",
                       l.polarity_span});
  }

  std::set<std::string> loop_names;
  for (const auto &l : loops) {
    const auto &d = l.decl;
    if (!loop_names.insert(d.name).second)
      diags.push_back(error_at(l.name_span, "DUPLICATE_LOOP_NAME", "loop " + d.name + " declared twice"));
    std::set<VariableId> seen;
    bool elementary = true;
    for (std::size_t i = 0; i < d.sequence.size(); ++i) {
      const auto id = d.sequence[i];
      if (!var_ids.count(id))
        diags.push_back(error_at(l.id_spans[i], "UNKNOWN_VARIABLE",
                                 "variable " + std::to_string(id.value) + " is not declared"));
      if (!seen.insert(id).second) {
        diags.push_back(error_at(l.id_spans[i], "DUPLICATE_IN_SEQUENCE",
                                 "variable " + std::to_string(id.value) + " repeats in loop " + d.name));
        elementary = false;
      }
    }
    if (!elementary) continue;
    const auto n = d.sequence.size();
    for (std::size_t i = 0; i < n; ++i) {
      const EdgeKey e{d.sequence[i], d.sequence[(i + 1) % n]};
      if (link_keys.count(e)) continue;
      const auto span = i + 1 < n ? join(l.id_spans[i], l.id_spans[i + 1]) : l.id_spans[i];
      diags.push_back(error_at(span, "LOOP_EDGE_MISSING",
                               "loop " + d.name + " needs link " + to_string(e) + ", which is not declared"));
    }
  }

  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic &a, const Diagnostic &b) {
    return std::pair(a.span.line, a.span.column) < std::pair(b.span.line, b.span.column);
  });

  ParseResult result;
  if (!has_errors(diags)) {
    std::vector<Sector> ss;
    for (auto &s : sectors) ss.push_back(std::move(s.sector));
    std::vector<Variable> vs;
    for (auto &v : vars) vs.push_back(std::move(v.var));
    std::vector<Link> ls;
    for (auto &l : links) ls.push_back(std::move(l.link));
    std::vector<LoopDecl> ds;
    for (auto &l : loops) ds.push_back(std::move(l.decl));
    result.model = Model(model_name.value_or(""), std::move(ss), std::move(vs), std::move(ls), std::move(ds));
  }
  result.diagnostics = std::move(diags);
  return result;
}

std::string emit_model(const Model &model) {
  std::ostringstream os;
  os << "model " << quote(model.name()) << '\n';
  if (!model.sectors().empty()) {
    os << '\n';
    for (const auto &s : model.sectors()) os << "sector " << s.id << ' ' << quote(s.name) << '\n';
  }
  if (!model.variables().empty()) {
    os << '\n';
    for (const auto &v : model.variables()) {
      os << "var " << v.id.value << ' ' << quote(v.name) << " sector " << v.sector;
      if (v.kind == VariableKind::aux) os << " kind aux";
      os << '\n';
    }
  }
  if (!model.links().empty()) {
    os << '\n';
    for (const auto &l : model.links()) {
      os << "link " << l.from.value << " -> " << l.to.value << ' ' << to_string(l.polarity);
      if (l.anchor) os << ' ' << quote(*l.anchor);
      os << '\n';
    }
  }
  if (!model.declared_loops().empty()) {
    os << '\n';
    for (const auto &d : model.declared_loops()) {
      os << "loop " << d.name << ' ' << to_string(d.cls) << " =";
      for (auto id : d.sequence) os << ' ' << id.value;
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace cld

#include <algorithm>
#include <cmath>
#include <set>

#include "cld/error.hpp"
#include "cld/sim.hpp"
#include "lexer.hpp"

namespace cld {

using detail::error_at;
using detail::Line;
using detail::Token;
using detail::TokenKind;

namespace {

class Reader {
 public:
  Reader(const Line &line, std::vector<Diagnostic> &diags) : line_(line), diags_(diags) {}

  bool ok() const { return ok_; }
  bool at_end() const { return pos_ >= line_.tokens.size(); }
  const SourceSpan &head_span() const { return line_.tokens.front().span; }

  const Token *take(TokenKind kind, const std::string &what) {
    if (!ok_) return nullptr;
    if (at_end()) return fail(detail::end_of(line_), "expected " + what + " at end of line");
    const auto &t = line_.tokens[pos_];
    if (t.kind != kind) return fail(t.span, "expected " + what + ", found " + detail::describe(t));
    ++pos_;
    return &t;
  }

  std::string word(std::initializer_list<std::string_view> allowed) {
    std::string what;
    for (auto a : allowed) what += (what.empty() ? "'" : " or '") + std::string(a) + "'";
    auto *t = take(TokenKind::word, what);
    if (!t) return {};
    if (std::find(allowed.begin(), allowed.end(), t->text) == allowed.end()) {
      fail(t->span, "expected " + what + ", found " + detail::describe(*t));
      return {};
    }
    return t->text;
  }

  std::pair<VariableId, SourceSpan> id() {
    auto *t = take(TokenKind::word, "variable id");
    if (!t) return {};
    auto v = detail::parse_int(t->text);
    if (!v) {
      fail(t->span, "expected variable id, found " + detail::describe(*t));
      return {};
    }
    return {VariableId{*v}, t->span};
  }

  double number() {
    auto *t = take(TokenKind::word, "number");
    if (!t) return 0.0;
    auto v = detail::parse_double(t->text);
    if (!v) {
      fail(t->span, "expected number, found " + detail::describe(*t));
      return 0.0;
    }
    return *v;
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

template <class Map, class Key, class Value>
void put_once(Map &map, const Key &key, Value value, const SourceSpan &span, const std::string &what,
              std::vector<Diagnostic> &diags) {
  if (!map.emplace(key, std::move(value)).second) diags.push_back(error_at(span, "DUPLICATE", what + " given twice"));
}

}  // namespace

ScenarioParseResult parse_scenario(std::string_view source) {
  std::vector<Diagnostic> diags;
  const auto lines = detail::tokenize(source, diags);
  ScenarioSpec spec;
  bool have_name = false, have_clock = false;

  for (const auto &line : lines) {
    Reader in(line, diags);
    const auto &head = line.tokens.front();
    if (head.kind != TokenKind::word) {
      in.fail(head.span, "expected a directive, found " + detail::describe(head));
      continue;
    }
    const auto &kw = head.text;
    if (kw == "scenario") {
      auto *name = in.take(TokenKind::string, "quoted scenario name");
      in.finish();
      if (!in.ok()) continue;
      if (have_name) diags.push_back(error_at(head.span, "DUPLICATE", "scenario name given twice"));
      spec.name = name->text;
      have_name = true;
    } else if (kw == "horizon") {
      const double horizon = in.number();
      in.word({"step"});
      const double dt = in.number();
      in.word({"integrator"});
      const auto integ = in.word({"euler", "rk4"});
      in.finish();
      if (!in.ok()) continue;
      if (have_clock) diags.push_back(error_at(head.span, "DUPLICATE", "horizon line given twice"));
      spec.horizon = horizon;
      spec.dt = dt;
      spec.integrator = integ == "euler" ? Integrator::euler : Integrator::rk4;
      have_clock = true;
    } else if (kw == "init" || kw == "decay") {
      auto [id, span] = in.id();
      const double value = in.number();
      in.finish();
      if (in.ok()) put_once(kw == "init" ? spec.init : spec.decay, id, value, span, kw + " for " + std::to_string(id.value), diags);
    } else if (kw == "gain") {
      auto [from, span] = in.id();
      in.take(TokenKind::arrow, "'->'");
      auto to = in.id().first;
      const double value = in.number();
      in.finish();
      if (in.ok()) put_once(spec.gains, EdgeKey{from, to}, value, span, "gain for " + to_string(EdgeKey{from, to}), diags);
    } else if (kw == "form") {
      auto [id, span] = in.id();
      Form form;
      if (in.word({"linear", "sat"}) == "sat") {
        form.kind = Form::saturating;
        form.k = in.number();
      }
      in.finish();
      if (in.ok()) put_once(spec.forms, id, form, span, "form for " + std::to_string(id.value), diags);
    } else if (kw == "drive") {
      auto [id, span] = in.id();
      Drive drive;
      drive.kind = in.word({"constant", "ramp"}) == "ramp" ? Drive::ramp : Drive::constant;
      drive.value = in.number();
      in.finish();
      if (in.ok()) put_once(spec.drives, id, drive, span, "drive for " + std::to_string(id.value), diags);
    } else if (kw == "shock") {
      Shock shock;
      shock.target = in.id().first;
      in.word({"at"});
      shock.time = in.number();
      shock.mode = in.word({"set", "add"}) == "add" ? Shock::add : Shock::set;
      shock.value = in.number();
      in.finish();
      if (in.ok()) spec.shocks.push_back(shock);
    } else if (kw == "output") {
      std::vector<VariableId> ids;
      do {
        auto [id, span] = in.id();
        if (in.ok()) ids.push_back(id);
      } while (in.ok() && !in.at_end());
      if (in.ok()) spec.outputs.insert(spec.outputs.end(), ids.begin(), ids.end());
    } else {
      in.fail(head.span, "unknown directive " + detail::describe(head));
    }
  }
  if (!have_clock && !has_errors(diags))
    diags.push_back(error_at({1, 1, 1}, "SYNTAX", "missing 'horizon <float> step <float> integrator ...' line"));

  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic &a, const Diagnostic &b) {
    return std::pair(a.span.line, a.span.column) < std::pair(b.span.line, b.span.column);
  });
  ScenarioParseResult result;
  if (!has_errors(diags)) result.spec = std::move(spec);
  result.diagnostics = std::move(diags);
  return result;
}

void check_scenario(const ScenarioSpec &spec, const Model &model) {
  auto bad = [](const std::string &what) { throw Error(ErrorCode::invalid_scenario, what); };
  if (!(spec.horizon > 0)) bad("horizon must be positive");
  if (!(spec.dt > 0)) bad("step must be positive");
  if (spec.dt > spec.horizon) bad("step exceeds horizon");

  auto need_var = [&](VariableId id, const char *what) {
    if (!model.find_variable(id))
      throw Error(ErrorCode::unknown_reference, std::string(what) + " refers to unknown variable " + std::to_string(id.value));
  };
  for (const auto &[id, v] : spec.init) {
    need_var(id, "init");
    if (v < 0) bad("initial level of " + std::to_string(id.value) + " is negative");
  }
  for (const auto &[e, g] : spec.gains) {
    if (!model.has_link(e)) throw Error(ErrorCode::unknown_reference, "gain refers to unknown link " + to_string(e));
    if (g < 0) bad("gain of " + to_string(e) + " is negative");
  }
  for (const auto &[id, d] : spec.decay) {
    need_var(id, "decay");
    if (d < 0) bad("decay of " + std::to_string(id.value) + " is negative");
  }
  for (const auto &[id, f] : spec.forms) {
    need_var(id, "form");
    if (f.kind == Form::saturating && !(f.k > 0)) bad("saturation constant of " + std::to_string(id.value) + " must be positive");
  }
  for (const auto &[id, d] : spec.drives) need_var(id, "drive");
  for (const auto &s : spec.shocks) {
    need_var(s.target, "shock");
    if (s.time < 0) bad("shock time is negative");
  }
  for (auto id : spec.outputs) need_var(id, "output");
}

}  // namespace cld

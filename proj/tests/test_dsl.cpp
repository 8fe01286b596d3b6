#include <random>

#include "cld/dsl.hpp"
#include "cld/error.hpp"
#include "doctest.h"
#include "json.hpp"
#include "support/oracles.hpp"
#include "support/paths.hpp"

using namespace cld;

namespace {

const char *kHeader =
    "model \"t\"\n"
    "sector s \"S\"\n"
    "var 1 \"a\" sector s\n"
    "var 2 \"b\" sector s\n";

std::vector<Diagnostic> diagnostics_of(const std::string &text) { return parse_model(text).diagnostics; }

Diagnostic only(const std::vector<Diagnostic> &ds) {
  REQUIRE(ds.size() == 1);
  return ds.front();
}

}  // namespace

TEST_CASE("parses every statement form") {
  const auto r = parse_model(
      "# comment line\n"
      "model \"Demo \\\"quoted\\\" \\\\ name\"   # trailing comment\n"
      "sector core \"Core sector\"\n"
      "var 1 \"Alpha # not a comment\" sector core\n"
      "var 2 \"Beta\" sector core kind aux\n"
      "link 1 -> 2 + \"alpha raises beta\"\n"
      "link 2 -> 1 -\n"
      "loop L balancing = 1 2\n");
  REQUIRE(r.ok());
  CHECK(r.diagnostics.empty());
  const auto &m = *r.model;
  CHECK(m.name() == "Demo \"quoted\" \\ name");
  CHECK(m.sectors() == std::vector<Sector>{{"core", "Core sector"}});
  CHECK(m.find_variable({1})->name == "Alpha # not a comment");
  CHECK(m.find_variable({2})->kind == VariableKind::aux);
  CHECK(m.find_link({{1}, {2}})->anchor == std::optional<std::string>("alpha raises beta"));
  CHECK(m.find_link({{2}, {1}})->polarity == Polarity::minus);
  CHECK(m.declared_loops().front().cls == LoopClass::balancing);
}

TEST_CASE("syntax errors carry line and column") {
  const auto &d = only(diagnostics_of(std::string(kHeader) + "link 1 => 2 +\n"));
  CHECK(d.code == "SYNTAX");
  CHECK(d.span.line == 5);
  CHECK(d.span.column == 8);

  const auto &u = only(diagnostics_of("model \"unterminated\n"));
  CHECK(u.code == "SYNTAX");
  CHECK(u.span.line == 1);
  CHECK(u.span.column == 7);

  const auto &e = only(diagnostics_of("model \"bad \\n escape\"\n"));
  CHECK(e.code == "SYNTAX");

  const auto &k = only(diagnostics_of("modle \"x\"\n"));
  CHECK(k.code == "SYNTAX");
  CHECK(k.span == SourceSpan{1, 1, 5});
}

TEST_CASE("columns count code points, not bytes") {
  const auto &d = only(diagnostics_of("model \"λλ\" extra\n"));
  CHECK(d.span.column == 12);
}

TEST_CASE("semantic diagnostics point at the offending token") {
  SUBCASE("self loop spans the link statement") {
    const auto &d = only(diagnostics_of(std::string(kHeader) + "link 2 -> 2 +\n"));
    CHECK(d.code == "SELF_LOOP");
    CHECK(d.span == SourceSpan{5, 1, 13});
  }
  SUBCASE("unknown variable") {
    const auto &d = only(diagnostics_of(std::string(kHeader) + "link 1 -> 7 +\n"));
    CHECK(d.code == "UNKNOWN_VARIABLE");
    CHECK(d.span == SourceSpan{5, 11, 1});
  }
  SUBCASE("duplicate link") {
    const auto ds = diagnostics_of(std::string(kHeader) + "link 1 -> 2 +\nlink 1 -> 2 -\n");
    CHECK(only(ds).code == "DUPLICATE_LINK");
    CHECK(only(ds).span.line == 6);
  }
  SUBCASE("duplicate variable and sector") {
    const auto ds = diagnostics_of(std::string(kHeader) + "sector s \"again\"\nvar 2 \"c\" sector s\n");
    REQUIRE(ds.size() == 2);
    CHECK(ds[0].code == "DUPLICATE_SECTOR");
    CHECK(ds[1].code == "DUPLICATE_VARIABLE");
    CHECK(ds[1].span == SourceSpan{6, 5, 1});
  }
  SUBCASE("unknown sector and empty name") {
    const auto ds = diagnostics_of("var 1 \"\" sector nowhere\n");
    REQUIRE(ds.size() == 2);
    CHECK(ds[0].code == "EMPTY_NAME");
    CHECK(ds[1].code == "UNKNOWN_SECTOR");
    CHECK(ds[1].span == SourceSpan{1, 17, 7});
  }
  SUBCASE("loop edge missing names the implied link") {
    const auto &d = only(diagnostics_of(std::string(kHeader) + "link 1 -> 2 +\nloop R reinforcing = 1 2\n"));
    CHECK(d.code == "LOOP_EDGE_MISSING");
    CHECK(d.message.find("2->1") != std::string::npos);
    CHECK(d.span == SourceSpan{6, 24, 1});
  }
  SUBCASE("repeated id in a loop") {
    const auto ds = diagnostics_of(std::string(kHeader) +
                                   "link 1 -> 2 +\nlink 2 -> 1 +\nloop R reinforcing = 1 2 1\n");
    CHECK(only(ds).code == "DUPLICATE_IN_SEQUENCE");
    CHECK(only(ds).span == SourceSpan{7, 26, 1});
  }
  SUBCASE("duplicate loop name") {
    const auto ds = diagnostics_of(std::string(kHeader) +
                                   "link 1 -> 2 +\nlink 2 -> 1 +\nloop R reinforcing = 1 2\nloop R reinforcing = 2 1\n");
    CHECK(only(ds).code == "DUPLICATE_LOOP_NAME");
    CHECK(only(ds).span == SourceSpan{8, 6, 1});
  }
  SUBCASE("invalid id") {
    CHECK(only(diagnostics_of("sector s \"S\"\nvar 0 \"z\" sector s\n")).code == "INVALID_ID");
  }
}

TEST_CASE("unknown polarity is a warning and still yields a model") {
  const auto r = parse_model(std::string(kHeader) + "link 1 -> 2 ?\n");
  REQUIRE(r.ok());
  const auto &d = only(r.diagnostics);
  CHECK(d.severity == Severity::warning);
  CHECK(d.code == "UNKNOWN_POLARITY");
  CHECK_FALSE(has_errors(r.diagnostics));
}

TEST_CASE("diagnostics are sorted by position and formatted with the origin") {
  const auto r = parse_model(std::string(kHeader) + "link 2 -> 9 +\nlink 1 -> 1 +\n");
  CHECK_FALSE(r.ok());
  REQUIRE(r.diagnostics.size() == 2);
  CHECK(r.diagnostics[0].span.line == 5);
  CHECK(r.diagnostics[1].span.line == 6);
  CHECK(format_diagnostic(r.diagnostics[1], "f.cld") == "f.cld:6:1: error[SELF_LOOP]: link 1->1 joins a variable to itself");
}

TEST_CASE("every corpus model round-trips through emit") {
  for (const auto *name : {"hei-ai.cld", "two-cycle.cld", "r1-loop.cld", "b2-integrity.cld"}) {
    CAPTURE(name);
    const auto m = paths::load_model(paths::corpus() / "models" / name);
    const auto text = emit_model(m);
    const auto again = parse_model(text);
    REQUIRE(again.ok());
    CHECK(again.diagnostics.empty());
    CHECK(*again.model == m);
    CHECK(emit_model(*again.model) == text);
  }
}

TEST_CASE("random valid models round-trip through emit and JSON") {
  std::mt19937 rng(20240611);
  int with_loops = 0;
  for (int i = 0; i < 500; ++i) {
    const auto m = oracle::random_valid_model(rng);
    CAPTURE(i);
    REQUIRE(validate(m).empty());
    const auto text = emit_model(m);
    const auto r = parse_model(text);
    REQUIRE_MESSAGE(r.ok(), text);
    CHECK(*r.model == m);
    CHECK(import_json(export_json(m)) == m);
    with_loops += !m.declared_loops().empty();
  }
  CHECK(with_loops > 100);
}

TEST_CASE("emit writes sections in a fixed order") {
  const auto m = paths::load_model(paths::corpus() / "models" / "two-cycle.cld");
  CHECK(emit_model(m) ==
        "model \"two-cycle\"\n\n"
        "sector hei \"Focal HEI\"\n\n"
        "var 9 \"Student job placement\" sector hei\n"
        "var 10 \"HEI relative reputation\" sector hei\n\n"
        "link 9 -> 10 +\n"
        "link 10 -> 9 +\n\n"
        "loop R13 reinforcing = 9 10\n");
}

TEST_CASE("JSON export follows the documented schema") {
  const auto &m = canonical_hei_model();
  const auto doc = nlohmann::json::parse(export_json(m));
  CHECK(doc["format"] == 1);
  CHECK(doc["name"] == m.name());
  CHECK(doc["variables"].size() == 27);
  CHECK(doc["links"].size() == 45);
  CHECK(doc["loops"].size() == 18);
  CHECK(doc["links"][0]["polarity"] == "+");
  CHECK(doc["loops"][0]["class"] == "reinforcing");
  CHECK(import_json(export_json(m)) == m);
  CHECK_THROWS_AS(import_json("{\"format\": 2}"), Error);
  CHECK_THROWS_AS(import_json("not json"), Error);
}

TEST_CASE("DOT export has one node per variable and styled negative links") {
  const auto dot = export_dot(canonical_hei_model());
  std::size_t nodes = 0, dashed = 0, pos = 0;
  while ((pos = dot.find("[label=\"", pos)) != std::string::npos) {
    const auto line_start = dot.rfind('\n', pos) + 1;
    if (dot.compare(line_start, 5, "    v") == 0) ++nodes;
    ++pos;
  }
  for (pos = 0; (pos = dot.find("style=dashed", pos)) != std::string::npos; ++pos) ++dashed;
  CHECK(nodes == 27);
  CHECK(dashed == 5);
  CHECK(dot.rfind("digraph ", 0) == 0);
  CHECK(dot.find("subgraph \"cluster_hei\"") != std::string::npos);
  CHECK(dot.find("  v19 -> v8 [style=dashed, label=\"−\"];") != std::string::npos);
}

TEST_CASE("quote escapes quotes and backslashes only") {
  CHECK(quote("a\"b\\c") == "\"a\\\"b\\\\c\"");
  CHECK(quote("") == "\"\"");
}

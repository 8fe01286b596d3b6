#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include <unistd.h>

#include "cld/corpus.hpp"
#include "cld/error.hpp"
#include "cld/loops.hpp"
#include "doctest.h"
#include "support/paths.hpp"

using namespace cld;
namespace fs = std::filesystem;

namespace {

const CorpusEntry *entry(const std::vector<CorpusEntry> &all, const std::string &path) {
  for (const auto &e : all)
    if (e.path == path) return &e;
  return nullptr;
}

std::vector<double> column(const std::string &csv, int id) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  // Header fields may be quoted; find the column by its "id:" prefix.
  std::vector<std::string> header;
  std::string field;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') quoted = !quoted;
    else if (c == ',' && !quoted) header.push_back(std::exchange(field, ""));
    else field += c;
  }
  header.push_back(field);
  const std::string prefix = std::to_string(id) + ":";
  std::size_t col = 0;
  while (col < header.size() && header[col].rfind(prefix, 0) != 0) ++col;
  REQUIRE(col < header.size());
  std::vector<double> out;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string cell;
    for (std::size_t c = 0; c <= col; ++c) std::getline(row, cell, ',');
    out.push_back(std::stod(cell));
  }
  return out;
}

std::vector<double> times(const std::string &csv) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<double> out;
  while (std::getline(in, line)) out.push_back(std::stod(line.substr(0, line.find(','))));
  return out;
}

std::string golden(const std::string &name) { return read_text_file(paths::corpus() / "golden" / (name + ".csv")); }

// Scratch copy of the corpus for tampering.
struct ScratchCorpus {
  fs::path root;
  explicit ScratchCorpus(const std::string &tag) {
    root = fs::temp_directory_path() / ("cld-corpus-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::copy(paths::corpus(), root, fs::copy_options::recursive);
  }
  ~ScratchCorpus() { fs::remove_all(root); }
};

ErrorCode load_code(const fs::path &root) {
  try {
    load_corpus(root);
  } catch (const Error &e) {
    return e.code();
  }
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST_CASE("corpus loads and lists the bundled entries") {
  const auto all = load_corpus(paths::corpus());
  for (const auto *p : {"models/hei-ai.cld", "models/two-cycle.cld", "scenarios/baseline.scn",
                        "scenarios/cost-cutting.scn", "scenarios/aip-shock.scn", "scenarios/automation-ramp.scn"})
    CHECK_MESSAGE(entry(all, p) != nullptr, p);
  const auto *base = entry(all, "golden/baseline.csv");
  REQUIRE(base != nullptr);
  CHECK(base->kind == CorpusKind::golden);
  CHECK(base->model == std::optional<std::string>("models/hei-ai.cld"));
  CHECK(base->scenario == std::optional<std::string>("scenarios/baseline.scn"));
  CHECK(base->sha256 == sha256_hex(golden("baseline")));
}

TEST_CASE("bundled model file equals the embedded canonical source") {
  CHECK(read_text_file(paths::corpus() / "models/hei-ai.cld") == canonical_hei_source());
  const auto two = paths::load_model(paths::corpus() / "models/two-cycle.cld");
  CHECK(enumerate_cycles(two).size() == 1);
}

TEST_CASE("every golden regenerates byte for byte") {
  const auto all = load_corpus(paths::corpus());
  CHECK(stale_goldens(paths::corpus(), all).empty());
  for (const auto &e : all)
    if (e.kind == CorpusKind::golden) CHECK(regenerate_golden(paths::corpus(), e) == read_text_file(paths::corpus() / e.path));
}

TEST_CASE("cost cutting drives net revenue down") {
  const auto csv = golden("cost-cutting");
  const auto t = times(csv);
  const auto revenue = column(csv, 12);
  for (std::size_t k = 1; k < t.size(); ++k)
    if (t[k - 1] >= 5.0) CHECK(revenue[k] <= revenue[k - 1]);
  CHECK(revenue.back() < revenue.front());
}

TEST_CASE("integrity measures protect student learning after a shock") {
  const double with = column(golden("aip-shock"), 8).back();
  const double without = column(golden("aip-shock-no-measures"), 8).back();
  CHECK(with > without);
}

TEST_CASE("the skills channel offsets automation for job placement") {
  const double with = column(golden("automation-ramp"), 9).back();
  const double without = column(golden("automation-ramp-no-skills"), 9).back();
  CHECK(with > without);
}

TEST_CASE("tampering is detected") {
  SUBCASE("changed golden") {
    ScratchCorpus c("golden");
    std::ofstream(c.root / "golden/baseline.csv", std::ios::app) << "1,2\n";
    CHECK(load_code(c.root) == ErrorCode::corpus_corrupt);
  }
  SUBCASE("missing file") {
    ScratchCorpus c("missing");
    fs::remove(c.root / "models/two-cycle.cld");
    try {
      load_corpus(c.root);
      FAIL("expected CORPUS_CORRUPT");
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::corpus_corrupt);
      CHECK(std::string(e.what()).find("models/two-cycle.cld") != std::string::npos);
    }
  }
  SUBCASE("model with a warning") {
    ScratchCorpus c("warning");
    auto text = read_text_file(c.root / "models/two-cycle.cld");
    text.replace(text.find("link 9 -> 10 +"), 14, "link 9 -> 10 ?");
    write_text_file(c.root / "models/two-cycle.cld", text);
    CHECK(load_code(c.root) == ErrorCode::corpus_corrupt);
    const auto manifest = read_text_file(c.root / "MANIFEST");
    try {
      refresh_corpus(c.root);
      FAIL("expected CORPUS_CORRUPT");
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::corpus_corrupt);
    }
    CHECK(read_text_file(c.root / "MANIFEST") == manifest);
  }
  SUBCASE("stale golden is reported and refreshed") {
    ScratchCorpus c("stale");
    auto scn = read_text_file(c.root / "scenarios/b2-convergence.scn");
    scn.replace(scn.find("drive 19 constant 0.5"), 21, "drive 19 constant 0.6");
    write_text_file(c.root / "scenarios/b2-convergence.scn", scn);
    CHECK(load_code(c.root) == ErrorCode::corpus_corrupt);
    auto entries = load_corpus(paths::corpus());
    for (auto &e : entries) e.sha256 = sha256_hex(read_text_file(c.root / e.path));
    CHECK(stale_goldens(c.root, entries) == std::vector<std::string>{"golden/b2-convergence.csv"});
    refresh_corpus(c.root);
    const auto fresh = load_corpus(c.root);
    CHECK(stale_goldens(c.root, fresh).empty());
  }
  SUBCASE("malformed manifest") {
    ScratchCorpus c("manifest");
    std::ofstream(c.root / "MANIFEST", std::ios::app) << "model models/x.cld\n";
    CHECK(load_code(c.root) == ErrorCode::corpus_corrupt);
  }
}

TEST_CASE("sha256 of known inputs") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("missing files raise IO") {
  try {
    read_text_file(paths::corpus() / "no-such-file");
    FAIL("expected IO");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::io);
  }
}

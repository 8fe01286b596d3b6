#include "cld/corpus.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <map>
#include <sstream>

#include "cld/dsl.hpp"
#include "cld/error.hpp"
#include "cld/sim.hpp"
#include "lexer.hpp"

namespace cld {

namespace fs = std::filesystem;

std::string_view to_string(CorpusKind kind) {
  switch (kind) {
    case CorpusKind::model: return "model";
    case CorpusKind::scenario: return "scenario";
    case CorpusKind::golden: return "golden";
  }
  return "model";
}

std::string read_text_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::io, "cannot read " + path.string());
  return os.str();
}

void write_text_file(const fs::path &path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr))
    throw Error(ErrorCode::io, "sha256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

namespace {

[[noreturn]] void corrupt(const std::string &path, const std::string &why) {
  throw Error(ErrorCode::corpus_corrupt, path + ": " + why);
}

std::vector<CorpusEntry> parse_manifest(const fs::path &root) {
  const auto manifest = (root / "MANIFEST").string();
  std::string text;
  try {
    text = read_text_file(root / "MANIFEST");
  } catch (const Error &e) {
    corrupt(manifest, e.what());
  }
  std::vector<Diagnostic> diags;
  const auto lines = detail::tokenize(text, diags);
  if (!diags.empty()) corrupt(manifest, format_diagnostics(diags, "MANIFEST"));

  std::vector<CorpusEntry> entries;
  for (const auto &line : lines) {
    const auto &t = line.tokens;
    auto bad = [&](const std::string &why) { corrupt(manifest, "line " + std::to_string(line.number) + ": " + why); };
    if (t.size() < 3 || t[0].kind != detail::TokenKind::word || t[1].kind != detail::TokenKind::word)
      bad("expected '<kind> <path> key=value ... \"description\"'");
    CorpusEntry e;
    if (t[0].text == "model") e.kind = CorpusKind::model;
    else if (t[0].text == "scenario") e.kind = CorpusKind::scenario;
    else if (t[0].text == "golden") e.kind = CorpusKind::golden;
    else bad("unknown kind '" + t[0].text + "'");
    e.path = t[1].text;
    std::size_t i = 2;
    while (i + 2 < t.size() && t[i].kind == detail::TokenKind::word && t[i + 1].kind == detail::TokenKind::equals) {
      const auto &key = t[i].text;
      const auto &value = t[i + 2].text;
      if (key == "sha256") e.sha256 = value;
      else if (key == "model") e.model = value;
      else if (key == "scenario") e.scenario = value;
      else bad("unknown key '" + key + "'");
      i += 3;
    }
    if (i + 1 != t.size() || t[i].kind != detail::TokenKind::string) bad("expected a quoted description last");
    e.description = t[i].text;
    if (e.sha256.empty()) bad("missing sha256");
    entries.push_back(std::move(e));
  }
  return entries;
}

const CorpusEntry *find_entry(const std::vector<CorpusEntry> &entries, const std::string &path, CorpusKind kind) {
  for (const auto &e : entries)
    if (e.path == path && e.kind == kind) return &e;
  return nullptr;
}

Model load_model_strict(const fs::path &root, const std::string &path) {
  const auto result = parse_model(read_text_file(root / path));
  if (!result.diagnostics.empty()) corrupt(path, "\n" + format_diagnostics(result.diagnostics, path));
  return *result.model;
}

ScenarioSpec load_scenario_strict(const fs::path &root, const std::string &path) {
  const auto result = parse_scenario(read_text_file(root / path));
  if (!result.diagnostics.empty()) corrupt(path, "\n" + format_diagnostics(result.diagnostics, path));
  return *result.spec;
}

std::string run_pair(const fs::path &root, const std::string &model_path, const std::string &scenario_path) {
  const auto model = load_model_strict(root, model_path);
  const auto spec = load_scenario_strict(root, scenario_path);
  const auto traj = integrate(compile(model, spec));
  return export_csv(traj, traj.outputs);
}

void check_entries(const fs::path &root, const std::vector<CorpusEntry> &entries, bool check_hashes) {
  for (const auto &e : entries) {
    std::string bytes;
    try {
      bytes = read_text_file(root / e.path);
    } catch (const Error &err) {
      corrupt(e.path, err.what());
    }
    if (check_hashes && sha256_hex(bytes) != e.sha256) corrupt(e.path, "content hash does not match MANIFEST");
    try {
      switch (e.kind) {
        case CorpusKind::model:
          load_model_strict(root, e.path);
          break;
        case CorpusKind::scenario: {
          if (!e.model || !find_entry(entries, *e.model, CorpusKind::model)) corrupt(e.path, "scenario needs a model= entry");
          compile(load_model_strict(root, *e.model), load_scenario_strict(root, e.path));
          break;
        }
        case CorpusKind::golden:
          if (!e.model || !find_entry(entries, *e.model, CorpusKind::model)) corrupt(e.path, "golden needs a model= entry");
          if (!e.scenario || !find_entry(entries, *e.scenario, CorpusKind::scenario))
            corrupt(e.path, "golden needs a scenario= entry");
          break;
      }
    } catch (const Error &err) {
      if (err.code() == ErrorCode::corpus_corrupt) throw;
      corrupt(e.path, err.what());
    }
  }
}

std::string format_manifest(const std::vector<CorpusEntry> &entries) {
  std::ostringstream os;
  os << "# Corpus manifest: <kind> <path> sha256=<hex> [model=<path>] [scenario=<path>] \"<description>\"\n";
  os << "# Regenerate goldens and hashes with: cld corpus <root> --refresh\n";
  for (const auto &e : entries) {
    os << to_string(e.kind) << ' ' << e.path << " sha256=" << e.sha256;
    if (e.model) os << " model=" << *e.model;
    if (e.scenario) os << " scenario=" << *e.scenario;
    os << ' ' << quote(e.description) << '\n';
  }
  return os.str();
}

}  // namespace

std::vector<CorpusEntry> load_corpus(const fs::path &root) {
  auto entries = parse_manifest(root);
  check_entries(root, entries, true);
  return entries;
}

std::string regenerate_golden(const fs::path &root, const CorpusEntry &golden) {
  if (golden.kind != CorpusKind::golden || !golden.model || !golden.scenario)
    throw Error(ErrorCode::invalid_argument, golden.path + " is not a golden entry");
  return run_pair(root, *golden.model, *golden.scenario);
}

std::vector<std::string> stale_goldens(const fs::path &root, const std::vector<CorpusEntry> &entries) {
  std::vector<std::string> stale;
  for (const auto &e : entries)
    if (e.kind == CorpusKind::golden && read_text_file(root / e.path) != regenerate_golden(root, e))
      stale.push_back(e.path);
  return stale;
}

void refresh_corpus(const fs::path &root) {
  auto entries = parse_manifest(root);
  check_entries(root, entries, false);  // nothing is written unless every input is sound
  for (const auto &e : entries)
    if (e.kind == CorpusKind::golden) write_text_file(root / e.path, regenerate_golden(root, e));
  for (auto &e : entries) e.sha256 = sha256_hex(read_text_file(root / e.path));
  write_text_file(root / "MANIFEST", format_manifest(entries));
}

}  // namespace cld

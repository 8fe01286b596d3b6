#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cld {

enum class CorpusKind { model, scenario, golden };

std::string_view to_string(CorpusKind kind);

// One MANIFEST line:
//   <kind> <path> sha256=<hex> [model=<path>] [scenario=<path>] "<description>"
// Paths are relative to the corpus root. Scenarios name the model they run
// against; goldens name both.
struct CorpusEntry {
  std::string path;
  CorpusKind kind = CorpusKind::model;
  std::string description;
  std::string sha256;
  std::optional<std::string> model;
  std::optional<std::string> scenario;
};

// Reads <root>/MANIFEST and checks every entry: the file exists and matches
// its hash, models parse without any diagnostic, scenarios compile against
// their model, goldens reference a model and a scenario entry. Throws
// Error(corpus_corrupt) naming the first failing path.
std::vector<CorpusEntry> load_corpus(const std::filesystem::path &root);

// Runs a golden entry's (model, scenario) pair and returns the CSV it should
// contain.
std::string regenerate_golden(const std::filesystem::path &root, const CorpusEntry &golden);

// Paths of goldens whose stored bytes differ from a fresh run.
std::vector<std::string> stale_goldens(const std::filesystem::path &root, const std::vector<CorpusEntry> &entries);

// Rewrites every golden from its run and refreshes all MANIFEST hashes.
// Skips the hash check on load, so it also repairs a stale manifest.
void refresh_corpus(const std::filesystem::path &root);

std::string read_text_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, std::string_view text);
std::string sha256_hex(std::string_view bytes);

}  // namespace cld

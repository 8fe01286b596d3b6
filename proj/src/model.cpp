#include "cld/model.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "cld/error.hpp"

namespace cld {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "INVALID_ARGUMENT";
    case ErrorCode::io: return "IO";
    case ErrorCode::parse: return "PARSE";
    case ErrorCode::duplicate_in_sequence: return "DUPLICATE_IN_SEQUENCE";
    case ErrorCode::edge_missing: return "EDGE_MISSING";
    case ErrorCode::cycle_limit: return "CYCLE_LIMIT";
    case ErrorCode::unverified_loop: return "UNVERIFIED_LOOP";
    case ErrorCode::inconsistent_solution: return "INCONSISTENT_SOLUTION";
    case ErrorCode::unknown_polarity: return "UNKNOWN_POLARITY";
    case ErrorCode::unknown_reference: return "UNKNOWN_REFERENCE";
    case ErrorCode::invalid_scenario: return "INVALID_SCENARIO";
    case ErrorCode::numeric_blowup: return "NUMERIC_BLOWUP";
    case ErrorCode::corpus_corrupt: return "CORPUS_CORRUPT";
  }
  return "UNKNOWN";
}

std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::plus: return "+";
    case Polarity::minus: return "-";
    case Polarity::unknown: return "?";
  }
  return "?";
}

std::string_view to_string(VariableKind k) { return k == VariableKind::stock ? "stock" : "aux"; }

std::string_view to_string(LoopClass c) {
  switch (c) {
    case LoopClass::reinforcing: return "reinforcing";
    case LoopClass::balancing: return "balancing";
    case LoopClass::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

std::optional<LoopClass> parse_loop_class(std::string_view word) {
  if (word == "reinforcing") return LoopClass::reinforcing;
  if (word == "balancing") return LoopClass::balancing;
  return std::nullopt;
}

std::string to_string(EdgeKey e) {
  return std::to_string(e.from.value) + "->" + std::to_string(e.to.value);
}

std::vector<EdgeKey> cycle_edges(const std::vector<VariableId> &sequence) {
  std::vector<EdgeKey> out;
  const auto n = sequence.size();
  if (n == 0) return out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back({sequence[i], sequence[(i + 1) % n]});
  return out;
}

Model::Model(std::string name, std::vector<Sector> sectors, std::vector<Variable> variables,
             std::vector<Link> links, std::vector<LoopDecl> loops)
    : name_(std::move(name)),
      sectors_(std::move(sectors)),
      variables_(std::move(variables)),
      links_(std::move(links)),
      loops_(std::move(loops)) {
  std::stable_sort(variables_.begin(), variables_.end(),
                   [](const Variable &a, const Variable &b) { return a.id < b.id; });
  std::stable_sort(links_.begin(), links_.end(),
                   [](const Link &a, const Link &b) { return a.key() < b.key(); });
}

const Variable *Model::find_variable(VariableId id) const {
  auto it = std::lower_bound(variables_.begin(), variables_.end(), id,
                             [](const Variable &v, VariableId x) { return v.id < x; });
  return it != variables_.end() && it->id == id ? &*it : nullptr;
}

const Link *Model::find_link(EdgeKey key) const {
  auto it = std::lower_bound(links_.begin(), links_.end(), key,
                             [](const Link &l, EdgeKey k) { return l.key() < k; });
  return it != links_.end() && it->key() == key ? &*it : nullptr;
}

Model Model::with_polarity(EdgeKey key, Polarity p) const {
  auto links = links_;
  auto it = std::find_if(links.begin(), links.end(), [&](const Link &l) { return l.key() == key; });
  if (it == links.end()) throw Error(ErrorCode::unknown_reference, "no link " + to_string(key));
  it->polarity = p;
  return with_links(std::move(links));
}

Model Model::with_links(std::vector<Link> links) const {
  return Model(name_, sectors_, variables_, std::move(links), loops_);
}

Model Model::with_loops(std::vector<LoopDecl> loops) const {
  return Model(name_, sectors_, variables_, links_, std::move(loops));
}

namespace {

// Sort key realizing the (variable id, link pair, loop name) report order.
// Sector problems sort first; they have no variable/link/loop location.
struct ViolationKey {
  int group = 0;
  int a = 0;
  int b = 0;
  std::string text;
  std::size_t seq = 0;

  auto tie() const { return std::tie(group, a, b, text, seq); }
  bool operator<(const ViolationKey &o) const { return tie() < o.tie(); }
};

// Sector ids and loop names are written unquoted in model files.
bool is_bare_word(std::string_view s) {
  if (s.empty() || s.find("->") != std::string_view::npos) return false;
  for (char c : s)
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '"' || c == '#' || c == '=') return false;
  return true;
}

std::string var_loc(VariableId id) { return "variable " + std::to_string(id.value); }
std::string link_loc(EdgeKey e) { return "link " + to_string(e); }
std::string loop_loc(const std::string &name) { return "loop " + name; }

}  // namespace

ValidationReport validate(const Model &model) {
  std::vector<std::pair<ViolationKey, Violation>> found;
  std::size_t seq = 0;
  auto add = [&](ViolationKey key, std::string code, std::string location, std::string message) {
    key.seq = seq++;
    found.push_back({std::move(key), Violation{std::move(code), std::move(location), std::move(message)}});
  };

  std::set<std::string> sector_ids;
  for (const auto &s : model.sectors()) {
    if (!sector_ids.insert(s.id).second)
      add({0, 0, 0, s.id, 0}, "DUPLICATE_SECTOR", "sector " + s.id, "sector declared twice");
    if (!is_bare_word(s.id)) add({0, 0, 0, s.id, 0}, "INVALID_ID", "sector " + s.id, "sector id must be a single word");
  }

  std::set<VariableId> var_ids;
  for (const auto &v : model.variables()) {
    const auto k = ViolationKey{1, v.id.value, 0, {}, 0};
    if (v.id.value < 1) add(k, "INVALID_ID", var_loc(v.id), "variable ids must be >= 1");
    if (!var_ids.insert(v.id).second)
      add(k, "DUPLICATE_VARIABLE", var_loc(v.id), "variable declared twice");
    if (v.name.empty()) add(k, "EMPTY_NAME", var_loc(v.id), "variable name is empty");
    if (!sector_ids.count(v.sector))
      add(k, "UNKNOWN_SECTOR", var_loc(v.id), "sector '" + v.sector + "' is not declared");
  }

  std::set<EdgeKey> link_keys;
  for (const auto &l : model.links()) {
    const auto k = ViolationKey{2, l.from.value, l.to.value, {}, 0};
    if (l.from == l.to) add(k, "SELF_LOOP", link_loc(l.key()), "links must join distinct variables");
    if (!link_keys.insert(l.key()).second)
      add(k, "DUPLICATE_LINK", link_loc(l.key()), "parallel link");
    if (!var_ids.count(l.from))
      add(k, "UNKNOWN_VARIABLE", link_loc(l.key()),
          "source " + std::to_string(l.from.value) + " is not declared");
    if (!var_ids.count(l.to))
      add(k, "UNKNOWN_VARIABLE", link_loc(l.key()),
          "target " + std::to_string(l.to.value) + " is not declared");
  }

  std::set<std::string> loop_names;
  for (const auto &d : model.declared_loops()) {
    const auto k = ViolationKey{3, 0, 0, d.name, 0};
    if (!is_bare_word(d.name)) add(k, "INVALID_ID", loop_loc(d.name), "loop name must be a single word");
    if (!loop_names.insert(d.name).second)
      add(k, "DUPLICATE_LOOP_NAME", loop_loc(d.name), "loop declared twice");
    if (d.cls == LoopClass::indeterminate)
      add(k, "INVALID_CLASS", loop_loc(d.name), "declared class must be reinforcing or balancing");
    if (d.sequence.size() < 2) {
      add(k, "LOOP_TOO_SHORT", loop_loc(d.name), "a loop needs at least two variables");
      continue;
    }
    std::set<VariableId> seen;
    bool elementary = true;
    for (auto id : d.sequence) {
      if (!var_ids.count(id))
        add(k, "UNKNOWN_VARIABLE", loop_loc(d.name), "variable " + std::to_string(id.value) + " is not declared");
      if (!seen.insert(id).second) {
        add(k, "DUPLICATE_IN_SEQUENCE", loop_loc(d.name), "variable " + std::to_string(id.value) + " repeats");
        elementary = false;
      }
    }
    if (!elementary) continue;
    for (const auto &e : cycle_edges(d.sequence))
      if (!link_keys.count(e))
        add(k, "LOOP_EDGE_MISSING", loop_loc(d.name), "implied link " + to_string(e) + " does not exist");
  }

  std::stable_sort(found.begin(), found.end(),
                   [](const auto &x, const auto &y) { return x.first < y.first; });
  ValidationReport report;
  report.reserve(found.size());
  for (auto &f : found) report.push_back(std::move(f.second));
  return report;
}

std::vector<EdgeKey> edges_from_loops(const std::vector<LoopDecl> &decls) {
  std::set<EdgeKey> edges;
  for (const auto &d : decls) {
    std::set<VariableId> seen;
    for (auto id : d.sequence)
      if (!seen.insert(id).second)
        throw Error(ErrorCode::duplicate_in_sequence,
                    "loop " + d.name + " repeats variable " + std::to_string(id.value));
    for (const auto &e : cycle_edges(d.sequence)) edges.insert(e);
  }
  return {edges.begin(), edges.end()};
}

}  // namespace cld

// Reference implementations used only by the tests. They are deliberately
// naive and share no code with the library.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cld/model.hpp"

namespace oracle {

using Cycle = std::vector<int>;
using EdgeList = std::vector<std::pair<int, int>>;

// Rotate so the smallest id comes first.
inline Cycle rotate_min(Cycle c) {
  std::rotate(c.begin(), std::min_element(c.begin(), c.end()), c.end());
  return c;
}

// Every elementary cycle by exhaustive path extension from each start
// vertex, keeping only paths whose start is their minimum. Optional length
// bound (0 = none).
inline std::set<Cycle> brute_force_cycles(const std::vector<int> &nodes, const EdgeList &edges,
                                          std::size_t max_len = 0) {
  std::set<std::pair<int, int>> has(edges.begin(), edges.end());
  std::set<Cycle> out;
  std::vector<int> path;
  std::function<void()> extend = [&] {
    const int start = path.front();
    const int last = path.back();
    if (path.size() >= 2 && has.count({last, start})) out.insert(path);
    if (max_len && path.size() >= max_len) return;
    for (int n : nodes) {
      if (n <= start || std::find(path.begin(), path.end(), n) != path.end()) continue;
      if (!has.count({last, n})) continue;
      path.push_back(n);
      extend();
      path.pop_back();
    }
  };
  for (int s : nodes) {
    path = {s};
    extend();
  }
  return out;
}

// Rank over GF(2) of rows given as bit masks (xor basis keyed by top bit).
inline std::size_t gf2_rank(const std::vector<std::uint64_t> &rows) {
  std::uint64_t basis[64] = {};
  std::size_t rank = 0;
  for (auto r : rows) {
    for (int b = 63; b >= 0 && r; --b) {
      if (!((r >> b) & 1)) continue;
      if (!basis[b]) {
        basis[b] = r;
        ++rank;
        r = 0;
      } else {
        r ^= basis[b];
      }
    }
  }
  return rank;
}

// Consistency of the augmented system: bit 63 carries the right-hand side.
inline bool gf2_consistent(const std::vector<std::uint64_t> &augmented) {
  const std::uint64_t rhs = std::uint64_t{1} << 63;
  std::vector<std::uint64_t> lhs;
  for (auto r : augmented) lhs.push_back(r & ~rhs);
  return gf2_rank(lhs) == gf2_rank(augmented);
}

// Reference loop rows, as variable-id sequences.
struct TableRow {
  const char *name;
  bool balancing;
  std::vector<int> sequence;
};

inline const std::vector<TableRow> &loop_table() {
  static const std::vector<TableRow> rows = {
      {"R1", false, {1, 2, 3, 4}},
      {"R2", false, {3, 5, 6}},
      {"R3", false, {7, 8, 9, 10, 11, 12}},
      {"R4", false, {13, 14, 8, 9, 10, 11, 12}},
      {"R5", false, {2, 15, 8, 9, 10, 11, 12, 13, 18, 4, 1}},
      {"R6", false, {22, 10, 11, 12, 13}},
      {"R7", false, {22, 8, 9, 10, 11, 12, 13}},
      {"R8", false, {2, 13, 18, 4, 1}},
      {"R9", false, {23, 12, 13}},
      {"R10", false, {24, 11, 12, 13}},
      {"R11", false, {13, 25, 17, 12}},
      {"R12", false, {26, 27, 9, 10, 11, 12, 13, 18, 4, 5}},
      {"R13", false, {9, 10}},
      {"R14", false, {9, 16}},
      {"R15", false, {20, 19, 8, 9, 10, 11, 12, 13}},
      {"B1", true, {2, 19, 8, 9, 10, 11, 12, 13, 18, 4, 1}},
      {"B2", true, {19, 21, 20}},
      {"B3", true, {5, 9, 10, 11, 12, 13, 18, 4}},
  };
  return rows;
}

inline std::set<std::pair<int, int>> table_edge_union() {
  std::set<std::pair<int, int>> edges;
  for (const auto &row : loop_table())
    for (std::size_t i = 0; i < row.sequence.size(); ++i)
      edges.insert({row.sequence[i], row.sequence[(i + 1) % row.sequence.size()]});
  return edges;
}

// The five links carried as negative in the bundled model.
inline const EdgeList &reference_minus_links() {
  static const EdgeList m = {{5, 9}, {13, 23}, {19, 8}, {20, 19}, {23, 12}};
  return m;
}

// Random digraph over nodes 1..n without self-loops.
inline EdgeList random_digraph(std::mt19937 &rng, int n, double p) {
  std::bernoulli_distribution coin(p);
  EdgeList e;
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b)
      if (a != b && coin(rng)) e.push_back({a, b});
  return e;
}

inline cld::Model model_from_edges(int n, const EdgeList &edges, std::vector<cld::Polarity> signs = {}) {
  std::vector<cld::Variable> vars;
  for (int i = 1; i <= n; ++i) vars.push_back({{i}, "v" + std::to_string(i), "s", cld::VariableKind::stock});
  std::vector<cld::Link> links;
  for (std::size_t k = 0; k < edges.size(); ++k)
    links.push_back({{edges[k].first}, {edges[k].second}, signs.empty() ? cld::Polarity::plus : signs[k], std::nullopt});
  return cld::Model("g", {{"s", "S"}}, std::move(vars), std::move(links), {});
}

// Random text that exercises quoting: spaces, quotes, backslashes, '#',
// and multi-byte characters.
inline std::string random_text(std::mt19937 &rng, std::size_t min_len = 1) {
  static const std::vector<std::string> pieces = {"a", "b", "Z", "9", " ", "\"", "\\", "#", "->", "=",
                                                  "é", "λ", "漢", "&", "'", "\t", "x y"};
  std::uniform_int_distribution<std::size_t> len(min_len, 12), pick(0, pieces.size() - 1);
  std::string s;
  for (auto n = len(rng); n; --n) s += pieces[pick(rng)];
  return s;
}

inline std::string random_word(std::mt19937 &rng) {
  static const std::string chars = "abcdefghijklmnopqrstuvwxyz0123456789-_.";
  std::uniform_int_distribution<std::size_t> len(1, 8), pick(0, chars.size() - 1);
  std::uniform_int_distribution<std::size_t> first(0, 25);
  std::string s(1, chars[first(rng)]);
  for (auto n = len(rng); n; --n) s += chars[pick(rng)];
  return s;
}

// A valid model: distinct ids, declared sectors, no self-loops, loops that
// follow existing links.
inline cld::Model random_valid_model(std::mt19937 &rng) {
  std::uniform_int_distribution<int> nvar(0, 9), nsec(1, 3), kind(0, 3), pol(0, 2), coin(0, 1);
  std::vector<cld::Sector> sectors;
  std::set<std::string> sector_ids;
  for (int i = nsec(rng); i; --i) {
    auto id = random_word(rng);
    if (sector_ids.insert(id).second) sectors.push_back({id, random_text(rng, 0)});
  }
  std::set<int> ids;
  std::uniform_int_distribution<int> idd(1, 60);
  for (int i = nvar(rng); i; --i) ids.insert(idd(rng));
  std::vector<cld::Variable> vars;
  std::uniform_int_distribution<std::size_t> spick(0, sectors.size() - 1);
  for (int id : ids)
    vars.push_back({{id}, random_text(rng), sectors[spick(rng)].id,
                    kind(rng) == 0 ? cld::VariableKind::aux : cld::VariableKind::stock});
  std::vector<int> idv(ids.begin(), ids.end());
  EdgeList edges;
  std::bernoulli_distribution link_p(0.3);
  for (int a : idv)
    for (int b : idv)
      if (a != b && link_p(rng)) edges.push_back({a, b});
  std::shuffle(edges.begin(), edges.end(), rng);
  std::vector<cld::Link> links;
  for (auto [a, b] : edges) {
    const auto p = pol(rng) == 0 ? cld::Polarity::minus : pol(rng) == 1 ? cld::Polarity::unknown : cld::Polarity::plus;
    std::optional<std::string> anchor;
    if (coin(rng)) anchor = random_text(rng, 0);
    links.push_back({{a}, {b}, p, anchor});
  }
  std::vector<cld::LoopDecl> loops;
  if (!idv.empty()) {
    std::vector<int> sorted_nodes = idv;
    auto cycles = brute_force_cycles(sorted_nodes, edges, 5);
    int k = 0;
    for (const auto &c : cycles) {
      if (coin(rng)) continue;
      std::vector<cld::VariableId> seq;
      for (int v : c) seq.push_back({v});
      std::rotate(seq.begin(), seq.begin() + static_cast<long>(k % seq.size()), seq.end());
      loops.push_back({"L" + std::to_string(k++), coin(rng) ? cld::LoopClass::reinforcing : cld::LoopClass::balancing,
                       std::move(seq)});
      if (k >= 6) break;
    }
  }
  return cld::Model(random_text(rng, 0), std::move(sectors), std::move(vars), std::move(links), std::move(loops));
}

}  // namespace oracle

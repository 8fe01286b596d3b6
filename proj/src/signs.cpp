#include "cld/signs.hpp"

#include <algorithm>
#include <boost/dynamic_bitset.hpp>

#include "cld/error.hpp"
#include "cld/loops.hpp"

namespace cld {

SignSystem build_system(const Model &model) {
  SignSystem sys;
  std::map<EdgeKey, std::size_t> index;
  for (const auto &l : model.links())
    if (l.polarity == Polarity::unknown) {
      index[l.key()] = sys.unknowns.size();
      sys.unknowns.push_back(l.key());
    }

  for (const auto &v : verify_declared(model)) {
    if (v.found) continue;
    std::string what = "loop " + v.loop_name + " is not an elementary cycle of the model";
    if (!v.missing_edges.empty()) what += " (missing " + to_string(v.missing_edges.front()) + ")";
    throw Error(ErrorCode::unverified_loop, what);
  }

  for (const auto &d : model.declared_loops()) {
    SignConstraint c;
    c.loop_name = d.name;
    unsigned fixed_minus = 0;
    for (const auto &e : cycle_edges(d.sequence)) {
      const auto *link = model.find_link(e);
      if (link->polarity == Polarity::unknown) c.unknowns.push_back(index.at(e));
      else if (link->polarity == Polarity::minus) ++fixed_minus;
    }
    std::sort(c.unknowns.begin(), c.unknowns.end());
    const unsigned required = d.cls == LoopClass::balancing ? 1 : 0;
    c.parity = static_cast<std::uint8_t>((required + fixed_minus) % 2);
    sys.constraints.push_back(std::move(c));
  }
  return sys;
}

namespace {

using Row = boost::dynamic_bitset<>;

// Augmented row: bits [0, n) are coefficients, bit n is the parity.
Row make_row(const SignConstraint &c, std::size_t n) {
  Row r(n + 1);
  for (auto i : c.unknowns) r.flip(i);
  if (c.parity) r.set(n);
  return r;
}

struct Reduced {
  std::vector<Row> rows;                 // fully reduced pivot rows
  std::vector<std::size_t> pivot_cols;   // pivot column of each row
  bool consistent = true;
};

// Reduced row echelon form. When `reverse` the pivot of each row is its
// highest-index unknown, so the free unknowns are as early as possible.
Reduced reduce(const SignSystem &sys, const std::vector<std::size_t> &which, bool reverse) {
  const auto n = sys.unknowns.size();
  std::vector<Row> rows;
  for (auto i : which) rows.push_back(make_row(sys.constraints[i], n));

  Reduced out;
  std::size_t next = 0;
  for (std::size_t k = 0; k < n && next < rows.size(); ++k) {
    const auto col = reverse ? n - 1 - k : k;
    auto it = std::find_if(rows.begin() + next, rows.end(), [&](const Row &r) { return r.test(col); });
    if (it == rows.end()) continue;
    std::iter_swap(rows.begin() + next, it);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != next && rows[r].test(col)) rows[r] ^= rows[next];
    out.pivot_cols.push_back(col);
    ++next;
  }
  for (std::size_t r = next; r < rows.size(); ++r)
    if (rows[r].test(n)) out.consistent = false;
  rows.resize(next);
  out.rows = std::move(rows);
  return out;
}

bool consistent_subset(const SignSystem &sys, const std::vector<std::size_t> &which) {
  return reduce(sys, which, false).consistent;
}

}  // namespace

bool satisfies(const SignSystem &system, const std::vector<bool> &minus_set) {
  for (const auto &c : system.constraints) {
    unsigned parity = 0;
    for (auto i : c.unknowns) parity ^= minus_set.at(i) ? 1u : 0u;
    if (parity != c.parity) return false;
  }
  return true;
}

SignSolution solve(const SignSystem &system, bool prefer_plus) {
  const auto n = system.unknowns.size();
  std::vector<std::size_t> all(system.constraints.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

  const auto red = reduce(system, all, prefer_plus);
  SignSolution sol;
  sol.rank = red.rows.size();
  sol.nullspace_dim = n - sol.rank;
  sol.consistent = red.consistent;

  if (!sol.consistent) {
    // Greedy deletion: drop each constraint whose removal keeps the subset
    // inconsistent. The survivor set is irreducible.
    auto kept = all;
    for (auto i : all) {
      std::vector<std::size_t> trial;
      for (auto k : kept)
        if (k != i) trial.push_back(k);
      if (!consistent_subset(system, trial)) kept = std::move(trial);
    }
    for (auto k : kept) sol.conflict_witness.push_back(system.constraints[k].loop_name);
    return sol;
  }

  std::vector<bool> is_pivot(n, false);
  for (auto c : red.pivot_cols) is_pivot[c] = true;

  std::vector<bool> minus(n, false);
  for (std::size_t r = 0; r < red.rows.size(); ++r) minus[red.pivot_cols[r]] = red.rows[r].test(n);
  for (std::size_t i = 0; i < n; ++i)
    sol.assignment[system.unknowns[i]] = minus[i] ? Polarity::minus : Polarity::plus;

  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    std::vector<EdgeKey> flips{system.unknowns[f]};
    for (std::size_t r = 0; r < red.rows.size(); ++r)
      if (red.rows[r].test(f)) flips.push_back(system.unknowns[red.pivot_cols[r]]);
    std::sort(flips.begin(), flips.end());
    sol.nullspace_basis.push_back(std::move(flips));
  }
  return sol;
}

Model apply(const Model &model, const SignSolution &solution) {
  if (!solution.consistent)
    throw Error(ErrorCode::inconsistent_solution, "cannot apply an inconsistent sign solution");
  auto links = model.links();
  for (auto &l : links) {
    if (l.polarity != Polarity::unknown) continue;
    auto it = solution.assignment.find(l.key());
    if (it == solution.assignment.end())
      throw Error(ErrorCode::inconsistent_solution, "solution has no polarity for link " + to_string(l.key()));
    l.polarity = it->second;
  }
  return model.with_links(std::move(links));
}

}  // namespace cld

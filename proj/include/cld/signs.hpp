#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cld/model.hpp"

namespace cld {

// One parity equation: the number of minus links among `unknowns` must have
// parity `parity` (0 even, 1 odd). Fixed minus links are already folded in.
struct SignConstraint {
  std::string loop_name;
  std::vector<std::size_t> unknowns;
  std::uint8_t parity = 0;
};

// Linear system over GF(2): minus = 1, plus = 0.
struct SignSystem {
  std::vector<EdgeKey> unknowns;  // unknown-polarity links in link order
  std::vector<SignConstraint> constraints;
};

struct SignSolution {
  bool consistent = false;
  std::map<EdgeKey, Polarity> assignment;  // particular solution, iff consistent
  std::size_t rank = 0;
  std::size_t nullspace_dim = 0;
  // Each basis vector is a set of links whose joint flip preserves every
  // constraint.
  std::vector<std::vector<EdgeKey>> nullspace_basis;
  // Irreducible inconsistent subset of constraint loop names, iff !consistent.
  std::vector<std::string> conflict_witness;
};

// One constraint per declared loop. Throws unverified_loop if a declared
// loop is not an elementary cycle of the model.
SignSystem build_system(const Model &model);

// Gaussian elimination over GF(2). With prefer_plus the particular solution
// is the lexicographically smallest minus set in link order, which is the
// all-plus assignment whenever that is feasible. Without it, free unknowns
// are the trailing ones and are set plus.
SignSolution solve(const SignSystem &system, bool prefer_plus = true);

// True iff `minus_set` (indices into system.unknowns set to minus) satisfies
// every constraint.
bool satisfies(const SignSystem &system, const std::vector<bool> &minus_set);

// Model with every unknown polarity replaced from the solution. Throws
// inconsistent_solution when solution.consistent is false.
Model apply(const Model &model, const SignSolution &solution);

}  // namespace cld

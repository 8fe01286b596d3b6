#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cld/model.hpp"

namespace cld {

struct LoopClassification {
  std::size_t minus_count = 0;
  LoopClass cls = LoopClass::reinforcing;

  friend bool operator==(const LoopClassification &, const LoopClassification &) = default;
};

// An enumerated elementary cycle in canonical rotation (smallest id first).
struct FoundLoop {
  std::vector<VariableId> sequence;
  std::size_t minus_count = 0;
  LoopClass cls = LoopClass::reinforcing;

  friend bool operator==(const FoundLoop &, const FoundLoop &) = default;
};

struct LoopVerdict {
  std::string loop_name;
  bool found = false;
  bool class_matches = false;
  LoopClass declared_class = LoopClass::reinforcing;
  LoopClass computed_class = LoopClass::indeterminate;
  std::size_t minus_count = 0;
  std::vector<EdgeKey> missing_edges;
};

inline constexpr std::size_t kDefaultCycleCap = 1'000'000;

struct EnumerateOptions {
  std::optional<std::size_t> max_len;
  std::size_t cycle_cap = kDefaultCycleCap;
};

// Every elementary cycle of the link graph, each once, sorted
// lexicographically. Throws cycle_limit when more than cycle_cap cycles exist.
std::vector<FoundLoop> enumerate_cycles(const Model &model, const EnumerateOptions &options = {});

// Parity classification of a cycle. Throws duplicate_in_sequence or
// edge_missing when the sequence is not an elementary cycle of the model.
LoopClassification classify(const Model &model, const std::vector<VariableId> &sequence);

// Rotation of a cycle that starts at its smallest id.
std::vector<VariableId> canonical_rotation(std::vector<VariableId> sequence);

// One verdict per declared loop, in declaration order.
std::vector<LoopVerdict> verify_declared(const Model &model);

enum class LoopSet { declared, enumerated };

// Number of loops through each variable / link. Every variable (link) of the
// model is present, with 0 when it lies on no loop.
std::map<VariableId, std::size_t> loop_participation(const Model &model, LoopSet over);
std::map<EdgeKey, std::size_t> link_participation(const Model &model, LoopSet over);

}  // namespace cld

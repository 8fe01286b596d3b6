#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cld {

struct VariableId {
  int value = 0;

  friend auto operator<=>(const VariableId &, const VariableId &) = default;
};

enum class Polarity { plus, minus, unknown };
enum class VariableKind { stock, aux };

// Declared loops are reinforcing or balancing; computed classes may also be
// indeterminate when an unknown-polarity link lies on the cycle.
enum class LoopClass { reinforcing, balancing, indeterminate };

std::string_view to_string(Polarity p);
std::string_view to_string(VariableKind k);
std::string_view to_string(LoopClass c);
std::optional<LoopClass> parse_loop_class(std::string_view word);

// Directed (from, to) pair identifying a link.
struct EdgeKey {
  VariableId from;
  VariableId to;

  friend auto operator<=>(const EdgeKey &, const EdgeKey &) = default;
};

std::string to_string(EdgeKey e);

struct Sector {
  std::string id;
  std::string name;

  friend bool operator==(const Sector &, const Sector &) = default;
};

struct Variable {
  VariableId id;
  std::string name;
  std::string sector;
  VariableKind kind = VariableKind::stock;

  friend bool operator==(const Variable &, const Variable &) = default;
};

struct Link {
  VariableId from;
  VariableId to;
  Polarity polarity = Polarity::unknown;
  std::optional<std::string> anchor;

  EdgeKey key() const { return {from, to}; }
  friend bool operator==(const Link &, const Link &) = default;
};

struct LoopDecl {
  std::string name;
  LoopClass cls = LoopClass::reinforcing;
  std::vector<VariableId> sequence;

  friend bool operator==(const LoopDecl &, const LoopDecl &) = default;
};

// Edges implied by a cycle sequence: s[i] -> s[i+1] plus the closing edge.
std::vector<EdgeKey> cycle_edges(const std::vector<VariableId> &sequence);

// Immutable signed digraph with sectors and declared loops. Variables and
// links are kept sorted by id / (from, to); sectors and loops keep their
// declaration order.
class Model {
 public:
  Model() = default;
  Model(std::string name, std::vector<Sector> sectors, std::vector<Variable> variables,
        std::vector<Link> links, std::vector<LoopDecl> loops);

  const std::string &name() const { return name_; }
  const std::vector<Sector> &sectors() const { return sectors_; }
  const std::vector<Variable> &variables() const { return variables_; }
  const std::vector<Link> &links() const { return links_; }
  const std::vector<LoopDecl> &declared_loops() const { return loops_; }

  const Variable *find_variable(VariableId id) const;
  const Link *find_link(EdgeKey key) const;
  bool has_link(EdgeKey key) const { return find_link(key) != nullptr; }

  // Copy with one link's polarity replaced. Throws unknown_reference if the
  // link does not exist.
  Model with_polarity(EdgeKey key, Polarity p) const;
  Model with_links(std::vector<Link> links) const;
  Model with_loops(std::vector<LoopDecl> loops) const;

  friend bool operator==(const Model &, const Model &) = default;

 private:
  std::string name_;
  std::vector<Sector> sectors_;
  std::vector<Variable> variables_;
  std::vector<Link> links_;
  std::vector<LoopDecl> loops_;
};

struct Violation {
  std::string code;
  std::string location;
  std::string message;

  friend bool operator==(const Violation &, const Violation &) = default;
};

using ValidationReport = std::vector<Violation>;

// Checks every structural invariant. The report is ordered by variable id,
// then link pair, then loop name; an empty report means the model is valid.
ValidationReport validate(const Model &model);

// Union of all edges implied by the declared sequences, sorted by (from, to).
// Throws duplicate_in_sequence when a sequence repeats an id.
std::vector<EdgeKey> edges_from_loops(const std::vector<LoopDecl> &decls);

// The bundled higher-education AI-transformation model (27 variables,
// 45 links, 18 declared loops), parsed from the embedded corpus file.
const Model &canonical_hei_model();
std::string_view canonical_hei_source();

}  // namespace cld

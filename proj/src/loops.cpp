#include "cld/loops.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "cld/error.hpp"

namespace cld {

namespace {

// Dense index over the model's variables (sorted by id) with adjacency lists.
struct IndexedGraph {
  std::vector<VariableId> ids;
  std::vector<std::vector<int>> adj;

  explicit IndexedGraph(const Model &model) {
    for (const auto &v : model.variables()) ids.push_back(v.id);
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    adj.resize(ids.size());
    for (const auto &l : model.links()) {
      auto f = index_of(l.from), t = index_of(l.to);
      if (f >= 0 && t >= 0 && f != t) adj[f].push_back(t);
    }
    for (auto &a : adj) {
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
    }
  }

  int index_of(VariableId id) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    return it != ids.end() && *it == id ? static_cast<int>(it - ids.begin()) : -1;
  }

  int size() const { return static_cast<int>(ids.size()); }
};

// Tarjan SCC over the subgraph induced by vertices >= lo; returns the
// component label for each vertex (-1 below lo).
std::vector<int> components_from(const IndexedGraph &g, int lo) {
  const int n = g.size();
  std::vector<int> number(n, -1), low(n, 0), comp(n, -1), stack;
  std::vector<bool> on_stack(n, false);
  int counter = 0, labels = 0;

  std::function<void(int)> visit = [&](int v) {
    number[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (int w : g.adj[v]) {
      if (w < lo) continue;
      if (number[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], number[w]);
      }
    }
    if (low[v] == number[v]) {
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = labels;
      } while (w != v);
      ++labels;
    }
  };
  for (int v = lo; v < n; ++v)
    if (number[v] < 0) visit(v);
  return comp;
}

// Johnson-style circuit search rooted at the least vertex of one component.
class CircuitSearch {
 public:
  CircuitSearch(const IndexedGraph &g, const EnumerateOptions &opts, std::vector<std::vector<int>> &out)
      : g_(g), opts_(opts), out_(out), blocked_(g.size()), blocked_by_(g.size()), in_comp_(g.size()) {}

  void run(int start, const std::vector<int> &comp) {
    start_ = start;
    for (int v = 0; v < g_.size(); ++v) {
      in_comp_[v] = comp[v] >= 0 && comp[v] == comp[start];
      blocked_[v] = false;
      blocked_by_[v].clear();
    }
    path_.clear();
    if (opts_.max_len) bounded(start);
    else circuit(start);
  }

 private:
  void emit() {
    if (out_.size() >= opts_.cycle_cap)
      throw Error(ErrorCode::cycle_limit,
                  "more than " + std::to_string(opts_.cycle_cap) + " elementary cycles");
    out_.push_back(path_);
  }

  void unblock(int u) {
    blocked_[u] = false;
    auto pending = std::move(blocked_by_[u]);
    blocked_by_[u].clear();
    for (int w : pending)
      if (blocked_[w]) unblock(w);
  }

  bool circuit(int v) {
    bool closed = false;
    path_.push_back(v);
    blocked_[v] = true;
    for (int w : g_.adj[v]) {
      if (!in_comp_[w]) continue;
      if (w == start_) {
        emit();
        closed = true;
      } else if (!blocked_[w] && circuit(w)) {
        closed = true;
      }
    }
    if (closed) {
      unblock(v);
    } else {
      for (int w : g_.adj[v]) {
        if (!in_comp_[w]) continue;
        auto &b = blocked_by_[w];
        if (std::find(b.begin(), b.end(), v) == b.end()) b.push_back(v);
      }
    }
    path_.pop_back();
    return closed;
  }

  // Length-bounded search. Blocking is unsound under a length cap, so this
  // is a plain simple-path DFS.
  void bounded(int v) {
    path_.push_back(v);
    blocked_[v] = true;
    for (int w : g_.adj[v]) {
      if (!in_comp_[w]) continue;
      if (w == start_) emit();
      else if (!blocked_[w] && path_.size() < *opts_.max_len) bounded(w);
    }
    blocked_[v] = false;
    path_.pop_back();
  }

  const IndexedGraph &g_;
  const EnumerateOptions &opts_;
  std::vector<std::vector<int>> &out_;
  std::vector<bool> blocked_;
  std::vector<std::vector<int>> blocked_by_;
  std::vector<bool> in_comp_;
  std::vector<int> path_;
  int start_ = 0;
};

}  // namespace

std::vector<VariableId> canonical_rotation(std::vector<VariableId> sequence) {
  if (sequence.empty()) return sequence;
  std::rotate(sequence.begin(), std::min_element(sequence.begin(), sequence.end()), sequence.end());
  return sequence;
}

std::vector<FoundLoop> enumerate_cycles(const Model &model, const EnumerateOptions &options) {
  if (options.max_len && *options.max_len < 2) return {};
  const IndexedGraph g(model);
  std::vector<std::vector<int>> raw;
  CircuitSearch search(g, options, raw);
  for (int s = 0; s < g.size(); ++s) {
    const auto comp = components_from(g, s);
    bool nontrivial = false;
    for (int v = s + 1; v < g.size() && !nontrivial; ++v) nontrivial = comp[v] == comp[s];
    if (nontrivial) search.run(s, comp);
  }

  std::vector<FoundLoop> loops;
  loops.reserve(raw.size());
  for (const auto &cycle : raw) {
    FoundLoop f;
    for (int v : cycle) f.sequence.push_back(g.ids[v]);
    const auto c = classify(model, f.sequence);
    f.minus_count = c.minus_count;
    f.cls = c.cls;
    loops.push_back(std::move(f));
  }
  std::sort(loops.begin(), loops.end(),
            [](const FoundLoop &a, const FoundLoop &b) { return a.sequence < b.sequence; });
  return loops;
}

LoopClassification classify(const Model &model, const std::vector<VariableId> &sequence) {
  if (sequence.size() < 2) throw Error(ErrorCode::edge_missing, "a cycle needs at least two variables");
  std::set<VariableId> seen;
  for (auto id : sequence)
    if (!seen.insert(id).second)
      throw Error(ErrorCode::duplicate_in_sequence, "variable " + std::to_string(id.value) + " repeats");
  LoopClassification out;
  bool unknown = false;
  for (const auto &e : cycle_edges(sequence)) {
    const auto *link = model.find_link(e);
    if (!link) throw Error(ErrorCode::edge_missing, "no link " + to_string(e));
    if (link->polarity == Polarity::minus) ++out.minus_count;
    if (link->polarity == Polarity::unknown) unknown = true;
  }
  out.cls = unknown ? LoopClass::indeterminate
                    : (out.minus_count % 2 == 0 ? LoopClass::reinforcing : LoopClass::balancing);
  return out;
}

std::vector<LoopVerdict> verify_declared(const Model &model) {
  std::vector<LoopVerdict> verdicts;
  for (const auto &d : model.declared_loops()) {
    LoopVerdict v;
    v.loop_name = d.name;
    v.declared_class = d.cls;
    std::set<VariableId> seen;
    bool elementary = d.sequence.size() >= 2;
    for (auto id : d.sequence) elementary = seen.insert(id).second && elementary;
    for (const auto &e : cycle_edges(d.sequence))
      if (!model.has_link(e)) v.missing_edges.push_back(e);
    v.found = elementary && v.missing_edges.empty();
    if (v.found) {
      const auto c = classify(model, d.sequence);
      v.computed_class = c.cls;
      v.minus_count = c.minus_count;
      v.class_matches = c.cls == d.cls;
    }
    verdicts.push_back(std::move(v));
  }
  return verdicts;
}

namespace {

std::vector<std::vector<VariableId>> loop_sequences(const Model &model, LoopSet over) {
  std::vector<std::vector<VariableId>> out;
  if (over == LoopSet::declared) {
    for (const auto &d : model.declared_loops()) out.push_back(d.sequence);
  } else {
    for (auto &f : enumerate_cycles(model)) out.push_back(std::move(f.sequence));
  }
  return out;
}

}  // namespace

std::map<VariableId, std::size_t> loop_participation(const Model &model, LoopSet over) {
  std::map<VariableId, std::size_t> counts;
  for (const auto &v : model.variables()) counts[v.id] = 0;
  for (const auto &seq : loop_sequences(model, over)) {
    std::set<VariableId> members(seq.begin(), seq.end());
    for (auto id : members)
      if (auto it = counts.find(id); it != counts.end()) ++it->second;
  }
  return counts;
}

std::map<EdgeKey, std::size_t> link_participation(const Model &model, LoopSet over) {
  std::map<EdgeKey, std::size_t> counts;
  for (const auto &l : model.links()) counts[l.key()] = 0;
  for (const auto &seq : loop_sequences(model, over)) {
    std::set<EdgeKey> members;
    for (const auto &e : cycle_edges(seq)) members.insert(e);
    for (const auto &e : members)
      if (auto it = counts.find(e); it != counts.end()) ++it->second;
  }
  return counts;
}

}  // namespace cld

#include "cld/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace cld {

namespace {

using json = nlohmann::ordered_json;

// Left-aligned text table; the last column is not padded.
class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string str() const {
    std::vector<std::size_t> width;
    for (const auto &r : rows_)
      for (std::size_t c = 0; c < r.size(); ++c) {
        if (width.size() <= c) width.push_back(0);
        width[c] = std::max(width[c], visible(r[c]));
      }
    std::string out;
    for (const auto &r : rows_) {
      std::string line;
      for (std::size_t c = 0; c < r.size(); ++c) {
        line += r[c];
        if (c + 1 < r.size()) line += std::string(width[c] - visible(r[c]) + 2, ' ');
      }
      out += line + "\n";
    }
    return out;
  }

 private:
  // Display width: UTF-8 code points outside ANSI escape sequences.
  static std::size_t visible(const std::string &s) {
    std::size_t n = 0;
    bool escape = false;
    for (char ch : s) {
      if (escape) {
        escape = ch != 'm';
        continue;
      }
      if (ch == '\x1b') {
        escape = true;
        continue;
      }
      if ((static_cast<unsigned char>(ch) & 0xC0) != 0x80) ++n;
    }
    return n;
  }

  std::vector<std::vector<std::string>> rows_;
};

std::string join_ids(const std::vector<VariableId> &seq) {
  std::string out;
  for (auto id : seq) out += (out.empty() ? "" : " ") + std::to_string(id.value);
  return out;
}

json ids_json(const std::vector<VariableId> &seq) {
  json a = json::array();
  for (auto id : seq) a.push_back(id.value);
  return a;
}

std::string paint(std::string text, LoopClass cls, bool color) {
  if (!color) return text;
  const char *code = cls == LoopClass::reinforcing ? "\x1b[32m" : cls == LoopClass::balancing ? "\x1b[34m" : "\x1b[33m";
  return code + text + "\x1b[0m";
}

std::string class_summary(std::size_t total, std::size_t r, std::size_t b, std::size_t i) {
  std::ostringstream os;
  os << total << " loops: " << r << " reinforcing, " << b << " balancing, " << i << " indeterminate\n";
  return os.str();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string report_declared_loops(const Model &model, const ReportStyle &style) {
  std::size_t r = 0, b = 0, ind = 0;
  json arr = json::array();
  Table table({"name", "sequence", "minus", "class"});
  for (const auto &v : verify_declared(model)) {
    const auto &decl = *std::find_if(model.declared_loops().begin(), model.declared_loops().end(),
                                     [&](const LoopDecl &d) { return d.name == v.loop_name; });
    const auto cls = v.found ? v.computed_class : LoopClass::indeterminate;
    (cls == LoopClass::reinforcing ? r : cls == LoopClass::balancing ? b : ind)++;
    if (style.json) {
      arr.push_back({{"name", v.loop_name},
                     {"sequence", ids_json(decl.sequence)},
                     {"minus_count", v.minus_count},
                     {"class", std::string(to_string(cls))},
                     {"declared_class", std::string(to_string(decl.cls))}});
    } else {
      table.add({v.loop_name, join_ids(decl.sequence), v.found ? std::to_string(v.minus_count) : "-",
                 paint(std::string(to_string(cls)), cls, style.color)});
    }
  }
  if (style.json) return arr.dump(2) + "\n";
  return table.str() + class_summary(model.declared_loops().size(), r, b, ind);
}

std::string report_enumerated_loops(const Model &model, const std::vector<FoundLoop> &loops, const ReportStyle &style) {
  std::map<std::vector<VariableId>, std::string> declared;
  for (const auto &d : model.declared_loops()) declared[canonical_rotation(d.sequence)] = d.name;

  std::size_t r = 0, b = 0, ind = 0;
  json arr = json::array();
  Table table({"name", "sequence", "minus", "class"});
  for (const auto &f : loops) {
    (f.cls == LoopClass::reinforcing ? r : f.cls == LoopClass::balancing ? b : ind)++;
    auto it = declared.find(f.sequence);
    if (style.json) {
      arr.push_back({{"name", it == declared.end() ? json(nullptr) : json(it->second)},
                     {"sequence", ids_json(f.sequence)},
                     {"minus_count", f.minus_count},
                     {"class", std::string(to_string(f.cls))}});
    } else {
      table.add({it == declared.end() ? "-" : it->second, join_ids(f.sequence), std::to_string(f.minus_count),
                 paint(std::string(to_string(f.cls)), f.cls, style.color)});
    }
  }
  if (style.json) return arr.dump(2) + "\n";
  return table.str() + class_summary(loops.size(), r, b, ind);
}

bool all_verified(const std::vector<LoopVerdict> &verdicts) {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const LoopVerdict &v) { return v.found && v.class_matches; });
}

std::string report_verdicts(const std::vector<LoopVerdict> &verdicts, const ReportStyle &style) {
  std::size_t found = 0, matches = 0, r = 0, b = 0;
  for (const auto &v : verdicts) {
    found += v.found;
    matches += v.class_matches;
    r += v.found && v.computed_class == LoopClass::reinforcing;
    b += v.found && v.computed_class == LoopClass::balancing;
  }
  if (style.json) {
    json doc;
    doc["total"] = verdicts.size();
    doc["found"] = found;
    doc["class_matches"] = matches;
    doc["reinforcing"] = r;
    doc["balancing"] = b;
    doc["verdicts"] = json::array();
    for (const auto &v : verdicts) {
      json missing = json::array();
      for (const auto &e : v.missing_edges) missing.push_back({e.from.value, e.to.value});
      doc["verdicts"].push_back({{"name", v.loop_name},
                                 {"found", v.found},
                                 {"class_matches", v.class_matches},
                                 {"declared_class", std::string(to_string(v.declared_class))},
                                 {"computed_class", std::string(to_string(v.computed_class))},
                                 {"minus_count", v.minus_count},
                                 {"missing_edges", missing}});
    }
    return doc.dump(2) + "\n";
  }
  Table table({"loop", "found", "declared", "computed", "minus", "status"});
  for (const auto &v : verdicts) {
    std::string status = "ok";
    if (!v.found) {
      status = "not found";
      for (const auto &e : v.missing_edges) status += ", missing " + to_string(e);
    } else if (!v.class_matches) {
      status = "CLASS MISMATCH";
    }
    table.add({v.loop_name, v.found ? "yes" : "no", std::string(to_string(v.declared_class)),
               v.found ? paint(std::string(to_string(v.computed_class)), v.computed_class, style.color) : "-",
               v.found ? std::to_string(v.minus_count) : "-", status});
  }
  std::ostringstream os;
  os << table.str() << found << '/' << verdicts.size() << " found, " << matches << '/' << verdicts.size()
     << " class matches; computed " << r << " reinforcing, " << b << " balancing\n";
  return os.str();
}

std::string report_participation(const Model &model, LoopSet over, const ReportStyle &style) {
  const auto vars = loop_participation(model, over);
  const auto links = link_participation(model, over);
  const char *mode = over == LoopSet::declared ? "declared" : "enumerated";
  if (style.json) {
    json doc;
    doc["over"] = mode;
    doc["variables"] = json::array();
    for (const auto &[id, n] : vars) {
      const auto *v = model.find_variable(id);
      doc["variables"].push_back({{"id", id.value}, {"name", v ? v->name : ""}, {"loops", n}});
    }
    doc["links"] = json::array();
    for (const auto &[e, n] : links) doc["links"].push_back({{"from", e.from.value}, {"to", e.to.value}, {"loops", n}});
    return doc.dump(2) + "\n";
  }
  Table vt({"id", "variable", "loops"});
  for (const auto &[id, n] : vars) {
    const auto *v = model.find_variable(id);
    vt.add({std::to_string(id.value), v ? v->name : "", std::to_string(n)});
  }
  Table lt({"link", "polarity", "loops"});
  for (const auto &[e, n] : links) lt.add({to_string(e), std::string(to_string(model.find_link(e)->polarity)), std::to_string(n)});
  return std::string("variable participation (") + mode + " loops)\n" + vt.str() + "\nlink participation (" + mode +
         " loops)\n" + lt.str();
}

std::string report_signs(const Model &model, const SignSystem &system, const SignSolution &solution, bool emit,
                         const ReportStyle &style) {
  if (style.json) {
    json doc;
    doc["consistent"] = solution.consistent;
    doc["unknowns"] = system.unknowns.size();
    doc["constraints"] = system.constraints.size();
    doc["rank"] = solution.rank;
    doc["nullspace_dim"] = solution.nullspace_dim;
    doc["assignment"] = json::array();
    for (const auto &[e, p] : solution.assignment)
      doc["assignment"].push_back({{"from", e.from.value}, {"to", e.to.value}, {"polarity", std::string(to_string(p))}});
    doc["conflict_witness"] = solution.conflict_witness;
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "consistent: " << (solution.consistent ? "yes" : "no") << '\n'
     << "unknowns: " << system.unknowns.size() << '\n'
     << "constraints: " << system.constraints.size() << '\n'
     << "rank: " << solution.rank << '\n'
     << "nullspace_dim: " << solution.nullspace_dim << '\n';
  if (!solution.consistent) {
    os << "conflict:";
    for (const auto &name : solution.conflict_witness) os << ' ' << name;
    os << '\n';
    return os.str();
  }
  std::size_t minus = 0;
  for (const auto &[e, p] : solution.assignment) minus += p == Polarity::minus;
  os << "assignment: " << solution.assignment.size() - minus << " plus, " << minus << " minus\n";
  for (const auto &[e, p] : solution.assignment) {
    if (emit) {
      os << "link " << e.from.value << " -> " << e.to.value << ' ' << to_string(p);
      if (const auto *l = model.find_link(e); l && l->anchor) os << ' ' << quote(*l->anchor);
      os << '\n';
    } else {
      os << "  " << to_string(e) << ' ' << to_string(p) << '\n';
    }
  }
  return os.str();
}

std::string report_trajectory_summary(const Trajectory &trajectory) {
  Table table({"variable", "initial", "final", "min", "max"});
  for (auto id : trajectory.outputs) {
    const auto &s = trajectory.series.at(id);
    if (s.empty()) continue;
    const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    table.add({std::to_string(id.value) + ":" + trajectory.names.at(id), fmt(s.front()), fmt(s.back()), fmt(*lo), fmt(*hi)});
  }
  return table.str();
}

std::string report_sign_mismatches(const std::vector<SignMismatch> &mismatches) {
  if (mismatches.empty()) return "jacobian signs: all links agree\n";
  std::ostringstream os;
  os << "jacobian signs: " << mismatches.size() << " mismatch(es)\n";
  for (const auto &m : mismatches)
    os << "  " << to_string(m.link) << " expected " << to_string(m.expected) << " estimate " << fmt(m.estimate) << '\n';
  return os.str();
}

}  // namespace cld

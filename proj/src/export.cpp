#include <sstream>

#include "cld/dsl.hpp"
#include "cld/error.hpp"
#include "json.hpp"

namespace cld {

std::string export_dot(const Model &model) {
  std::ostringstream os;
  os << "digraph " << quote(model.name()) << " {\n";
  os << "  rankdir=LR;\n";
  os << "  node [shape=box, style=rounded];\n";
  for (const auto &s : model.sectors()) {
    bool any = false;
    for (const auto &v : model.variables()) any = any || v.sector == s.id;
    if (!any) continue;
    os << "  subgraph " << quote("cluster_" + s.id) << " {\n";
    os << "    label=" << quote(s.name) << ";\n";
    for (const auto &v : model.variables())
      if (v.sector == s.id)
        os << "    v" << v.id.value << " [label=" << quote(std::to_string(v.id.value) + ": " + v.name) << "];\n";
    os << "  }\n";
  }
  for (const auto &l : model.links()) {
    os << "  v" << l.from.value << " -> v" << l.to.value;
    switch (l.polarity) {
      case Polarity::plus: os << " [label=\"+\"];\n"; break;
      case Polarity::minus: os << " [style=dashed, label=\"−\"];\n"; break;
      case Polarity::unknown: os << " [style=dotted, label=\"?\"];\n"; break;
    }
  }
  os << "}\n";
  return os.str();
}

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void schema_error(const std::string &what) { throw Error(ErrorCode::parse, "json: " + what); }

Polarity polarity_from(const std::string &s) {
  if (s == "+") return Polarity::plus;
  if (s == "-") return Polarity::minus;
  if (s == "?") return Polarity::unknown;
  schema_error("bad polarity '" + s + "'");
}

}  // namespace

std::string export_json(const Model &model) {
  json doc;
  doc["format"] = 1;
  doc["name"] = model.name();
  doc["sectors"] = json::array();
  for (const auto &s : model.sectors()) doc["sectors"].push_back({{"id", s.id}, {"name", s.name}});
  doc["variables"] = json::array();
  for (const auto &v : model.variables())
    doc["variables"].push_back(
        {{"id", v.id.value}, {"name", v.name}, {"sector", v.sector}, {"kind", std::string(to_string(v.kind))}});
  doc["links"] = json::array();
  for (const auto &l : model.links()) {
    json rec = {{"from", l.from.value}, {"to", l.to.value}, {"polarity", std::string(to_string(l.polarity))}};
    if (l.anchor) rec["anchor"] = *l.anchor;
    doc["links"].push_back(std::move(rec));
  }
  doc["loops"] = json::array();
  for (const auto &d : model.declared_loops()) {
    json seq = json::array();
    for (auto id : d.sequence) seq.push_back(id.value);
    doc["loops"].push_back({{"name", d.name}, {"class", std::string(to_string(d.cls))}, {"sequence", seq}});
  }
  return doc.dump(2) + "\n";
}

Model import_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error &e) {
    schema_error(e.what());
  }
  try {
    if (!doc.is_object()) schema_error("top level must be an object");
    if (doc.value("format", 0) != 1) schema_error("unsupported format version");
    std::vector<Sector> sectors;
    for (const auto &s : doc.at("sectors")) sectors.push_back({s.at("id").get<std::string>(), s.at("name").get<std::string>()});
    std::vector<Variable> vars;
    for (const auto &v : doc.at("variables")) {
      const auto kind = v.value("kind", std::string("stock"));
      if (kind != "stock" && kind != "aux") schema_error("bad kind '" + kind + "'");
      vars.push_back({VariableId{v.at("id").get<int>()}, v.at("name").get<std::string>(),
                      v.at("sector").get<std::string>(), kind == "aux" ? VariableKind::aux : VariableKind::stock});
    }
    std::vector<Link> links;
    for (const auto &l : doc.at("links")) {
      std::optional<std::string> anchor;
      if (l.contains("anchor")) anchor = l.at("anchor").get<std::string>();
      links.push_back({VariableId{l.at("from").get<int>()}, VariableId{l.at("to").get<int>()},
                       polarity_from(l.at("polarity").get<std::string>()), anchor});
    }
    std::vector<LoopDecl> loops;
    for (const auto &d : doc.at("loops")) {
      auto cls = parse_loop_class(d.at("class").get<std::string>());
      if (!cls) schema_error("bad loop class");
      std::vector<VariableId> seq;
      for (const auto &id : d.at("sequence")) seq.push_back(VariableId{id.get<int>()});
      loops.push_back({d.at("name").get<std::string>(), *cls, std::move(seq)});
    }
    return Model(doc.at("name").get<std::string>(), std::move(sectors), std::move(vars), std::move(links),
                 std::move(loops));
  } catch (const json::exception &e) {
    schema_error(e.what());
  }
}

}  // namespace cld

#include "mrg/graph.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>

#include "mrg/utf8.hpp"

namespace mrg {

const char* framework_name(Framework f) {
  switch (f) {
    case Framework::dm: return "dm";
    case Framework::psd: return "psd";
    case Framework::eds: return "eds";
    case Framework::ucca: return "ucca";
    case Framework::amr: return "amr";
  }
  return "?";
}

std::optional<Framework> framework_from_name(std::string_view name) {
  if (name == "dm") return Framework::dm;
  if (name == "psd") return Framework::psd;
  if (name == "eds") return Framework::eds;
  if (name == "ucca") return Framework::ucca;
  if (name == "amr") return Framework::amr;
  return std::nullopt;
}

int framework_flavor(Framework f) {
  switch (f) {
    case Framework::dm:
    case Framework::psd: return 0;
    case Framework::eds:
    case Framework::ucca: return 1;
    case Framework::amr: return 2;
  }
  return 0;
}

const Node* Graph::find_node(int node_id) const {
  for (const auto& n : nodes) {
    if (n.id == node_id) return &n;
  }
  return nullptr;
}

const char* violation_code_name(ViolationCode code) {
  switch (code) {
    case ViolationCode::DuplicateNodeId: return "DuplicateNodeId";
    case ViolationCode::DanglingEdgeEndpoint: return "DanglingEdgeEndpoint";
    case ViolationCode::SelfLoop: return "SelfLoop";
    case ViolationCode::DuplicateEdge: return "DuplicateEdge";
    case ViolationCode::UnknownTop: return "UnknownTop";
    case ViolationCode::InvalidAnchor: return "InvalidAnchor";
    case ViolationCode::DuplicateProperty: return "DuplicateProperty";
    case ViolationCode::DuplicateAttribute: return "DuplicateAttribute";
    case ViolationCode::FlavorMismatch: return "FlavorMismatch";
    case ViolationCode::ReservedEdgeLabel: return "ReservedEdgeLabel";
  }
  return "?";
}

std::string Violation::to_string() const {
  std::ostringstream os;
  os << '[' << violation_code_name(code) << ']';
  for (int id : ids) os << ' ' << id;
  if (!detail.empty()) os << ": " << detail;
  return os.str();
}

ValidationError::ValidationError(std::string graph_id, std::vector<Violation> violations)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "graph '" << graph_id << "': ";
        for (std::size_t i = 0; i < violations.size(); ++i) {
          if (i) os << "; ";
          os << violations[i].to_string();
        }
        return os.str();
      }()),
      graph_id_(std::move(graph_id)),
      violations_(std::move(violations)) {}

std::vector<Violation> validate(const Graph& g) {
  std::vector<Violation> out;
  std::set<int> ids;
  for (const auto& n : g.nodes) {
    if (!ids.insert(n.id).second) {
      out.push_back({ViolationCode::DuplicateNodeId, {n.id}, "node id repeats"});
    }
  }
  const auto input_len = static_cast<int>(scalar_length(g.input));
  for (const auto& n : g.nodes) {
    std::set<std::string> names;
    for (const auto& [name, value] : n.properties) {
      (void)value;
      if (!names.insert(name).second) {
        out.push_back({ViolationCode::DuplicateProperty, {n.id}, "property '" + name + "'"});
      }
    }
    for (const auto& a : n.anchors) {
      if (!(0 <= a.from && a.from < a.to && a.to <= input_len)) {
        out.push_back({ViolationCode::InvalidAnchor,
                       {n.id, a.from, a.to},
                       "anchor out of range or empty"});
      }
    }
  }
  std::set<std::tuple<int, int, std::string>> triples;
  for (const auto& e : g.edges) {
    if (e.source == e.target) {
      out.push_back({ViolationCode::SelfLoop, {e.source}, "self-loop edge"});
      continue;
    }
    if (!ids.count(e.source) || !ids.count(e.target)) {
      out.push_back({ViolationCode::DanglingEdgeEndpoint,
                     {e.source, e.target},
                     "edge endpoint not a node id"});
      continue;
    }
    const std::string label_key = e.label ? "L" + *e.label : "\x01";
    if (!triples.insert({e.source, e.target, label_key}).second) {
      out.push_back({ViolationCode::DuplicateEdge,
                     {e.source, e.target},
                     e.label ? "label '" + *e.label + "'" : "unlabeled"});
    }
    if (e.label && *e.label == kAnchorLabel) {
      out.push_back({ViolationCode::ReservedEdgeLabel,
                     {e.source, e.target},
                     std::string("edge label '") + kAnchorLabel + "' is reserved"});
    }
    std::set<std::string> names;
    for (const auto& [name, value] : e.attributes) {
      (void)value;
      if (!names.insert(name).second) {
        out.push_back({ViolationCode::DuplicateAttribute,
                       {e.source, e.target},
                       "attribute '" + name + "'"});
      }
    }
  }
  for (int t : g.tops) {
    if (!ids.count(t)) {
      out.push_back({ViolationCode::UnknownTop, {t}, "top id not a node id"});
    }
  }
  if (g.flavor != framework_flavor(g.framework)) {
    out.push_back({ViolationCode::FlavorMismatch,
                   {g.flavor},
                   std::string("framework ") + framework_name(g.framework) +
                       " expects flavor " + std::to_string(framework_flavor(g.framework))});
  }
  return out;
}

namespace {

[[noreturn]] void format_fail(const std::string& what) {
  throw FormatError(what, 0);
}

std::string value_to_string(const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();  // numbers/booleans kept as their literal text
}

Pairs zip_pairs(const ordered_json& obj, const char* names_key, const char* what) {
  Pairs out;
  const auto names_it = obj.find(names_key);
  const auto values_it = obj.find("values");
  const bool has_names = names_it != obj.end() && !names_it->is_null();
  const bool has_values = values_it != obj.end() && !values_it->is_null();
  if (!has_names && !has_values) return out;
  if (!has_names || !has_values || !names_it->is_array() || !values_it->is_array() ||
      names_it->size() != values_it->size()) {
    format_fail(std::string(what) + ": '" + names_key +
                "' and 'values' must be parallel arrays of equal length");
  }
  for (std::size_t i = 0; i < names_it->size(); ++i) {
    if (!(*names_it)[i].is_string()) {
      format_fail(std::string(what) + ": '" + names_key + "' entries must be strings");
    }
    out.emplace_back((*names_it)[i].get<std::string>(), value_to_string((*values_it)[i]));
  }
  return out;
}

int require_int(const ordered_json& obj, const char* key, const char* what) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer()) {
    format_fail(std::string(what) + ": missing or non-integer '" + key + "'");
  }
  return it->get<int>();
}

Node parse_node(const ordered_json& obj) {
  if (!obj.is_object()) format_fail("node: expected an object");
  Node n;
  n.id = require_int(obj, "id", "node");
  for (const auto& [key, value] : obj.items()) {
    if (key == "id" || key == "properties" || key == "values") continue;
    if (key == "label") {
      if (!value.is_null()) n.label = value_to_string(value);
    } else if (key == "anchors") {
      if (value.is_null()) continue;
      if (!value.is_array()) format_fail("node: 'anchors' must be an array");
      for (const auto& a : value) {
        if (!a.is_object()) format_fail("node: anchor must be an object");
        n.anchors.push_back({require_int(a, "from", "anchor"), require_int(a, "to", "anchor")});
      }
    } else {
      n.extra.emplace_back(key, value);
    }
  }
  n.properties = zip_pairs(obj, "properties", "node");
  return n;
}

Edge parse_edge(const ordered_json& obj) {
  if (!obj.is_object()) format_fail("edge: expected an object");
  Edge e;
  e.source = require_int(obj, "source", "edge");
  e.target = require_int(obj, "target", "edge");
  for (const auto& [key, value] : obj.items()) {
    if (key == "source" || key == "target" || key == "attributes" || key == "values") continue;
    if (key == "label") {
      if (!value.is_null()) e.label = value_to_string(value);
    } else {
      e.extra.emplace_back(key, value);
    }
  }
  e.attributes = zip_pairs(obj, "attributes", "edge");
  return e;
}

}  // namespace

Graph parse_mrp_line(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(e.what(), e.byte);
  }
  if (!j.is_object()) format_fail("graph: expected a JSON object");

  Graph g;
  const auto id_it = j.find("id");
  if (id_it == j.end()) format_fail("graph: missing 'id'");
  g.id = value_to_string(*id_it);

  const auto fw_it = j.find("framework");
  if (fw_it == j.end() || !fw_it->is_string()) format_fail("graph: missing 'framework'");
  const auto fw = framework_from_name(fw_it->get<std::string>());
  if (!fw) format_fail("graph: unknown framework '" + fw_it->get<std::string>() + "'");
  g.framework = *fw;
  g.flavor = framework_flavor(g.framework);

  const auto input_it = j.find("input");
  if (input_it == j.end() || !input_it->is_string()) format_fail("graph: missing 'input'");
  g.input = input_it->get<std::string>();

  if (j.find("nodes") == j.end()) format_fail("graph: missing 'nodes'");

  for (const auto& [key, value] : j.items()) {
    if (key == "id" || key == "framework" || key == "input") continue;
    if (key == "flavor") {
      if (!value.is_number_integer()) format_fail("graph: 'flavor' must be an integer");
      g.flavor = value.get<int>();
    } else if (key == "nodes") {
      if (!value.is_array()) format_fail("graph: 'nodes' must be an array");
      for (const auto& n : value) g.nodes.push_back(parse_node(n));
    } else if (key == "edges") {
      if (value.is_null()) continue;
      if (!value.is_array()) format_fail("graph: 'edges' must be an array");
      for (const auto& e : value) g.edges.push_back(parse_edge(e));
    } else if (key == "tops") {
      if (value.is_null()) continue;
      if (!value.is_array()) format_fail("graph: 'tops' must be an array");
      for (const auto& t : value) {
        if (!t.is_number_integer()) format_fail("graph: 'tops' entries must be integers");
        g.tops.insert(t.get<int>());
      }
    } else {
      g.extra.emplace_back(key, value);
    }
  }

  auto violations = validate(g);
  if (!violations.empty()) throw ValidationError(g.id, std::move(violations));
  return g;
}

namespace {

void emit_pairs(ordered_json& obj, const Pairs& pairs, const char* names_key) {
  if (pairs.empty()) return;
  auto names = ordered_json::array();
  auto values = ordered_json::array();
  for (const auto& [name, value] : pairs) {
    names.push_back(name);
    values.push_back(value);
  }
  obj[names_key] = std::move(names);
  obj["values"] = std::move(values);
}

}  // namespace

std::string serialize_mrp(const Graph& g) {
  ordered_json j;
  j["id"] = g.id;
  j["flavor"] = g.flavor;
  j["framework"] = framework_name(g.framework);
  for (const auto& [key, value] : g.extra) j[key] = value;
  j["input"] = g.input;
  if (!g.tops.empty()) {
    auto tops = ordered_json::array();
    for (int t : g.tops) tops.push_back(t);  // std::set iterates ascending
    j["tops"] = std::move(tops);
  }
  auto nodes = ordered_json::array();
  for (const auto& n : g.nodes) {
    ordered_json nj;
    nj["id"] = n.id;
    if (n.label) nj["label"] = *n.label;
    emit_pairs(nj, n.properties, "properties");
    if (!n.anchors.empty()) {
      auto anchors = ordered_json::array();
      for (const auto& a : n.anchors) anchors.push_back({{"from", a.from}, {"to", a.to}});
      nj["anchors"] = std::move(anchors);
    }
    for (const auto& [key, value] : n.extra) nj[key] = value;
    nodes.push_back(std::move(nj));
  }
  j["nodes"] = std::move(nodes);
  if (!g.edges.empty()) {
    auto edges = ordered_json::array();
    for (const auto& e : g.edges) {
      ordered_json ej;
      ej["source"] = e.source;
      ej["target"] = e.target;
      if (e.label) ej["label"] = *e.label;
      emit_pairs(ej, e.attributes, "attributes");
      for (const auto& [key, value] : e.extra) ej[key] = value;
      edges.push_back(std::move(ej));
    }
    j["edges"] = std::move(edges);
  }
  return j.dump();
}

}  // namespace mrg

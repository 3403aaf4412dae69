#include "mrg/uniform.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "mrg/utf8.hpp"

namespace mrg {

const UNode* UniformGraph::find(int id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

namespace {

// Token indices fully covered by [a.from, a.to); everything else inside the
// anchor must be whitespace and the anchor must start and end on a token
// boundary.
std::vector<int> anchored_tokens(const std::vector<Token>& tokens, const Anchor& a,
                                 const std::vector<char32_t>& input_cps, int node_id) {
  std::vector<int> covered;
  for (const auto& t : tokens) {
    if (t.start >= a.from && t.end <= a.to) {
      if (t.start < t.end) covered.push_back(t.index);
    } else if (t.end > a.from && t.start < a.to) {
      throw AnchorMismatch(node_id, a,
                           "anchor [" + std::to_string(a.from) + "," + std::to_string(a.to) +
                               ") of node " + std::to_string(node_id) +
                               " crosses token boundary at [" + std::to_string(t.start) + "," +
                               std::to_string(t.end) + ")");
    }
  }
  auto fail = [&](const char* why) {
    throw AnchorMismatch(node_id, a,
                         "anchor [" + std::to_string(a.from) + "," + std::to_string(a.to) +
                             ") of node " + std::to_string(node_id) + ": " + why);
  };
  if (covered.empty()) fail("covers no token");
  // Gaps between covered tokens must be whitespace only.
  std::size_t k = 0;
  for (int pos = a.from; pos < a.to; ++pos) {
    while (k < covered.size() && tokens[covered[k]].end <= pos) ++k;
    const bool inside =
        k < covered.size() && pos >= tokens[covered[k]].start && pos < tokens[covered[k]].end;
    if (inside) continue;
    if (pos >= static_cast<int>(input_cps.size()) || !is_space_cp(input_cps[pos])) {
      fail("covers non-token, non-whitespace text");
    }
  }
  const Token& first = tokens[covered.front()];
  const Token& last = tokens[covered.back()];
  if (a.from != first.start || a.to != last.end) fail("does not start/end on a token boundary");
  return covered;
}

}  // namespace

UniformGraph uniformize(const Graph& g, const std::vector<Token>& tokens,
                        const UniformOptions& opts) {
  UniformGraph u;
  u.id = g.id;
  u.framework = g.framework;
  u.input = g.input;
  u.extra = g.extra;
  u.virtual_root = opts.allow_unanchored;

  if (u.virtual_root) {
    Token root;
    root.index = 0;
    root.form = "";
    root.start = 0;
    root.end = 0;
    u.tokens.push_back(root);
  }
  for (const auto& t : tokens) {
    Token copy = t;
    copy.index = static_cast<int>(u.tokens.size());
    u.tokens.push_back(std::move(copy));
  }
  for (const auto& t : u.tokens) {
    UNode tn;
    tn.id = t.index;
    tn.kind = UNodeKind::token;
    tn.token_ref = t.index;
    u.nodes.push_back(std::move(tn));
  }

  const auto input_cps = decode_utf8(g.input);
  const int base = u.token_count();
  std::map<int, int> id_map;  // corpus node id -> uniform id
  std::vector<std::vector<int>> anchor_targets;
  for (const auto& nd : g.nodes) {
    UNode sn;
    sn.id = base + static_cast<int>(anchor_targets.size());
    sn.kind = UNodeKind::semantic;
    sn.label = nd.label;
    sn.properties = nd.properties;
    sn.orig_id = nd.id;
    sn.extra = nd.extra;
    id_map[nd.id] = sn.id;
    u.nodes.push_back(std::move(sn));

    std::set<int> covered;
    const int shift = u.virtual_root ? 1 : 0;
    for (const auto& a : nd.anchors) {
      for (int tok : anchored_tokens(tokens, a, input_cps, nd.id)) {
        covered.insert(tok + shift);
      }
    }
    if (covered.empty() && u.virtual_root) covered.insert(0);
    anchor_targets.emplace_back(covered.begin(), covered.end());
  }

  for (const auto& e : g.edges) {
    UEdge ue;
    ue.source = id_map.at(e.source);
    ue.target = id_map.at(e.target);
    ue.label = e.label;
    ue.attributes = e.attributes;
    ue.extra = e.extra;
    u.edges.push_back(std::move(ue));
  }
  for (std::size_t k = 0; k < anchor_targets.size(); ++k) {
    for (int tok : anchor_targets[k]) {
      UEdge ue;
      ue.source = base + static_cast<int>(k);
      ue.target = tok;
      ue.label = kAnchorLabel;
      u.edges.push_back(std::move(ue));
    }
  }
  for (int t : g.tops) u.tops.insert(id_map.at(t));
  return u;
}

Graph deuniformize(const UniformGraph& u) {
  Graph g;
  g.id = u.id;
  g.framework = u.framework;
  g.flavor = framework_flavor(u.framework);
  g.input = u.input;
  g.extra = u.extra;

  std::vector<const UNode*> semantic;
  for (const auto& n : u.nodes) {
    if (n.kind == UNodeKind::semantic) semantic.push_back(&n);
  }
  bool all_orig = true;
  for (const auto* n : semantic) all_orig = all_orig && n->orig_id.has_value();

  std::map<int, int> id_map;  // uniform id -> corpus id
  for (std::size_t k = 0; k < semantic.size(); ++k) {
    id_map[semantic[k]->id] = all_orig ? *semantic[k]->orig_id : static_cast<int>(k);
  }

  // Anchor edges grouped per semantic node, as sorted token indices.
  std::map<int, std::vector<int>> anchors_of;
  for (const auto& e : u.edges) {
    if (!e.is_anchor()) continue;
    anchors_of[e.source].push_back(e.target);
  }

  const auto input_cps = decode_utf8(u.input);
  auto whitespace_between = [&](int from, int to) {
    for (int pos = from; pos < to; ++pos) {
      if (pos < 0 || pos >= static_cast<int>(input_cps.size())) return false;
      if (!is_space_cp(input_cps[pos])) return false;
    }
    return true;
  };

  for (std::size_t k = 0; k < semantic.size(); ++k) {
    const UNode* sn = semantic[k];
    Node nd;
    nd.id = id_map.at(sn->id);
    nd.label = sn->label;
    nd.properties = sn->properties;
    nd.extra = sn->extra;
    auto it = anchors_of.find(sn->id);
    if (it != anchors_of.end()) {
      auto toks = it->second;
      std::sort(toks.begin(), toks.end());
      // Merge runs of tokens separated only by whitespace into maximal spans;
      // the virtual root (empty span) produces no anchor.
      std::optional<Anchor> run;
      for (int t : toks) {
        const Token& tok = u.tokens[t];
        if (tok.start == tok.end) continue;
        if (run && whitespace_between(run->to, tok.start)) {
          run->to = tok.end;
        } else {
          if (run) nd.anchors.push_back(*run);
          run = Anchor{tok.start, tok.end};
        }
      }
      if (run) nd.anchors.push_back(*run);
    }
    g.nodes.push_back(std::move(nd));
  }

  for (const auto& e : u.edges) {
    if (e.is_anchor()) continue;
    Edge ge;
    ge.source = id_map.at(e.source);
    ge.target = id_map.at(e.target);
    ge.label = e.label;
    ge.attributes = e.attributes;
    ge.extra = e.extra;
    g.edges.push_back(std::move(ge));
  }
  for (int t : u.tops) {
    auto it = id_map.find(t);
    if (it != id_map.end()) g.tops.insert(it->second);
  }
  return g;
}

std::vector<std::string> validate_uniform(const UniformGraph& u) {
  std::vector<std::string> out;
  const int base = u.token_count();
  if (static_cast<int>(u.nodes.size()) < base) {
    out.push_back("fewer nodes than tokens");
    return out;
  }
  for (int i = 0; i < base; ++i) {
    const UNode& n = u.nodes[i];
    if (n.kind != UNodeKind::token || n.id != i || !n.token_ref || *n.token_ref != i) {
      out.push_back("node " + std::to_string(i) + ": token nodes must come first, id == index");
    }
    if (n.label || !n.properties.empty()) {
      out.push_back("token node " + std::to_string(i) + " carries label/properties");
    }
  }
  std::set<int> ids;
  std::set<int> token_ids;
  for (const auto& n : u.nodes) {
    if (!ids.insert(n.id).second) out.push_back("duplicate node id " + std::to_string(n.id));
    if (n.kind == UNodeKind::token) {
      token_ids.insert(n.id);
      if (!n.token_ref) out.push_back("token node without token_ref");
    } else if (n.token_ref) {
      out.push_back("semantic node " + std::to_string(n.id) + " has token_ref");
    }
  }
  std::set<std::tuple<int, int, std::string>> triples;
  for (const auto& e : u.edges) {
    if (!ids.count(e.source) || !ids.count(e.target)) {
      out.push_back("edge endpoint missing: " + std::to_string(e.source) + "->" +
                    std::to_string(e.target));
      continue;
    }
    if (e.source == e.target) out.push_back("self-loop at " + std::to_string(e.source));
    if (!triples.insert({e.source, e.target, e.label.value_or("\x01")}).second) {
      out.push_back("duplicate edge " + std::to_string(e.source) + "->" +
                    std::to_string(e.target));
    }
    const bool src_tok = token_ids.count(e.source) != 0;
    const bool dst_tok = token_ids.count(e.target) != 0;
    if (e.is_anchor()) {
      if (src_tok || !dst_tok) {
        out.push_back("anchor edge must run semantic->token: " + std::to_string(e.source) +
                      "->" + std::to_string(e.target));
      }
      if (!e.attributes.empty()) out.push_back("anchor edge carries attributes");
    } else if (src_tok || dst_tok) {
      out.push_back("non-anchor edge touches a token node: " + std::to_string(e.source) + "->" +
                    std::to_string(e.target));
    }
  }
  for (int t : u.tops) {
    if (!ids.count(t)) out.push_back("top " + std::to_string(t) + " not a node");
    if (token_ids.count(t)) out.push_back("top " + std::to_string(t) + " is a token node");
  }
  return out;
}

std::string serialize_uniform(const UniformGraph& u) {
  ordered_json j;
  j["id"] = u.id;
  j["framework"] = framework_name(u.framework);
  j["input"] = u.input;
  if (u.virtual_root) j["virtual_root"] = true;
  for (const auto& [key, value] : u.extra) j[key] = value;
  auto toks = ordered_json::array();
  for (const auto& t : u.tokens) {
    toks.push_back({{"form", t.form}, {"start", t.start}, {"end", t.end}});
  }
  j["tokens"] = std::move(toks);
  auto nodes = ordered_json::array();
  for (const auto& n : u.nodes) {
    ordered_json nj;
    nj["id"] = n.id;
    nj["kind"] = n.kind == UNodeKind::token ? "token" : "semantic";
    if (n.token_ref) nj["token"] = *n.token_ref;
    if (n.orig_id) nj["orig"] = *n.orig_id;
    if (n.label) nj["label"] = *n.label;
    if (!n.properties.empty()) {
      auto names = ordered_json::array();
      auto values = ordered_json::array();
      for (const auto& [name, value] : n.properties) {
        names.push_back(name);
        values.push_back(value);
      }
      nj["properties"] = std::move(names);
      nj["values"] = std::move(values);
    }
    for (const auto& [key, value] : n.extra) nj[key] = value;
    nodes.push_back(std::move(nj));
  }
  j["nodes"] = std::move(nodes);
  auto edges = ordered_json::array();
  for (const auto& e : u.edges) {
    ordered_json ej;
    ej["source"] = e.source;
    ej["target"] = e.target;
    if (e.label) ej["label"] = *e.label;
    if (!e.attributes.empty()) {
      auto names = ordered_json::array();
      auto values = ordered_json::array();
      for (const auto& [name, value] : e.attributes) {
        names.push_back(name);
        values.push_back(value);
      }
      ej["attributes"] = std::move(names);
      ej["values"] = std::move(values);
    }
    for (const auto& [key, value] : e.extra) ej[key] = value;
    edges.push_back(std::move(ej));
  }
  j["edges"] = std::move(edges);
  auto tops = ordered_json::array();
  for (int t : u.tops) tops.push_back(t);
  j["tops"] = std::move(tops);
  return j.dump();
}

UniformGraph parse_uniform_line(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(e.what(), e.byte);
  }
  if (!j.is_object() || !j.contains("tokens")) {
    throw FormatError("uniform graph: expected an object with 'tokens'", 0);
  }
  UniformGraph u;
  u.id = j.value("id", "");
  const auto fw = framework_from_name(j.value("framework", ""));
  if (!fw) throw FormatError("uniform graph: unknown framework", 0);
  u.framework = *fw;
  u.input = j.value("input", "");
  u.virtual_root = j.value("virtual_root", false);
  static const std::set<std::string> known{"id",    "framework", "input", "virtual_root",
                                           "tokens", "nodes",    "edges", "tops"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) u.extra.emplace_back(key, value);
  }
  int index = 0;
  for (const auto& tj : j.at("tokens")) {
    Token t;
    t.index = index++;
    t.form = tj.value("form", "");
    t.start = tj.value("start", 0);
    t.end = tj.value("end", 0);
    u.tokens.push_back(std::move(t));
  }
  for (const auto& nj : j.at("nodes")) {
    UNode n;
    n.id = nj.at("id").get<int>();
    n.kind = nj.value("kind", "semantic") == "token" ? UNodeKind::token : UNodeKind::semantic;
    if (nj.contains("token")) n.token_ref = nj.at("token").get<int>();
    if (nj.contains("orig")) n.orig_id = nj.at("orig").get<int>();
    if (nj.contains("label") && !nj.at("label").is_null()) {
      n.label = nj.at("label").get<std::string>();
    }
    if (nj.contains("properties")) {
      const auto& names = nj.at("properties");
      const auto& values = nj.at("values");
      for (std::size_t i = 0; i < names.size(); ++i) {
        n.properties.emplace_back(names[i].get<std::string>(),
                                  values[i].is_string() ? values[i].get<std::string>()
                                                        : values[i].dump());
      }
    }
    static const std::set<std::string> node_known{"id",     "kind",    "token", "orig",
                                                  "label",  "properties", "values"};
    for (const auto& [key, value] : nj.items()) {
      if (!node_known.count(key)) n.extra.emplace_back(key, value);
    }
    u.nodes.push_back(std::move(n));
  }
  if (j.contains("edges")) {
    for (const auto& ej : j.at("edges")) {
      UEdge e;
      e.source = ej.at("source").get<int>();
      e.target = ej.at("target").get<int>();
      if (ej.contains("label") && !ej.at("label").is_null()) {
        e.label = ej.at("label").get<std::string>();
      }
      if (ej.contains("attributes")) {
        const auto& names = ej.at("attributes");
        const auto& values = ej.at("values");
        for (std::size_t i = 0; i < names.size(); ++i) {
          e.attributes.emplace_back(names[i].get<std::string>(),
                                    values[i].is_string() ? values[i].get<std::string>()
                                                          : values[i].dump());
        }
      }
      static const std::set<std::string> edge_known{"source", "target", "label", "attributes",
                                                    "values"};
      for (const auto& [key, value] : ej.items()) {
        if (!edge_known.count(key)) e.extra.emplace_back(key, value);
      }
      u.edges.push_back(std::move(e));
    }
  }
  if (j.contains("tops")) {
    for (const auto& t : j.at("tops")) u.tops.insert(t.get<int>());
  }
  return u;
}

bool looks_like_uniform(const std::string& json_text) {
  const auto pos = json_text.find("\"tokens\"");
  return pos != std::string::npos;
}

}  // namespace mrg

#include "mrg/oracle.hpp"

#include <algorithm>
#include <deque>
#include <iomanip>
#include <sstream>

namespace mrg {

IsolatedComponent::IsolatedComponent(std::string graph_id, std::vector<int> ids)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "graph '" << graph_id << "': semantic nodes unreachable from any token:";
        for (int id : ids) os << ' ' << id;
        return os.str();
      }()),
      ids_(std::move(ids)) {}

namespace {

struct GoldView {
  const UniformGraph& u;
  int base;
  std::map<int, const UNode*> by_id;
  std::map<int, std::vector<int>> out;   // directed adjacency
  std::map<int, std::set<int>> nbrs;     // undirected neighbor ids
  std::set<std::pair<int, int>> pairs;   // directed (source, target)

  explicit GoldView(const UniformGraph& g) : u(g), base(g.token_count()) {
    for (const auto& n : g.nodes) by_id[n.id] = &n;
    for (const auto& e : g.edges) {
      out[e.source].push_back(e.target);
      nbrs[e.source].insert(e.target);
      nbrs[e.target].insert(e.source);
      pairs.insert({e.source, e.target});
    }
  }

  bool is_token(int id) const {
    auto it = by_id.find(id);
    return it != by_id.end() && it->second->kind == UNodeKind::token;
  }

  std::vector<int> descendant_tokens(int id) const {
    std::vector<int> stack{id};
    std::set<int> visited{id};
    std::vector<int> toks;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      auto it = out.find(v);
      if (it == out.end()) continue;
      for (int w : it->second) {
        if (!visited.insert(w).second) continue;
        if (is_token(w)) toks.push_back(w);
        stack.push_back(w);
      }
    }
    std::sort(toks.begin(), toks.end());
    return toks;
  }

  std::vector<int> unreachable_semantic() const {
    std::set<int> seen;
    std::deque<int> work;
    for (const auto& n : u.nodes) {
      if (n.kind == UNodeKind::token) {
        seen.insert(n.id);
        work.push_back(n.id);
      }
    }
    while (!work.empty()) {
      const int v = work.front();
      work.pop_front();
      auto it = nbrs.find(v);
      if (it == nbrs.end()) continue;
      for (int w : it->second) {
        if (seen.insert(w).second) work.push_back(w);
      }
    }
    std::vector<int> missing;
    for (const auto& n : u.nodes) {
      if (n.kind == UNodeKind::semantic && !seen.count(n.id)) missing.push_back(n.id);
    }
    return missing;
  }
};

int corpus_id(const UNode& n) { return n.orig_id.value_or(n.id); }

ExtractResult extract_impl(const UniformGraph& u, int max_iterations, bool lenient) {
  GoldView gold(u);
  ExtractResult res;
  res.isolated = gold.unreachable_semantic();
  if (!res.isolated.empty() && !lenient) throw IsolatedComponent(u.id, res.isolated);

  OperationScript& s = res.script;
  s.graph_id = u.id;
  s.framework = u.framework;
  s.input = u.input;
  s.tokens = u.tokens;
  s.virtual_root = u.virtual_root;

  // Token-descendant index lists, memoized on the full gold graph.
  std::map<int, std::vector<int>> desc;
  auto desc_of = [&](int id) -> const std::vector<int>& {
    auto it = desc.find(id);
    if (it == desc.end()) it = desc.emplace(id, gold.descendant_tokens(id)).first;
    return it->second;
  };

  std::set<int> created;
  std::vector<int> created_order;
  std::map<int, int> replay_id;
  for (int t = 0; t < gold.base; ++t) {
    created.insert(t);
    created_order.push_back(t);
    replay_id[t] = t;
  }
  int next_replay = gold.base;
  std::vector<char> emitted(u.edges.size(), 0);

  for (int iter = 1; iter <= max_iterations; ++iter) {
    IterationOps ops;
    const std::vector<int> traversal = created_order;  // frozen snapshot
    std::set<int> claimed;
    std::vector<int> newly;
    for (int v : traversal) {
      auto nb = gold.nbrs.find(v);
      if (nb == gold.nbrs.end()) continue;
      int best = -1;
      for (int w : nb->second) {
        if (created.count(w) || claimed.count(w)) continue;
        if (best == -1) {
          best = w;
          continue;
        }
        const auto& dw = desc_of(w);
        const auto& db = desc_of(best);
        if (dw.size() != db.size()) {
          if (dw.size() < db.size()) best = w;
        } else if (dw != db) {
          if (std::lexicographical_compare(dw.begin(), dw.end(), db.begin(), db.end())) {
            best = w;
          }
        } else if (corpus_id(*gold.by_id.at(w)) < corpus_id(*gold.by_id.at(best))) {
          best = w;
        }
      }
      if (best == -1) continue;
      claimed.insert(best);
      newly.push_back(best);
      const UNode& bn = *gold.by_id.at(best);
      AddNodeOp op;
      op.origin = replay_id.at(v);
      op.direction = gold.pairs.count({best, v}) ? Direction::parent : Direction::child;
      op.label = bn.label;
      op.properties = bn.properties;
      ops.add_nodes.push_back(std::move(op));
      res.created_gold.push_back(best);
      replay_id[best] = next_replay++;
    }
    for (int w : newly) {
      created.insert(w);
      created_order.push_back(w);
    }
    for (std::size_t ei = 0; ei < u.edges.size(); ++ei) {
      if (emitted[ei]) continue;
      const UEdge& e = u.edges[ei];
      if (!created.count(e.source) || !created.count(e.target)) continue;
      emitted[ei] = 1;
      UEdge m = e;
      m.source = replay_id.at(e.source);
      m.target = replay_id.at(e.target);
      ops.add_edges.push_back(std::move(m));
    }
    if (ops.add_nodes.empty()) break;
    s.iterations.push_back(std::move(ops));
  }

  res.covered = static_cast<int>(created_order.size()) - gold.base == u.semantic_count();
  for (int t : u.tops) {
    auto it = replay_id.find(t);
    if (it != replay_id.end()) s.tops.insert(it->second);
  }
  return res;
}

}  // namespace

int token_descendants(const UniformGraph& u, int id) {
  return static_cast<int>(token_descendant_indices(u, id).size());
}

std::vector<int> token_descendant_indices(const UniformGraph& u, int id) {
  GoldView gold(u);
  return gold.descendant_tokens(id);
}

std::vector<int> node_order(const UniformGraph& u, const std::vector<int>& created) {
  const int base = u.token_count();
  for (int t = 0; t < base; ++t) {
    if (t >= static_cast<int>(created.size()) || created[t] != t) {
      throw ScriptError("node order must start with all token nodes, left to right");
    }
  }
  return created;
}

ExtractResult extract_script(const UniformGraph& u, int max_iterations) {
  return extract_impl(u, max_iterations, false);
}

ExtractResult extract_script_lenient(const UniformGraph& u, int max_iterations) {
  return extract_impl(u, max_iterations, true);
}

UniformGraph replay(const OperationScript& script) {
  UniformGraph u;
  u.id = script.graph_id;
  u.framework = script.framework;
  u.input = script.input;
  u.tokens = script.tokens;
  u.virtual_root = script.virtual_root;
  const int base = u.token_count();
  for (int t = 0; t < base; ++t) {
    UNode tn;
    tn.id = t;
    tn.kind = UNodeKind::token;
    tn.token_ref = t;
    u.nodes.push_back(std::move(tn));
  }

  int next = base;
  std::set<std::tuple<int, int, std::string>> triples;
  for (std::size_t it = 0; it < script.iterations.size(); ++it) {
    const auto& ops = script.iterations[it];
    const int frozen = next;  // ids >= frozen are created in this iteration
    std::set<int> origins;
    std::vector<std::pair<int, int>> implied;
    for (const auto& op : ops.add_nodes) {
      if (op.origin < 0 || op.origin >= next) {
        throw DanglingReference("iteration " + std::to_string(it + 1) + ": origin " +
                                std::to_string(op.origin) + " does not exist");
      }
      if (op.origin >= frozen) {
        throw ScriptError("iteration " + std::to_string(it + 1) + ": origin " +
                          std::to_string(op.origin) + " was created in the same iteration");
      }
      if (!origins.insert(op.origin).second) {
        throw ScriptError("iteration " + std::to_string(it + 1) + ": origin " +
                          std::to_string(op.origin) + " creates twice");
      }
      UNode n;
      n.id = next++;
      n.kind = UNodeKind::semantic;
      n.label = op.label;
      n.properties = op.properties;
      u.nodes.push_back(std::move(n));
      if (op.direction == Direction::parent) {
        implied.emplace_back(next - 1, op.origin);
      } else {
        implied.emplace_back(op.origin, next - 1);
      }
    }
    for (const auto& e : ops.add_edges) {
      if (e.source < 0 || e.source >= next || e.target < 0 || e.target >= next) {
        throw DanglingReference("iteration " + std::to_string(it + 1) + ": edge " +
                                std::to_string(e.source) + "->" + std::to_string(e.target) +
                                " cites a nonexistent node");
      }
      if (e.source < frozen && e.target < frozen) {
        throw ScriptError("iteration " + std::to_string(it + 1) + ": edge " +
                          std::to_string(e.source) + "->" + std::to_string(e.target) +
                          " touches no node created this iteration");
      }
      if (e.source == e.target) throw ScriptError("self-loop edge in script");
      if (!triples.insert({e.source, e.target, e.label.value_or("\x01")}).second) {
        throw ScriptError("duplicate edge in script: " + std::to_string(e.source) + "->" +
                          std::to_string(e.target));
      }
      u.edges.push_back(e);
    }
    for (const auto& [src, dst] : implied) {
      const bool found =
          std::any_of(ops.add_edges.begin(), ops.add_edges.end(),
                      [&](const UEdge& e) { return e.source == src && e.target == dst; });
      if (!found) {
        throw ScriptError("implied edge " + std::to_string(src) + "->" + std::to_string(dst) +
                          " missing from add_edges");
      }
    }
  }
  for (int t : script.tops) {
    if (t < 0 || t >= next) throw DanglingReference("top " + std::to_string(t) + " does not exist");
    u.tops.insert(t);
  }
  auto problems = validate_uniform(u);
  if (!problems.empty()) throw ScriptError("replayed graph is malformed: " + problems.front());
  return u;
}

std::vector<long> created_per_iteration(const OperationScript& script) {
  std::vector<long> out;
  long cum = 0;
  for (const auto& it : script.iterations) {
    cum += static_cast<long>(it.add_nodes.size());
    out.push_back(cum);
  }
  return out;
}

bool replay_matches_gold(const UniformGraph& gold, const ExtractResult& res,
                         const UniformGraph& replayed, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const int base = gold.token_count();
  if (replayed.token_count() != base) return fail("token count differs");
  std::map<int, int> to_replay;
  for (int t = 0; t < base; ++t) to_replay[t] = t;
  for (std::size_t k = 0; k < res.created_gold.size(); ++k) {
    to_replay[res.created_gold[k]] = base + static_cast<int>(k);
  }
  for (const auto& n : gold.nodes) {
    if (n.kind != UNodeKind::semantic) continue;
    auto it = to_replay.find(n.id);
    if (it == to_replay.end()) return fail("gold node " + std::to_string(n.id) + " not created");
    const UNode* r = replayed.find(it->second);
    if (!r) return fail("replayed node missing");
    if (r->label != n.label || r->properties != n.properties) {
      return fail("node " + std::to_string(n.id) + " label/properties differ");
    }
  }
  auto edge_key = [](int s, int t, const UEdge& e) {
    std::string k = std::to_string(s) + ">" + std::to_string(t) + "|" + e.label.value_or("\x01");
    for (const auto& [name, value] : e.attributes) k += "|" + name + "=" + value;
    return k;
  };
  std::vector<std::string> gold_edges, replay_edges;
  for (const auto& e : gold.edges) {
    auto si = to_replay.find(e.source);
    auto ti = to_replay.find(e.target);
    if (si == to_replay.end() || ti == to_replay.end()) {
      return fail("gold edge cites uncreated node");
    }
    gold_edges.push_back(edge_key(si->second, ti->second, e));
  }
  for (const auto& e : replayed.edges) replay_edges.push_back(edge_key(e.source, e.target, e));
  std::sort(gold_edges.begin(), gold_edges.end());
  std::sort(replay_edges.begin(), replay_edges.end());
  if (gold_edges != replay_edges) return fail("edge sets differ");
  std::set<int> gold_tops;
  for (int t : gold.tops) {
    auto it = to_replay.find(t);
    if (it == to_replay.end()) return fail("gold top not created");
    gold_tops.insert(it->second);
  }
  if (gold_tops != replayed.tops) return fail("tops differ");
  return true;
}

CoverageReport coverage(const std::vector<UniformGraph>& corpus, int max_iterations,
                        const CoverageOptions& opts) {
  struct Acc {
    std::vector<long> nodes_cum;
    std::vector<long> graphs_cum;
    long denom = 0;
    long graphs = 0;
  };
  std::map<Framework, Acc> per;
  Acc overall;
  CoverageReport rep;
  rep.max_iterations = max_iterations;

  auto ensure = [&](Acc& a) {
    if (a.nodes_cum.empty()) {
      a.nodes_cum.assign(max_iterations, 0);
      a.graphs_cum.assign(max_iterations, 0);
    }
  };

  for (const auto& g : corpus) {
    auto res = extract_script_lenient(g, max_iterations);
    if (!res.isolated.empty()) {
      rep.warnings.push_back("graph '" + g.id + "': " + std::to_string(res.isolated.size()) +
                             " isolated semantic node(s)" +
                             (opts.exclude_isolated ? ", excluded from denominators" : ""));
    }
    const long denom =
        g.semantic_count() - (opts.exclude_isolated ? static_cast<long>(res.isolated.size()) : 0);
    const auto per_iter = created_per_iteration(res.script);
    Acc& a = per[g.framework];
    ensure(a);
    ensure(overall);
    a.denom += denom;
    overall.denom += denom;
    a.graphs += 1;
    overall.graphs += 1;
    for (int i = 0; i < max_iterations; ++i) {
      const long cum = i < static_cast<int>(per_iter.size())
                           ? per_iter[i]
                           : (per_iter.empty() ? 0 : per_iter.back());
      a.nodes_cum[i] += cum;
      overall.nodes_cum[i] += cum;
      if (cum >= denom) {
        a.graphs_cum[i] += 1;
        overall.graphs_cum[i] += 1;
      }
    }
  }

  auto to_row = [&](const Acc& a) {
    CoverageRow row;
    row.total_nodes = a.denom;
    row.total_graphs = a.graphs;
    for (int i = 0; i < max_iterations; ++i) {
      row.node_coverage.push_back(a.denom > 0 ? static_cast<double>(a.nodes_cum[i]) / a.denom
                                              : 1.0);
      row.graph_coverage.push_back(a.graphs > 0 ? static_cast<double>(a.graphs_cum[i]) / a.graphs
                                                : 1.0);
    }
    return row;
  };
  for (const auto& [fw, acc] : per) rep.per_framework[fw] = to_row(acc);
  ensure(overall);
  rep.overall = to_row(overall);
  return rep;
}

std::string format_coverage(const CoverageReport& report, bool csv) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  if (csv) {
    os << "framework,metric";
    for (int i = 1; i <= report.max_iterations; ++i) os << ",iter" << i;
    os << "\n";
    auto row = [&](const std::string& fw, const char* metric, const std::vector<double>& vals) {
      os << fw << ',' << metric;
      for (double v : vals) os << ',' << v * 100.0;
      os << "\n";
    };
    for (const auto& [fw, r] : report.per_framework) {
      row(framework_name(fw), "nodes", r.node_coverage);
      row(framework_name(fw), "graphs", r.graph_coverage);
    }
    row("all", "nodes", report.overall.node_coverage);
    row("all", "graphs", report.overall.graph_coverage);
  } else {
    os << std::left << std::setw(10) << "framework" << std::setw(8) << "metric";
    os << std::right;
    for (int i = 1; i <= report.max_iterations; ++i) os << std::setw(9) << i;
    os << "\n";
    auto row = [&](const std::string& fw, const char* metric, const std::vector<double>& vals) {
      os << std::left << std::setw(10) << fw << std::setw(8) << metric << std::right;
      for (double v : vals) {
        std::ostringstream cell;
        cell << std::fixed << std::setprecision(2) << v * 100.0 << '%';
        os << std::setw(9) << cell.str();
      }
      os << "\n";
    };
    for (const auto& [fw, r] : report.per_framework) {
      row(framework_name(fw), "nodes", r.node_coverage);
      row(framework_name(fw), "graphs", r.graph_coverage);
    }
    row("all", "nodes", report.overall.node_coverage);
    row("all", "graphs", report.overall.graph_coverage);
    for (const auto& w : report.warnings) os << "# " << w << "\n";
  }
  return os.str();
}

namespace {

ordered_json edge_to_json(const UEdge& e) {
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
  return ej;
}

UEdge edge_from_json(const ordered_json& ej) {
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
  return e;
}

}  // namespace

std::string serialize_script(const OperationScript& s, bool covered) {
  ordered_json j;
  j["id"] = s.graph_id;
  j["framework"] = framework_name(s.framework);
  j["input"] = s.input;
  if (s.virtual_root) j["virtual_root"] = true;
  j["covered"] = covered;
  auto toks = ordered_json::array();
  for (const auto& t : s.tokens) {
    toks.push_back({{"form", t.form}, {"start", t.start}, {"end", t.end}});
  }
  j["tokens"] = std::move(toks);
  auto iters = ordered_json::array();
  for (const auto& it : s.iterations) {
    ordered_json ij;
    auto adds = ordered_json::array();
    for (const auto& op : it.add_nodes) {
      ordered_json oj;
      oj["origin"] = op.origin;
      oj["direction"] = op.direction == Direction::parent ? "parent" : "child";
      if (op.label) oj["label"] = *op.label;
      if (!op.properties.empty()) {
        auto names = ordered_json::array();
        auto values = ordered_json::array();
        for (const auto& [name, value] : op.properties) {
          names.push_back(name);
          values.push_back(value);
        }
        oj["properties"] = std::move(names);
        oj["values"] = std::move(values);
      }
      adds.push_back(std::move(oj));
    }
    ij["add_nodes"] = std::move(adds);
    auto edges = ordered_json::array();
    for (const auto& e : it.add_edges) edges.push_back(edge_to_json(e));
    ij["add_edges"] = std::move(edges);
    iters.push_back(std::move(ij));
  }
  j["iterations"] = std::move(iters);
  auto tops = ordered_json::array();
  for (int t : s.tops) tops.push_back(t);
  j["tops"] = std::move(tops);
  return j.dump();
}

OperationScript parse_script_line(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(e.what(), e.byte);
  }
  OperationScript s;
  s.graph_id = j.value("id", "");
  const auto fw = framework_from_name(j.value("framework", ""));
  if (!fw) throw FormatError("script: unknown framework", 0);
  s.framework = *fw;
  s.input = j.value("input", "");
  s.virtual_root = j.value("virtual_root", false);
  int index = 0;
  for (const auto& tj : j.at("tokens")) {
    Token t;
    t.index = index++;
    t.form = tj.value("form", "");
    t.start = tj.value("start", 0);
    t.end = tj.value("end", 0);
    s.tokens.push_back(std::move(t));
  }
  for (const auto& ij : j.at("iterations")) {
    IterationOps ops;
    for (const auto& oj : ij.at("add_nodes")) {
      AddNodeOp op;
      op.origin = oj.at("origin").get<int>();
      op.direction =
          oj.value("direction", "parent") == "child" ? Direction::child : Direction::parent;
      if (oj.contains("label") && !oj.at("label").is_null()) {
        op.label = oj.at("label").get<std::string>();
      }
      if (oj.contains("properties")) {
        const auto& names = oj.at("properties");
        const auto& values = oj.at("values");
        for (std::size_t i = 0; i < names.size(); ++i) {
          op.properties.emplace_back(names[i].get<std::string>(),
                                     values[i].is_string() ? values[i].get<std::string>()
                                                           : values[i].dump());
        }
      }
      ops.add_nodes.push_back(std::move(op));
    }
    for (const auto& ej : ij.at("add_edges")) ops.add_edges.push_back(edge_from_json(ej));
    s.iterations.push_back(std::move(ops));
  }
  if (j.contains("tops")) {
    for (const auto& t : j.at("tops")) s.tops.insert(t.get<int>());
  }
  return s;
}

int default_iteration_budget(Framework f) {
  switch (f) {
    case Framework::dm:
    case Framework::psd: return 1;
    case Framework::eds: return 3;
    case Framework::ucca:
    case Framework::amr: return 2;
  }
  return 1;
}

}  // namespace mrg

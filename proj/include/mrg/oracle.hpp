// Layered AddNodes/AddEdges oracle: turns a gold uniform graph into the
// iteration-by-iteration operation script that rebuilds it, replays such
// scripts, and computes corpus coverage per iteration count.
//
// Extraction walks existing nodes in creation order (tokens left to right,
// then by creation time). Each origin may create at most one not-yet-created
// neighbor per iteration: the one with the fewest token descendants, ties
// broken by the lexicographically smallest sorted token-descendant index
// list, then by smallest corpus node id. A node creatable as a parent is
// never created as a child. Nodes created in an iteration become visible to
// the traversal only in the next one, but are claimed immediately so no node
// is created twice. After each AddNodes batch, every gold edge whose
// endpoints now both exist (and that was not emitted before) goes into that
// iteration's add_edges, including the edges implied by the AddNodes ops.
//
// Scripts are expressed in replay id space: token nodes keep ids
// 0..T-1 and created nodes get T, T+1, ... in creation order.
#ifndef MRG_ORACLE_HPP
#define MRG_ORACLE_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mrg/uniform.hpp"

namespace mrg {

enum class Direction { parent, child };

struct AddNodeOp {
  int origin = 0;
  Direction direction = Direction::parent;  // parent: new->origin, child: origin->new
  std::optional<std::string> label;
  Pairs properties;
  friend bool operator==(const AddNodeOp&, const AddNodeOp&) = default;
};

struct IterationOps {
  std::vector<AddNodeOp> add_nodes;  // traversal order of origins
  std::vector<UEdge> add_edges;
  friend bool operator==(const IterationOps&, const IterationOps&) = default;
};

struct OperationScript {
  std::string graph_id;
  Framework framework = Framework::dm;
  std::string input;
  std::vector<Token> tokens;  // includes the virtual root when present
  bool virtual_root = false;
  std::vector<IterationOps> iterations;
  std::set<int> tops;
  friend bool operator==(const OperationScript&, const OperationScript&) = default;
};

struct ExtractResult {
  OperationScript script;
  bool covered = false;
  // Gold uniform ids of created nodes, in creation order; created_gold[k]
  // replays as id token_count + k.
  std::vector<int> created_gold;
  // Semantic nodes with no undirected path to any token; never creatable.
  std::vector<int> isolated;
};

class IsolatedComponent : public std::runtime_error {
 public:
  IsolatedComponent(std::string graph_id, std::vector<int> ids);
  const std::vector<int>& ids() const { return ids_; }

 private:
  std::vector<int> ids_;
};

class DanglingReference : public std::runtime_error {
 public:
  explicit DanglingReference(const std::string& msg) : std::runtime_error(msg) {}
};

class ScriptError : public std::runtime_error {
 public:
  explicit ScriptError(const std::string& msg) : std::runtime_error(msg) {}
};

// Number of distinct token nodes reachable from `id` along edge direction
// (anchor edges included); cycles terminate via a visited set.
int token_descendants(const UniformGraph& u, int id);
// The underlying sorted token-index list used for ordering ties.
std::vector<int> token_descendant_indices(const UniformGraph& u, int id);

// Traversal order induced by creation: token nodes by index first, then
// semantic nodes by creation time. `created` must list all token node ids
// first, left to right.
std::vector<int> node_order(const UniformGraph& u, const std::vector<int>& created);

// Throws IsolatedComponent when unreachable semantic nodes exist.
ExtractResult extract_script(const UniformGraph& u, int max_iterations);
// Same, but records unreachable nodes in `isolated` instead of throwing.
ExtractResult extract_script_lenient(const UniformGraph& u, int max_iterations);

// Deterministically rebuilds the uniform graph described by the script.
// DanglingReference for ops citing unknown ids, ScriptError for scripts
// violating the iteration invariants.
UniformGraph replay(const OperationScript& script);

// Cumulative created-node counts after each iteration.
std::vector<long> created_per_iteration(const OperationScript& script);

// True when `replayed` equals `gold` under the creation-order relabeling in
// `res` (labels, properties, edges, tops). On mismatch, fills `why`.
bool replay_matches_gold(const UniformGraph& gold, const ExtractResult& res,
                         const UniformGraph& replayed, std::string* why = nullptr);

struct CoverageOptions {
  // Drop isolated nodes from denominators instead of counting them as
  // permanently uncovered.
  bool exclude_isolated = false;
};

struct CoverageRow {
  std::vector<double> node_coverage;   // [i] = after iteration i+1
  std::vector<double> graph_coverage;
  long total_nodes = 0;
  long total_graphs = 0;
};

struct CoverageReport {
  int max_iterations = 0;
  std::map<Framework, CoverageRow> per_framework;
  CoverageRow overall;
  std::vector<std::string> warnings;
};

CoverageReport coverage(const std::vector<UniformGraph>& corpus, int max_iterations,
                        const CoverageOptions& opts = {});

// Table-shaped rendering of a coverage report (text or CSV).
std::string format_coverage(const CoverageReport& report, bool csv);

std::string serialize_script(const OperationScript& s, bool covered);
OperationScript parse_script_line(const std::string& json_text);

// Framework defaults for the inference iteration budget.
int default_iteration_budget(Framework f);

}  // namespace mrg

#endif

// MRP graph data model with JSON-lines reading and writing.
//
// Graphs are plain value types and are treated as immutable once built, so
// they can be shared read-only across worker threads. Property and attribute
// values travel as parallel "properties"/"values" arrays on the wire and as
// name/value pairs in memory. Unknown JSON fields are kept verbatim and
// re-emitted on serialization.
#ifndef MRG_GRAPH_HPP
#define MRG_GRAPH_HPP

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace mrg {

using ordered_json = nlohmann::ordered_json;

enum class Framework { dm, psd, eds, ucca, amr };

const char* framework_name(Framework f);
std::optional<Framework> framework_from_name(std::string_view name);
// dm/psd -> 0, eds/ucca -> 1, amr -> 2.
int framework_flavor(Framework f);

// Edge label reserved for anchoring edges in the uniform graph; corpus
// graphs must not use it.
inline constexpr const char* kAnchorLabel = "::anchor";

// Character span into Graph::input, in Unicode scalar-value offsets.
struct Anchor {
  int from = 0;
  int to = 0;
  friend bool operator==(const Anchor&, const Anchor&) = default;
  friend auto operator<=>(const Anchor&, const Anchor&) = default;
};

using Pairs = std::vector<std::pair<std::string, std::string>>;
using ExtraFields = std::vector<std::pair<std::string, ordered_json>>;

struct Node {
  int id = 0;
  std::optional<std::string> label;
  Pairs properties;
  std::vector<Anchor> anchors;
  ExtraFields extra;
  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  int source = 0;
  int target = 0;
  std::optional<std::string> label;
  Pairs attributes;
  ExtraFields extra;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Graph {
  std::string id;
  Framework framework = Framework::dm;
  int flavor = 0;
  std::string input;
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::set<int> tops;
  ExtraFields extra;

  bool is_top(int node_id) const { return tops.count(node_id) != 0; }
  const Node* find_node(int node_id) const;
  friend bool operator==(const Graph&, const Graph&) = default;
};

enum class ViolationCode {
  DuplicateNodeId,
  DanglingEdgeEndpoint,
  SelfLoop,
  DuplicateEdge,
  UnknownTop,
  InvalidAnchor,
  DuplicateProperty,
  DuplicateAttribute,
  FlavorMismatch,
  ReservedEdgeLabel,
};

const char* violation_code_name(ViolationCode code);

struct Violation {
  ViolationCode code;
  // Offending ids: node ids, or source/target for edge violations.
  std::vector<int> ids;
  std::string detail;
  std::string to_string() const;
};

// Thrown on malformed JSON; `byte_offset` points at the offending byte.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& msg, std::size_t byte_offset)
      : std::runtime_error(msg), byte_offset_(byte_offset) {}
  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

// Thrown when a well-formed JSON object violates the graph invariants.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string graph_id, std::vector<Violation> violations);
  const std::string& graph_id() const { return graph_id_; }
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::string graph_id_;
  std::vector<Violation> violations_;
};

// Empty result iff all Graph invariants hold.
std::vector<Violation> validate(const Graph& g);

// Parses one MRP JSON line. The returned graph always satisfies validate();
// FormatError on malformed JSON, ValidationError otherwise.
Graph parse_mrp_line(const std::string& json_text);

// One JSON line, no trailing newline. Emission is deterministic: fixed key
// order (id, label, properties, values, anchors for nodes; source, target,
// label, attributes, values for edges), empty optional fields omitted,
// tops sorted ascending. parse_mrp_line inverts it exactly.
std::string serialize_mrp(const Graph& g);

}  // namespace mrg

#endif

// The uniform graph: tokens become nodes and anchors become ordinary
// directed edges labeled "::anchor" (semantic node -> token node), so the
// five frameworks share one representation. uniformize/deuniformize are
// mutually inverse on graphs whose anchors are in canonical form, i.e. each
// anchor is a maximal run of whole tokens separated only by whitespace;
// deuniformize always reconstructs that form.
#ifndef MRG_UNIFORM_HPP
#define MRG_UNIFORM_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mrg/graph.hpp"
#include "mrg/tokenizer.hpp"

namespace mrg {

enum class UNodeKind { token, semantic };

struct UNode {
  int id = 0;
  UNodeKind kind = UNodeKind::semantic;
  std::optional<std::string> label;
  Pairs properties;
  std::optional<int> token_ref;  // set iff kind == token
  std::optional<int> orig_id;    // corpus node id, set by uniformize
  ExtraFields extra;
  friend bool operator==(const UNode&, const UNode&) = default;
};

struct UEdge {
  int source = 0;
  int target = 0;
  std::optional<std::string> label;
  Pairs attributes;
  ExtraFields extra;
  bool is_anchor() const { return label && *label == kAnchorLabel; }
  friend bool operator==(const UEdge&, const UEdge&) = default;
};

struct UniformGraph {
  std::string id;
  Framework framework = Framework::dm;
  std::string input;
  std::vector<Token> tokens;
  // Token nodes first (node id == token index), then semantic nodes.
  std::vector<UNode> nodes;
  std::vector<UEdge> edges;
  std::set<int> tops;
  // When set, token 0 is a synthetic empty-span root that unanchored
  // semantic nodes attach to.
  bool virtual_root = false;
  ExtraFields extra;

  int token_count() const { return static_cast<int>(tokens.size()); }
  int semantic_count() const { return static_cast<int>(nodes.size()) - token_count(); }
  const UNode* find(int id) const;
  friend bool operator==(const UniformGraph&, const UniformGraph&) = default;
};

struct UniformOptions {
  // Attach anchor-less semantic nodes to a synthetic root token. When on,
  // the root token is always prepended so token indices are stable.
  bool allow_unanchored = false;
};

// Raised when an anchor crosses or splits a token boundary, or covers no
// token at all: the tokenizer and the data disagree.
class AnchorMismatch : public std::runtime_error {
 public:
  AnchorMismatch(int node_id, Anchor anchor, const std::string& msg)
      : std::runtime_error(msg), node_id_(node_id), anchor_(anchor) {}
  int node_id() const { return node_id_; }
  Anchor anchor() const { return anchor_; }

 private:
  int node_id_;
  Anchor anchor_;
};

// Precondition: g valid, and every anchor of every node is a union of whole
// token spans (whitespace-only gaps allowed between them). Semantic nodes
// without anchors are legal and simply get no anchor edges (or attach to the
// virtual root under allow_unanchored).
UniformGraph uniformize(const Graph& g, const std::vector<Token>& tokens,
                        const UniformOptions& opts = {});

Graph deuniformize(const UniformGraph& u);

// Structural invariants of the uniform graph; empty iff well-formed.
std::vector<std::string> validate_uniform(const UniformGraph& u);

// Internal JSON-lines format (MRP-shaped, plus "kind"/"token"/"orig" node
// markers and "::anchor" edges).
std::string serialize_uniform(const UniformGraph& u);
UniformGraph parse_uniform_line(const std::string& json_text);

// True when the line looks like the uniform format rather than plain MRP.
bool looks_like_uniform(const std::string& json_text);

}  // namespace mrg

#endif

// Decoder decision structure over the uniform graph: a three-way node
// decision (parent/child/nothing) per existing node per iteration, node
// label and per-property value classifiers over encoding rules, pairwise
// edge existence plus edge label/attribute classifiers, and a binary top
// classifier over final nodes. Every iteration owns its own classifier set.
//
// The feature representation is pluggable through DecodePolicy; the default
// baseline is a most-frequent-class counter over a backoff chain
// (full feature key -> attaching token form -> POS -> global majority),
// which is deterministic and training is pure counting. Training and
// parsing drive the identical graph-state machinery, so a policy that
// answers from a gold operation script reproduces the gold graph exactly.
#ifndef MRG_MODEL_HPP
#define MRG_MODEL_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mrg/encoding.hpp"
#include "mrg/graph.hpp"
#include "mrg/oracle.hpp"
#include "mrg/tokenizer.hpp"
#include "mrg/uniform.hpp"

namespace mrg {

// Reserved class for "no label" / "no such property" / "no attribute".
// Serialized rules always start with 'a' or 'r', so it cannot collide.
inline constexpr const char* kNoneClass = "-";
inline constexpr int kBundleVersion = 1;
// Hard cap for `auto` iteration mode so a pathological model terminates.
inline constexpr int kAutoIterationCap = 25;

enum class DecisionKind { parent, child, nothing };

// ---------------------------------------------------------------------------
// Companion analyses (optional lemma/POS annotations).
//
// Plain text format, one block per sentence:
//   #<sentence id>
//   form<TAB>lemma<TAB>upos
//   ...
// separated by blank lines.
struct CompanionToken {
  std::string form;
  std::string lemma;
  std::string upos;
};
using CompanionMap = std::map<std::string, std::vector<CompanionToken>>;

CompanionMap read_companion(std::istream& in);

// ---------------------------------------------------------------------------
// Counting classifier with a backoff chain.

class CountingClassifier {
 public:
  struct Prediction {
    std::string cls;
    double score = 0.0;
    bool known = false;
  };

  // `keys` go from most specific to most general; the global majority is an
  // implicit final level.
  void add(const std::vector<std::string>& keys, const std::string& cls);
  // First backoff level that has seen the key answers with its majority
  // class; ties pick the lexicographically smallest class.
  Prediction predict(const std::vector<std::string>& keys) const;
  // Relative frequency of `cls` at the first matching level.
  double probability(const std::vector<std::string>& keys, const std::string& cls) const;

  bool empty() const { return examples_ == 0; }
  long example_count() const { return examples_; }

  ordered_json to_json() const;
  static CountingClassifier from_json(const ordered_json& j);
  friend bool operator==(const CountingClassifier&, const CountingClassifier&) = default;

 private:
  using Counts = std::map<std::string, long>;
  std::vector<std::map<std::string, Counts>> levels_;
  Counts global_;
  long examples_ = 0;
};

// ---------------------------------------------------------------------------
// Configuration and the trained bundle.

struct TrainConfig {
  Framework framework = Framework::dm;
  std::optional<TokenizerMode> tokenizer_mode;   // default: ucca mode for UCCA
  int iterations = 0;                            // 0 = framework default budget
  bool auto_iterations = false;                  // stop when AddNodes creates nothing
  bool rule2b_word_run = true;
  std::optional<bool> allow_unanchored;          // default: true for AMR
  bool force_top = true;
  std::uint64_t seed = 1;  // reserved for stochastic classifiers; the
                           // counting baseline is deterministic regardless

  TokenizerMode resolved_mode() const;
  TokenizerOptions tokenizer_options() const;
  int resolved_iterations() const;
  bool resolved_allow_unanchored() const;

  ordered_json to_json() const;
  static TrainConfig from_json(const ordered_json& j);
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct IterationClassifiers {
  CountingClassifier decision;
  CountingClassifier node_label;
  std::map<std::string, CountingClassifier> node_property;
  CountingClassifier edge_exist;
  CountingClassifier edge_label;
  std::map<std::string, CountingClassifier> edge_attribute;
  friend bool operator==(const IterationClassifiers&, const IterationClassifiers&) = default;
};

struct ModelBundle {
  TrainConfig config;
  bool always_has_top = false;  // learned: every training graph had a top
  RuleInventory label_inventory;
  std::map<std::string, RuleInventory> property_inventories;
  std::vector<std::string> attribute_names;
  std::vector<IterationClassifiers> iterations;  // [0] is iteration 1
  CountingClassifier top;
};

bool operator==(const RuleInventory& a, const RuleInventory& b);
bool operator==(const ModelBundle& a, const ModelBundle& b);

class VersionMismatch : public std::runtime_error {
 public:
  explicit VersionMismatch(const std::string& msg) : std::runtime_error(msg) {}
};
class CorruptBundle : public std::runtime_error {
 public:
  explicit CorruptBundle(const std::string& msg) : std::runtime_error(msg) {}
};

// Versioned JSON container; load_bundle(save_bundle(b)) == b.
std::string save_bundle(const ModelBundle& b);
ModelBundle load_bundle(const std::string& bytes);

// ---------------------------------------------------------------------------
// Training examples.

class ScriptMismatch : public std::runtime_error {
 public:
  explicit ScriptMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

struct NodeDecisionExample {
  int iteration = 0;
  std::vector<std::string> keys;  // decision backoff chain
  DecisionKind decision = DecisionKind::nothing;
  // Filled when decision != nothing:
  std::vector<std::string> value_keys;  // label/property backoff chain
  std::vector<std::string> enc_tokens;  // token list the encodings draw from
  std::optional<std::string> label;
  Pairs properties;
};

struct EdgeCandidateExample {
  int iteration = 0;
  std::vector<std::string> keys;
  bool exists = false;
  bool implied = false;  // created by AddNodes; kept regardless of prediction
  std::optional<std::string> label;
  Pairs attributes;
};

struct TopExample {
  std::vector<std::string> keys;
  bool top = false;
};

struct TrainingExamples {
  std::vector<NodeDecisionExample> decisions;
  std::vector<EdgeCandidateExample> edges;
  std::vector<TopExample> tops;
};

// Replays the script against the gold graph, emitting one decision example
// per existing node per iteration (class `nothing` when the oracle created
// no node from it), label/property payloads only for created nodes,
// edge-existence examples for every candidate pair (ordered, at least one
// endpoint new, no self-pairs, pair not already connected), label/attribute
// payloads only for gold edges, and a top example per semantic node.
// Throws ScriptMismatch when the script is inconsistent with the gold graph.
TrainingExamples make_training_examples(const ExtractResult& res, const UniformGraph& gold,
                                        const std::vector<CompanionToken>* companion = nullptr);

// ---------------------------------------------------------------------------
// Training.

struct TrainStats {
  long graphs_total = 0;
  long graphs_used = 0;
  long graphs_uncovered = 0;  // used, but not fully covered within the budget
  std::vector<std::pair<std::string, std::string>> skipped;  // (graph id, reason)
  std::map<std::string, long> examples;  // per decoder family
  double node_coverage_at_budget = 0.0;
  double graph_coverage_at_budget = 0.0;
  std::string summary() const;
};

struct TrainResult {
  ModelBundle bundle;
  TrainStats stats;
};

// Deterministic end-to-end training: tokenize, uniformize, extract scripts,
// build rule inventories, count classifier statistics. Graphs failing the
// anchoring precondition or containing isolated nodes are reported in
// stats.skipped, never fatal.
TrainResult train(const std::vector<Graph>& corpus, const CompanionMap* companion,
                  const TrainConfig& config);

// ---------------------------------------------------------------------------
// Parsing.

struct NodeDecision {
  DecisionKind kind = DecisionKind::nothing;
  std::optional<std::string> label;
  Pairs properties;
};

struct EdgeDecision {
  bool add = false;
  std::optional<std::string> label;
  Pairs attributes;
};

// Answers the decoder questions the parse loop asks. Implementations: the
// trained bundle, or a gold operation script (oracle-consistency checks).
class DecodePolicy {
 public:
  virtual ~DecodePolicy() = default;
  virtual NodeDecision decide_node(int iteration, int origin,
                                   const std::vector<std::string>& decision_keys,
                                   const std::vector<std::string>& value_keys,
                                   const std::vector<std::string>& enc_tokens) = 0;
  // For implied edges only label/attributes are consulted; the edge stays.
  virtual EdgeDecision decide_edge(int iteration, int source, int target, bool implied,
                                   const std::vector<std::string>& keys) = 0;
  virtual bool decide_top(int node_id, const std::vector<std::string>& keys) = 0;
  // Score used when force_top needs an argmax fallback.
  virtual double top_score(int node_id, const std::vector<std::string>& keys) = 0;
};

struct ParseOptions {
  Framework framework = Framework::dm;
  bool allow_unanchored = false;
  int iterations = 1;
  bool auto_iterations = false;
  bool force_top = false;
};

struct ParseTrace {
  std::vector<int> created_per_iteration;
  int iterations_run = 0;
};

// Core loop: token nodes -> AddNodes/AddEdges iterations -> tops ->
// deuniformize. Pure given the policy; an empty parse is a legal output.
Graph parse_tokens(const std::string& id, const std::string& input,
                   const std::vector<Token>& tokens, DecodePolicy& policy,
                   const ParseOptions& opts,
                   const std::vector<CompanionToken>* companion = nullptr,
                   ParseTrace* trace = nullptr);

Graph parse_with_bundle(const ModelBundle& bundle, const std::string& id,
                        const std::string& sentence,
                        const std::vector<CompanionToken>* companion = nullptr,
                        ParseTrace* trace = nullptr);

// Gold-oracle decoding: answers come from the script; reproduces the graph
// the script replays to.
Graph parse_with_script(const OperationScript& script, ParseTrace* trace = nullptr);

}  // namespace mrg

#endif

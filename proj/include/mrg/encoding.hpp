// Absolute/relative encoding of node labels and property values as
// classification rules. A relative rule rewrites anchored tokens through
// character edit scripts: per value word, a common root (longest common
// substring, leftmost in the token then in the value) is located in the
// chosen token, and minimal edit scripts rewrite the token's prefix and
// suffix around it. A value word that shares no character with any token
// makes the whole rule absolute.
//
// Scripts serialize to compact printable strings (e.g. "r|0=||d2" keeps the
// root of token 0 and deletes two suffix characters) which double as
// classifier class names. Serialization is canonical: deriving the same
// transformation always yields the same string, adjacent ops of one kind are
// merged, and no script for the same (token, word, root) triple serializes
// shorter than the derived one.
#ifndef MRG_ENCODING_HPP
#define MRG_ENCODING_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace mrg {

enum class EditOpKind { keep, del, ins, sub };

struct EditOp {
  EditOpKind kind = EditOpKind::keep;
  int count = 0;     // keep/del: run length
  std::string text;  // ins: emitted text; sub: replacement (consumes its scalar length)
  friend bool operator==(const EditOp&, const EditOp&) = default;
};

enum class Casing { keep, lower, upper_first };

struct EditScript {
  Casing casing = Casing::keep;  // applied to the token before matching
  std::vector<EditOp> prefix_ops;
  std::vector<EditOp> suffix_ops;
  friend bool operator==(const EditScript&, const EditScript&) = default;
};

struct RulePart {
  int token_index = 0;
  EditScript script;
  friend bool operator==(const RulePart&, const RulePart&) = default;
};

struct EncodingRule {
  bool absolute = true;
  std::string value;            // absolute only
  std::vector<RulePart> parts;  // relative only; applied words joined by " "
  friend bool operator==(const EncodingRule&, const EncodingRule&) = default;
};

class SelectorOutOfRange : public std::runtime_error {
 public:
  SelectorOutOfRange(int selector, int token_count)
      : std::runtime_error("rule selects token " + std::to_string(selector) + " but only " +
                           std::to_string(token_count) + " token(s) are available"),
        selector_(selector),
        token_count_(token_count) {}
  int selector() const { return selector_; }

 private:
  int selector_;
  int token_count_;
};

class RuleInapplicable : public std::runtime_error {
 public:
  explicit RuleInapplicable(const std::string& msg) : std::runtime_error(msg) {}
};

class RuleParseError : public std::runtime_error {
 public:
  explicit RuleParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Derives the rule generating `value` from the token forms. Each whitespace
// word of the value is encoded independently against the token giving the
// shortest serialized part, ties to the earliest token. Pure and
// deterministic; apply_rule(tokens, derive_rule(tokens, value)) == value.
EncodingRule derive_rule(const std::vector<std::string>& tokens, const std::string& value);

// Applies a rule. Throws SelectorOutOfRange for selectors beyond the token
// list and RuleInapplicable when a script consumes more characters than the
// selected token has; never silently truncates.
std::string apply_rule(const std::vector<std::string>& tokens, const EncodingRule& rule);

std::string serialize_rule(const EncodingRule& rule);
EncodingRule parse_rule(const std::string& text);

// Building blocks, exposed for verification.
struct RootMatch {
  int token_start = 0;
  int value_start = 0;
  int length = 0;  // 0: no common character
};
RootMatch common_root(const std::u32string& token, const std::u32string& word);
std::vector<EditOp> minimal_ops(const std::u32string& source, const std::u32string& target);
std::string serialize_ops(const std::vector<EditOp>& ops);
std::u32string apply_casing(Casing c, const std::u32string& token);

enum class EncodingMode { absolute, relative };

struct RuleInventory {
  std::string property;  // "label" or a property name
  EncodingMode mode = EncodingMode::absolute;
  std::vector<std::string> classes;  // sorted serialized rules under `mode`
  long absolute_count = 0;
  long relative_count = 0;
};

// absolute wins ties.
EncodingMode choose_mode(long absolute_count, long relative_count);

using EncodingItem = std::pair<std::vector<std::string>, std::string>;  // (tokens, value)

RuleInventory build_inventory(const std::string& property, const std::vector<EncodingItem>& items);

// The class string of one item under the inventory's mode.
std::string classify(const RuleInventory& inv, const std::vector<std::string>& tokens,
                     const std::string& value);

nlohmann::ordered_json inventory_to_json(const RuleInventory& inv);
RuleInventory inventory_from_json(const nlohmann::ordered_json& j);

}  // namespace mrg

#endif

#include "mrg/encoding.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <set>
#include <sstream>

#include "mrg/utf8.hpp"

namespace mrg {

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 4;

int digits(int n) {
  int d = 1;
  while (n >= 10) {
    n /= 10;
    ++d;
  }
  return d;
}

bool needs_escape(char c) { return c == '\\' || c == ',' || c == ';' || c == '|'; }

void append_escaped(std::string& out, std::string_view raw) {
  for (char c : raw) {
    if (needs_escape(c)) out.push_back('\\');
    out.push_back(c);
  }
}

int escaped_cost(char32_t cp) {
  std::string tmp;
  append_utf8(tmp, cp);
  int cost = static_cast<int>(tmp.size());
  if (tmp.size() == 1 && needs_escape(tmp[0])) ++cost;
  return cost;
}

std::u32string to_u32(std::string_view s) {
  const auto cps = decode_utf8(s);
  return std::u32string(cps.begin(), cps.end());
}

std::string to_u8(const std::u32string& s) {
  std::string out;
  for (char32_t c : s) append_utf8(out, c);
  return out;
}

// Scalar count consumed from the source by one op.
int op_consumed(const EditOp& op) {
  switch (op.kind) {
    case EditOpKind::keep:
    case EditOpKind::del: return op.count;
    case EditOpKind::ins: return 0;
    case EditOpKind::sub: return static_cast<int>(scalar_length(op.text));
  }
  return 0;
}

int ops_consumed(const std::vector<EditOp>& ops) {
  int total = 0;
  for (const auto& op : ops) total += op_consumed(op);
  return total;
}

}  // namespace

std::u32string apply_casing(Casing c, const std::u32string& token) {
  std::u32string out = token;
  switch (c) {
    case Casing::keep: break;
    case Casing::lower:
      for (auto& cp : out) cp = to_lower_cp(cp);
      break;
    case Casing::upper_first:
      for (auto& cp : out) cp = to_lower_cp(cp);
      if (!out.empty()) out[0] = to_upper_cp(out[0]);
      break;
  }
  return out;
}

RootMatch common_root(const std::u32string& token, const std::u32string& word) {
  RootMatch best;
  const int n = static_cast<int>(token.size());
  const int m = static_cast<int>(word.size());
  std::vector<int> prev(m + 1, 0), cur(m + 1, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      if (token[i] != word[j]) {
        cur[j + 1] = 0;
        continue;
      }
      const int run = prev[j] + 1;
      cur[j + 1] = run;
      const int ts = i - run + 1;
      const int vs = j - run + 1;
      if (run > best.length ||
          (run == best.length &&
           (ts < best.token_start || (ts == best.token_start && vs < best.value_start)))) {
        best = {ts, vs, run};
      }
    }
    std::swap(prev, cur);
    std::fill(cur.begin(), cur.end(), 0);
  }
  return best;
}

std::vector<EditOp> minimal_ops(const std::u32string& source, const std::u32string& target) {
  const int n = static_cast<int>(source.size());
  const int m = static_cast<int>(target.size());
  if (n == 0 && m == 0) return {};

  // Serialized cost of target[a..b) inside an insert/substitute body.
  std::vector<int> esc_prefix(m + 1, 0);
  for (int j = 0; j < m; ++j) esc_prefix[j + 1] = esc_prefix[j] + escaped_cost(target[j]);
  auto esc_sum = [&](int a, int b) { return esc_prefix[b] - esc_prefix[a]; };

  // State: (consumed i of source, produced j of target, last op kind);
  // last: 0 none, 1 keep, 2 delete, 3 insert, 4 substitute. Two adjacent ops
  // never share a kind, which is exactly the canonical merged form.
  constexpr int kLast = 5;
  const int cells = (n + 1) * (m + 1) * kLast;
  std::vector<int> cost(cells, kInf);
  struct Back {
    int8_t prev_last = -1;
    int8_t kind = -1;
    int run = 0;
  };
  std::vector<Back> back(cells);
  auto idx = [&](int i, int j, int last) { return (i * (m + 1) + j) * kLast + last; };
  cost[idx(0, 0, 0)] = 0;

  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= m; ++j) {
      for (int last = 0; last < kLast; ++last) {
        const int c0 = cost[idx(i, j, last)];
        if (c0 >= kInf) continue;
        const int sep = last == 0 ? 0 : 1;
        auto relax = [&](int ni, int nj, int kind, int run, int add) {
          const int id = idx(ni, nj, kind);
          if (c0 + add < cost[id]) {
            cost[id] = c0 + add;
            back[id] = {static_cast<int8_t>(last), static_cast<int8_t>(kind), run};
          }
        };
        if (last != 1) {
          int run = 0;
          while (i + run < n && j + run < m && source[i + run] == target[j + run]) {
            ++run;
            relax(i + run, j + run, 1, run, sep + 1 + digits(run));
          }
        }
        if (last != 2) {
          for (int run = 1; i + run <= n; ++run) {
            relax(i + run, j, 2, run, sep + 1 + digits(run));
          }
        }
        if (last != 3) {
          for (int run = 1; j + run <= m; ++run) {
            relax(i, j + run, 3, run, sep + 1 + esc_sum(j, j + run));
          }
        }
        if (last != 4) {
          for (int run = 1; i + run <= n && j + run <= m; ++run) {
            relax(i + run, j + run, 4, run, sep + 1 + esc_sum(j, j + run));
          }
        }
      }
    }
  }

  int best_last = -1;
  int best_cost = kInf;
  for (int last = 0; last < kLast; ++last) {
    if (cost[idx(n, m, last)] < best_cost) {
      best_cost = cost[idx(n, m, last)];
      best_last = last;
    }
  }
  std::vector<EditOp> ops;
  int i = n, j = m, last = best_last;
  while (!(i == 0 && j == 0 && last == 0)) {
    const Back& b = back[idx(i, j, last)];
    EditOp op;
    switch (b.kind) {
      case 1:
        op = {EditOpKind::keep, b.run, ""};
        i -= b.run;
        j -= b.run;
        break;
      case 2:
        op = {EditOpKind::del, b.run, ""};
        i -= b.run;
        break;
      case 3:
        op = {EditOpKind::ins, 0, to_u8(target.substr(j - b.run, b.run))};
        j -= b.run;
        break;
      case 4:
        op = {EditOpKind::sub, 0, to_u8(target.substr(j - b.run, b.run))};
        i -= b.run;
        j -= b.run;
        break;
      default: throw RuleParseError("edit-script search lost its way");
    }
    ops.push_back(std::move(op));
    last = b.prev_last;
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

std::string serialize_ops(const std::vector<EditOp>& ops) {
  std::string out;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    if (k) out.push_back(',');
    switch (ops[k].kind) {
      case EditOpKind::keep:
        out.push_back('k');
        out += std::to_string(ops[k].count);
        break;
      case EditOpKind::del:
        out.push_back('d');
        out += std::to_string(ops[k].count);
        break;
      case EditOpKind::ins:
        out.push_back('i');
        append_escaped(out, ops[k].text);
        break;
      case EditOpKind::sub:
        out.push_back('s');
        append_escaped(out, ops[k].text);
        break;
    }
  }
  return out;
}

namespace {

char casing_char(Casing c) {
  switch (c) {
    case Casing::keep: return '=';
    case Casing::lower: return '_';
    case Casing::upper_first: return '^';
  }
  return '=';
}

std::string serialize_part(const RulePart& p) {
  std::string out = std::to_string(p.token_index);
  out.push_back(casing_char(p.script.casing));
  out.push_back('|');
  out += serialize_ops(p.script.prefix_ops);
  out.push_back('|');
  out += serialize_ops(p.script.suffix_ops);
  return out;
}

std::vector<std::u32string> split_words(const std::u32string& value) {
  std::vector<std::u32string> words;
  std::u32string cur;
  for (char32_t c : value) {
    if (is_space_cp(c)) {
      if (!cur.empty()) words.push_back(std::exchange(cur, {}));
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) words.push_back(cur);
  return words;
}

std::optional<RulePart> best_part(const std::vector<std::u32string>& tokens,
                                  const std::u32string& word) {
  std::optional<RulePart> best;
  std::size_t best_len = 0;
  for (std::size_t ti = 0; ti < tokens.size(); ++ti) {
    for (Casing casing : {Casing::keep, Casing::lower, Casing::upper_first}) {
      const auto cased = apply_casing(casing, tokens[ti]);
      const auto root = common_root(cased, word);
      if (root.length == 0) continue;
      RulePart part;
      part.token_index = static_cast<int>(ti);
      part.script.casing = casing;
      part.script.prefix_ops =
          minimal_ops(cased.substr(0, root.token_start), word.substr(0, root.value_start));
      part.script.suffix_ops = minimal_ops(cased.substr(root.token_start + root.length),
                                           word.substr(root.value_start + root.length));
      const auto len = serialize_part(part).size();
      if (!best || len < best_len) {
        best = std::move(part);
        best_len = len;
      }
    }
  }
  return best;
}

std::u32string apply_ops(const std::vector<EditOp>& ops, const std::u32string& src) {
  std::u32string out;
  std::size_t cursor = 0;
  for (const auto& op : ops) {
    switch (op.kind) {
      case EditOpKind::keep:
        if (cursor + op.count > src.size()) throw RuleInapplicable("keep past end of token");
        out += src.substr(cursor, op.count);
        cursor += op.count;
        break;
      case EditOpKind::del:
        if (cursor + op.count > src.size()) throw RuleInapplicable("delete past end of token");
        cursor += op.count;
        break;
      case EditOpKind::ins: out += to_u32(op.text); break;
      case EditOpKind::sub: {
        const auto rep = to_u32(op.text);
        if (cursor + rep.size() > src.size()) {
          throw RuleInapplicable("substitute past end of token");
        }
        out += rep;
        cursor += rep.size();
        break;
      }
    }
  }
  if (cursor != src.size()) throw RuleInapplicable("script consumed a partial affix");
  return out;
}

}  // namespace

EncodingRule derive_rule(const std::vector<std::string>& tokens, const std::string& value) {
  EncodingRule absolute;
  absolute.absolute = true;
  absolute.value = value;

  const auto value32 = to_u32(value);
  const auto words = split_words(value32);
  if (tokens.empty() || words.empty()) return absolute;
  // Values with irregular whitespace cannot be rebuilt from space-joined
  // words; keep them absolute.
  std::u32string joined;
  for (std::size_t k = 0; k < words.size(); ++k) {
    if (k) joined.push_back(U' ');
    joined += words[k];
  }
  if (joined != value32) return absolute;

  std::vector<std::u32string> tokens32;
  tokens32.reserve(tokens.size());
  for (const auto& t : tokens) tokens32.push_back(to_u32(t));

  EncodingRule rule;
  rule.absolute = false;
  for (const auto& w : words) {
    auto part = best_part(tokens32, w);
    if (!part) return absolute;  // no common character: irregular
    rule.parts.push_back(std::move(*part));
  }
  return rule;
}

std::string apply_rule(const std::vector<std::string>& tokens, const EncodingRule& rule) {
  if (rule.absolute) return rule.value;
  std::u32string out;
  for (std::size_t k = 0; k < rule.parts.size(); ++k) {
    const RulePart& part = rule.parts[k];
    if (part.token_index < 0 || part.token_index >= static_cast<int>(tokens.size())) {
      throw SelectorOutOfRange(part.token_index, static_cast<int>(tokens.size()));
    }
    const auto cased = apply_casing(part.script.casing, to_u32(tokens[part.token_index]));
    const int p = ops_consumed(part.script.prefix_ops);
    const int s = ops_consumed(part.script.suffix_ops);
    if (p + s > static_cast<int>(cased.size())) {
      throw RuleInapplicable("scripts consume more characters than the token has");
    }
    if (k) out.push_back(U' ');
    out += apply_ops(part.script.prefix_ops, cased.substr(0, p));
    out += cased.substr(p, cased.size() - p - s);
    out += apply_ops(part.script.suffix_ops, cased.substr(cased.size() - s));
  }
  return to_u8(out);
}

std::string serialize_rule(const EncodingRule& rule) {
  if (rule.absolute) {
    std::string out = "a|";
    append_escaped(out, rule.value);
    return out;
  }
  std::string out = "r|";
  for (std::size_t k = 0; k < rule.parts.size(); ++k) {
    if (k) out.push_back(';');
    out += serialize_part(rule.parts[k]);
  }
  return out;
}

namespace {

struct RuleCursor {
  const std::string& text;
  std::size_t pos = 0;

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  // Escaped content up to an unescaped delimiter (not consumed).
  std::string read_text() {
    std::string out;
    while (!done()) {
      const char c = text[pos];
      if (c == '\\' && pos + 1 < text.size()) {
        out.push_back(text[pos + 1]);
        pos += 2;
        continue;
      }
      if (c == ',' || c == ';' || c == '|') break;
      out.push_back(c);
      ++pos;
    }
    return out;
  }

  int read_int() {
    const std::size_t start = pos;
    while (!done() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == start) throw RuleParseError("expected a number in rule: " + text);
    return std::stoi(text.substr(start, pos - start));
  }

  void expect(char c) {
    if (done() || text[pos] != c) {
      throw RuleParseError("malformed rule near offset " + std::to_string(pos) + ": " + text);
    }
    ++pos;
  }
};

std::vector<EditOp> parse_ops(RuleCursor& cur) {
  std::vector<EditOp> ops;
  while (!cur.done() && cur.peek() != '|' && cur.peek() != ';') {
    if (!ops.empty()) cur.expect(',');
    EditOp op;
    const char kind = cur.peek();
    ++cur.pos;
    switch (kind) {
      case 'k':
        op.kind = EditOpKind::keep;
        op.count = cur.read_int();
        break;
      case 'd':
        op.kind = EditOpKind::del;
        op.count = cur.read_int();
        break;
      case 'i':
        op.kind = EditOpKind::ins;
        op.text = cur.read_text();
        break;
      case 's':
        op.kind = EditOpKind::sub;
        op.text = cur.read_text();
        break;
      default: throw RuleParseError(std::string("unknown edit op '") + kind + "'");
    }
    ops.push_back(std::move(op));
  }
  return ops;
}

}  // namespace

EncodingRule parse_rule(const std::string& text) {
  RuleCursor cur{text};
  if (cur.done()) throw RuleParseError("empty rule");
  const char head = cur.peek();
  ++cur.pos;
  cur.expect('|');
  EncodingRule rule;
  if (head == 'a') {
    rule.absolute = true;
    rule.value = cur.read_text();
    if (!cur.done()) throw RuleParseError("trailing content in absolute rule: " + text);
    return rule;
  }
  if (head != 'r') throw RuleParseError("rule must start with 'a' or 'r': " + text);
  rule.absolute = false;
  while (true) {
    RulePart part;
    part.token_index = cur.read_int();
    if (cur.done()) throw RuleParseError("truncated rule part: " + text);
    switch (cur.peek()) {
      case '=': part.script.casing = Casing::keep; break;
      case '_': part.script.casing = Casing::lower; break;
      case '^': part.script.casing = Casing::upper_first; break;
      default: throw RuleParseError("unknown casing flag in rule: " + text);
    }
    ++cur.pos;
    cur.expect('|');
    part.script.prefix_ops = parse_ops(cur);
    cur.expect('|');
    part.script.suffix_ops = parse_ops(cur);
    rule.parts.push_back(std::move(part));
    if (cur.done()) break;
    cur.expect(';');
  }
  return rule;
}

EncodingMode choose_mode(long absolute_count, long relative_count) {
  return absolute_count <= relative_count ? EncodingMode::absolute : EncodingMode::relative;
}

RuleInventory build_inventory(const std::string& property,
                              const std::vector<EncodingItem>& items) {
  RuleInventory inv;
  inv.property = property;
  std::set<std::string> absolute, relative;
  for (const auto& [tokens, value] : items) {
    EncodingRule abs;
    abs.absolute = true;
    abs.value = value;
    absolute.insert(serialize_rule(abs));
    relative.insert(serialize_rule(derive_rule(tokens, value)));
  }
  inv.absolute_count = static_cast<long>(absolute.size());
  inv.relative_count = static_cast<long>(relative.size());
  inv.mode = choose_mode(inv.absolute_count, inv.relative_count);
  const auto& chosen = inv.mode == EncodingMode::absolute ? absolute : relative;
  inv.classes.assign(chosen.begin(), chosen.end());
  return inv;
}

std::string classify(const RuleInventory& inv, const std::vector<std::string>& tokens,
                     const std::string& value) {
  if (inv.mode == EncodingMode::absolute) {
    EncodingRule abs;
    abs.absolute = true;
    abs.value = value;
    return serialize_rule(abs);
  }
  return serialize_rule(derive_rule(tokens, value));
}

nlohmann::ordered_json inventory_to_json(const RuleInventory& inv) {
  nlohmann::ordered_json j;
  j["property"] = inv.property;
  j["mode"] = inv.mode == EncodingMode::absolute ? "absolute" : "relative";
  j["absolute_count"] = inv.absolute_count;
  j["relative_count"] = inv.relative_count;
  j["classes"] = inv.classes;
  return j;
}

RuleInventory inventory_from_json(const nlohmann::ordered_json& j) {
  RuleInventory inv;
  inv.property = j.at("property").get<std::string>();
  inv.mode = j.at("mode").get<std::string>() == "relative" ? EncodingMode::relative
                                                           : EncodingMode::absolute;
  inv.absolute_count = j.at("absolute_count").get<long>();
  inv.relative_count = j.at("relative_count").get<long>();
  inv.classes = j.at("classes").get<std::vector<std::string>>();
  return inv;
}

}  // namespace mrg

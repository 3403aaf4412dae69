#include "mrg/tokenizer.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <string_view>

#include "mrg/utf8.hpp"

namespace mrg {

namespace {

struct Contraction {
  std::string_view word;
  int split;  // first piece length
};

constexpr std::array<Contraction, 21> kContractions{{
    {"wouldn't", 5}, {"couldn't", 5}, {"can't", 2},   {"isn't", 2},
    {"aren't", 3},   {"ain't", 2},    {"wasn't", 3},  {"weren't", 4},
    {"don't", 2},    {"doesn't", 4},  {"didn't", 3},  {"shouldn't", 6},
    {"haven't", 4},  {"hasn't", 3},   {"hadn't", 3},  {"won't", 2},
    {"mightn't", 5}, {"needn't", 4},  {"cannot", 3},  {"wanna", 3},
    {"gotta", 3},
}};

constexpr std::array<std::string_view, 7> kClitics{
    "n't", "'s", "'d", "'m", "'re", "'ve", "'ll"};

struct Scanner {
  const std::vector<char32_t>& cps;
  const std::vector<std::size_t>& bytes;
  std::string_view input;
  TokenizerOptions opts;
  int n;

  bool word_at(int p) const { return p < n && is_word_cp(cps[p]); }
  bool digit_at(int p) const { return p < n && is_digit_cp(cps[p]); }
  bool char_at(int p, char32_t c) const { return p < n && cps[p] == c; }

  int word_run(int p) const {
    int q = p;
    while (word_at(q)) ++q;
    return q - p;
  }
  int digit_run(int p) const {
    int q = p;
    while (digit_at(q)) ++q;
    return q - p;
  }
  int char_run(int p, char32_t c) const {
    int q = p;
    while (char_at(q, c)) ++q;
    return q - p;
  }

  // Rule 5: whole contraction word, case-insensitive first letter.
  bool match_rule5(int i, int* split, int* len) const {
    for (const auto& c : kContractions) {
      const int m = static_cast<int>(c.word.size());
      if (i + m > n) continue;
      if (to_lower_cp(cps[i]) != static_cast<char32_t>(c.word[0])) continue;
      bool ok = true;
      for (int k = 1; k < m; ++k) {
        if (cps[i + k] != static_cast<char32_t>(c.word[k])) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      if (word_at(i + m)) continue;  // must end the word
      *split = c.split;
      *len = m;
      return true;
    }
    return false;
  }

  int match_rule4(int i) const {
    int best = 0;
    for (const auto clitic : kClitics) {
      const int m = static_cast<int>(clitic.size());
      if (i + m > n || m <= best) continue;
      bool ok = true;
      for (int k = 0; k < m; ++k) {
        if (cps[i + k] != static_cast<char32_t>(clitic[k])) {
          ok = false;
          break;
        }
      }
      if (ok) best = m;
    }
    return best;
  }

  int match_rule3(int i) const {
    const char32_t c = cps[i];
    if (c == U'-') {
      const int r = char_run(i, c);
      return r >= 2 ? r : 0;
    }
    if (c == U'`' || c == U'\'' || c == U'.' || c == U'!') return char_run(i, c);
    return 0;
  }

  int match_rule2a(int i) const {
    const int r = word_run(i);
    if (r == 0) return 0;
    return r + (char_at(i + r, U'$') ? 1 : 0);
  }

  // Longest match of \w(\w-[^-\s]|&|/|'S\w|'[A-RT-Z]|[.](?=.*\w)\w|\d)*[$]?,
  // with the leading \w read as \w+ when rule2b_word_run is on. Computed as a
  // reachability closure over group-boundary positions, which yields the
  // longest overall match of the pattern.
  int match_rule2b_word(int i) const {
    if (!word_at(i)) return 0;
    std::vector<char> reach(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> work;
    const int lead = opts.rule2b_word_run ? word_run(i) : 1;
    for (int k = 1; k <= lead; ++k) {
      reach[i + k] = 1;
      work.push_back(i + k);
    }
    while (!work.empty()) {
      const int p = work.back();
      work.pop_back();
      auto add = [&](int q) {
        if (q <= n && !reach[q]) {
          reach[q] = 1;
          work.push_back(q);
        }
      };
      if (word_at(p) && char_at(p + 1, U'-') && p + 2 < n && cps[p + 2] != U'-' &&
          !is_space_cp(cps[p + 2])) {
        add(p + 3);
      }
      if (char_at(p, U'&') || char_at(p, U'/')) add(p + 1);
      if (char_at(p, U'\'') && char_at(p + 1, U'S') && word_at(p + 2)) add(p + 3);
      if (char_at(p, U'\'') && p + 1 < n && cps[p + 1] >= U'A' && cps[p + 1] <= U'Z' &&
          cps[p + 1] != U'S') {
        add(p + 2);
      }
      // The (?=.*\w) lookahead is subsumed by the \w that follows the dot.
      if (char_at(p, U'.') && word_at(p + 1)) add(p + 2);
      if (digit_at(p)) add(p + 1);
    }
    int best = 0;
    for (int q = i + 1; q <= n; ++q) {
      if (!reach[q]) continue;
      best = std::max(best, q - i + (char_at(q, U'$') ? 1 : 0));
    }
    return best;
  }

  int match_rule2b_numeric(int i) const {
    const int d1 = digit_run(i);
    if (d1 == 0) return 0;
    int best = 0;
    if (char_at(i + d1, U'-')) {
      const int d2 = digit_run(i + d1 + 1);
      if (d2 > 0) best = std::max(best, d1 + 1 + d2);
    }
    if (char_at(i + d1, U',')) {
      const int d2 = digit_run(i + d1 + 1);
      if (d2 > 0) {
        best = std::max(best, d1 + 1 + d2);
        if (char_at(i + d1 + 1 + d2, U',')) {
          const int d3 = digit_run(i + d1 + 1 + d2 + 1);
          if (d3 > 0) best = std::max(best, d1 + 1 + d2 + 1 + d3);
        }
      }
    }
    return best;
  }

  int match_rule2(int i) const {
    if (opts.mode == TokenizerMode::ucca) return match_rule2a(i);
    return std::max(match_rule2b_word(i), match_rule2b_numeric(i));
  }
};

}  // namespace

std::vector<Token> tokenize(const std::string& input, const TokenizerOptions& opts) {
  std::vector<char32_t> cps;
  std::vector<std::size_t> bytes;
  decode_utf8_spans(input, cps, bytes);
  Scanner scan{cps, bytes, input, opts, static_cast<int>(cps.size())};

  std::vector<Token> out;
  auto emit = [&](int s, int e) {
    Token t;
    t.index = static_cast<int>(out.size());
    t.start = s;
    t.end = e;
    t.form = input.substr(bytes[s], bytes[e] - bytes[s]);
    out.push_back(std::move(t));
  };

  int i = 0;
  while (i < scan.n) {
    if (is_space_cp(cps[i])) {
      ++i;
      continue;
    }
    int split = 0, len = 0;
    if (scan.match_rule5(i, &split, &len)) {
      emit(i, i + split);
      emit(i + split, i + len);
      i += len;
      continue;
    }
    if (const int m = scan.match_rule4(i); m > 0) {
      emit(i, i + m);
      i += m;
      continue;
    }
    if (const int m = scan.match_rule3(i); m > 0) {
      emit(i, i + m);
      i += m;
      continue;
    }
    if (const int m = scan.match_rule2(i); m > 0) {
      emit(i, i + m);
      i += m;
      continue;
    }
    emit(i, i + 1);  // rule 1
    ++i;
  }
  return out;
}

std::vector<std::string> token_forms(const std::vector<Token>& tokens) {
  std::vector<std::string> forms;
  forms.reserve(tokens.size());
  for (const auto& t : tokens) forms.push_back(t.form);
  return forms;
}

}  // namespace mrg

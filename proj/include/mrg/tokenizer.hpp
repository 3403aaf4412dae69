// Deterministic rule-cascade tokenizer. Tokens are surface spans whose
// offsets line up exactly with graph anchors, so anchoring can be expressed
// as ordinary edges downstream.
//
// The cascade, from lowest to highest priority:
//   1  any single non-space character
//   2a (ucca mode)    \w+[$]?
//   2b (default mode) \w(\w-[^-\s]|&|/|'S\w|'[A-RT-Z]|[.](?=.*\w)\w|\d)*[$]? ;
//                     \d+-\d+ ; \d+,\d+ ; \d+,\d+,\d+
//   3  --+ ; `+ ; '+ ; [.]+ ; !+
//   4  n't 's 'd 'm 're 've 'll           (exact case)
//   5  21 contraction words split in two  (e.g. do|n't, can|not, got|ta)
//
// At each scan position the highest-priority matching rule wins; within a
// rule the longest match wins (rule 2b is evaluated with full backtracking,
// i.e. the longest overall match of the pattern). Rule 5 matches a whole
// word (the following character must not be a word character), is
// case-insensitive in its first letter only, and emits two tokens.
//
// When `rule2b_word_run` is set (the default) the leading \w of rule 2b is
// read as a run of word characters; switching it off keeps the literal
// single-character reading for auditing.
#ifndef MRG_TOKENIZER_HPP
#define MRG_TOKENIZER_HPP

#include <string>
#include <vector>

namespace mrg {

struct Token {
  int index = 0;  // 0-based, left to right
  std::string form;
  int start = 0;  // scalar-value offsets into the input
  int end = 0;
  friend bool operator==(const Token&, const Token&) = default;
};

enum class TokenizerMode { standard, ucca };

struct TokenizerOptions {
  TokenizerMode mode = TokenizerMode::standard;
  bool rule2b_word_run = true;
};

std::vector<Token> tokenize(const std::string& input, const TokenizerOptions& opts = {});

std::vector<std::string> token_forms(const std::vector<Token>& tokens);

}  // namespace mrg

#endif

#include "mrg/utf8.hpp"

#include <array>

namespace mrg {

std::vector<char32_t> decode_utf8(std::string_view text) {
  std::vector<char32_t> out;
  std::vector<std::size_t> offsets;
  decode_utf8_spans(text, out, offsets);
  return out;
}

void decode_utf8_spans(std::string_view text, std::vector<char32_t>& out,
                       std::vector<std::size_t>& byte_offsets) {
  out.clear();
  byte_offsets.clear();
  out.reserve(text.size());
  byte_offsets.reserve(text.size() + 1);
  std::size_t i = 0;
  const auto n = text.size();
  while (i < n) {
    const unsigned char b0 = static_cast<unsigned char>(text[i]);
    char32_t cp = 0xFFFD;
    std::size_t len = 1;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0 && i + 1 < n &&
               (static_cast<unsigned char>(text[i + 1]) & 0xC0) == 0x80) {
      cp = (static_cast<char32_t>(b0 & 0x1F) << 6) |
           (static_cast<unsigned char>(text[i + 1]) & 0x3F);
      len = 2;
      if (cp < 0x80) cp = 0xFFFD;  // overlong
    } else if ((b0 & 0xF0) == 0xE0 && i + 2 < n &&
               (static_cast<unsigned char>(text[i + 1]) & 0xC0) == 0x80 &&
               (static_cast<unsigned char>(text[i + 2]) & 0xC0) == 0x80) {
      cp = (static_cast<char32_t>(b0 & 0x0F) << 12) |
           ((static_cast<unsigned char>(text[i + 1]) & 0x3F) << 6) |
           (static_cast<unsigned char>(text[i + 2]) & 0x3F);
      len = 3;
      if (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
    } else if ((b0 & 0xF8) == 0xF0 && i + 3 < n &&
               (static_cast<unsigned char>(text[i + 1]) & 0xC0) == 0x80 &&
               (static_cast<unsigned char>(text[i + 2]) & 0xC0) == 0x80 &&
               (static_cast<unsigned char>(text[i + 3]) & 0xC0) == 0x80) {
      cp = (static_cast<char32_t>(b0 & 0x07) << 18) |
           ((static_cast<unsigned char>(text[i + 1]) & 0x3F) << 12) |
           ((static_cast<unsigned char>(text[i + 2]) & 0x3F) << 6) |
           (static_cast<unsigned char>(text[i + 3]) & 0x3F);
      len = 4;
      if (cp < 0x10000 || cp > 0x10FFFF) cp = 0xFFFD;
    }
    if (cp == 0xFFFD) len = 1;
    byte_offsets.push_back(i);
    out.push_back(cp);
    i += len;
  }
  byte_offsets.push_back(n);
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(const char32_t* cps, std::size_t n) {
  std::string out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) append_utf8(out, cps[i]);
  return out;
}

std::string encode_utf8(const std::vector<char32_t>& cps) {
  return encode_utf8(cps.data(), cps.size());
}

std::size_t scalar_length(std::string_view text) {
  return decode_utf8(text).size();
}

std::string substr_scalars(std::string_view text, std::size_t from, std::size_t to) {
  const auto cps = decode_utf8(text);
  if (from > cps.size()) from = cps.size();
  if (to > cps.size()) to = cps.size();
  if (from >= to) return "";
  return encode_utf8(cps.data() + from, to - from);
}

bool is_space_cp(char32_t cp) {
  switch (cp) {
    case U' ': case U'\t': case U'\n': case U'\r': case 0x0B: case 0x0C:
    case 0x00A0: case 0x1680: case 0x2028: case 0x2029: case 0x202F:
    case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool is_digit_cp(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

namespace {

struct Range {
  char32_t lo, hi;
};

// Letter ranges of the major scripts. This is a pragmatic table, not a full
// Unicode category database; anything outside it is treated as non-word.
constexpr std::array<Range, 38> kLetterRanges{{
    {0x00C0, 0x00D6}, {0x00D8, 0x00F6}, {0x00F8, 0x02AF},  // Latin suppl/ext
    {0x0370, 0x0373}, {0x0376, 0x0377}, {0x037B, 0x037D},
    {0x0386, 0x0386}, {0x0388, 0x03FF},                     // Greek
    {0x0400, 0x0481}, {0x048A, 0x052F},                     // Cyrillic
    {0x0531, 0x0556}, {0x0561, 0x0587},                     // Armenian
    {0x05D0, 0x05EA},                                       // Hebrew
    {0x0620, 0x064A}, {0x0660, 0x0669}, {0x0671, 0x06D3},   // Arabic
    {0x0900, 0x0963}, {0x0966, 0x096F},                     // Devanagari
    {0x0E01, 0x0E3A}, {0x0E40, 0x0E4E}, {0x0E50, 0x0E59},   // Thai
    {0x10A0, 0x10C5}, {0x10D0, 0x10FA},                     // Georgian
    {0x1E00, 0x1EFF},                                       // Latin ext. add.
    {0x1F00, 0x1FFC},                                       // Greek extended
    {0x3041, 0x3096}, {0x309D, 0x309F},                     // Hiragana
    {0x30A1, 0x30FA}, {0x30FC, 0x30FF},                     // Katakana
    {0x3105, 0x312F},                                       // Bopomofo
    {0x31A0, 0x31BF},
    {0x3400, 0x4DBF}, {0x4E00, 0x9FFF},                     // CJK
    {0xA000, 0xA48C},                                       // Yi
    {0xAC00, 0xD7A3},                                       // Hangul
    {0xF900, 0xFA6D},                                       // CJK compat
    {0xFB00, 0xFB06},                                       // Latin ligatures
    {0xFF66, 0xFFDC},                                       // halfwidth kana
}};

}  // namespace

bool is_word_cp(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') ||
           (cp >= U'0' && cp <= U'9') || cp == U'_';
  }
  for (const auto& r : kLetterRanges) {
    if (cp >= r.lo && cp <= r.hi) return true;
  }
  return false;
}

char32_t to_lower_cp(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  if ((cp >= 0x00C0 && cp <= 0x00D6) || (cp >= 0x00D8 && cp <= 0x00DE)) return cp + 32;
  return cp;
}

char32_t to_upper_cp(char32_t cp) {
  if (cp >= U'a' && cp <= U'z') return cp - 32;
  if ((cp >= 0x00E0 && cp <= 0x00F6) || (cp >= 0x00F8 && cp <= 0x00FE)) return cp - 32;
  return cp;
}

}  // namespace mrg

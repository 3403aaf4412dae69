// UTF-8 decoding and the character classes shared by the tokenizer and the
// label encoder. All character offsets in this project are Unicode scalar
// value indices, never byte indices.
#ifndef MRG_UTF8_HPP
#define MRG_UTF8_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mrg {

// Decodes UTF-8 into scalar values. Malformed bytes decode as U+FFFD, one
// replacement per offending byte, so decoding is total.
std::vector<char32_t> decode_utf8(std::string_view text);

// As decode_utf8, and also fills byte_offsets with the starting byte of each
// scalar plus one trailing entry equal to text.size().
void decode_utf8_spans(std::string_view text, std::vector<char32_t>& cps,
                       std::vector<std::size_t>& byte_offsets);

void append_utf8(std::string& out, char32_t cp);
std::string encode_utf8(const std::vector<char32_t>& cps);
std::string encode_utf8(const char32_t* cps, std::size_t n);

// Number of scalar values in `text`.
std::size_t scalar_length(std::string_view text);

// Substring by scalar-value offsets [from, to). Offsets are clamped to the
// string; from > to yields "".
std::string substr_scalars(std::string_view text, std::size_t from, std::size_t to);

bool is_space_cp(char32_t cp);
bool is_digit_cp(char32_t cp);   // ASCII decimal digits
bool is_word_cp(char32_t cp);    // alphanumerics plus underscore

char32_t to_lower_cp(char32_t cp);  // ASCII + Latin-1
char32_t to_upper_cp(char32_t cp);

}  // namespace mrg

#endif

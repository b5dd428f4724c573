#ifndef LEXACQ_UTF8_HPP
#define LEXACQ_UTF8_HPP

#include <string>
#include <string_view>

namespace lexacq::utf8 {

// Throws encoding_error naming the byte offset of the first bad sequence.
std::u32string decode(std::string_view bytes);

std::string encode(std::u32string_view text);
void append(std::string& out, char32_t cp);

bool is_letter(char32_t cp);
bool is_digit(char32_t cp);
bool is_combining_mark(char32_t cp);
bool is_space(char32_t cp);

// Letters, digits and combining marks: the characters a word token is built from.
inline bool is_word_char(char32_t cp) { return is_letter(cp) || is_digit(cp) || is_combining_mark(cp); }

} // namespace lexacq::utf8

#endif

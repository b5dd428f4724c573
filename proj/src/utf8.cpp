#include "lexacq/utf8.hpp"

#include "lexacq/error.hpp"

namespace lexacq::utf8 {

std::u32string decode(std::string_view bytes)
{
  std::u32string out;
  out.reserve(bytes.size());

  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    const auto b0 = static_cast<unsigned char>(bytes[i]);
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    }

    std::size_t len;
    char32_t cp;
    char32_t min;
    if ((b0 & 0xE0) == 0xC0) {
      len = 2; cp = b0 & 0x1F; min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3; cp = b0 & 0x0F; min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4; cp = b0 & 0x07; min = 0x10000;
    } else {
      throw encoding_error("invalid UTF-8 lead byte", i);
    }

    if (i + len > n)
      throw encoding_error("truncated UTF-8 sequence", i);

    for (std::size_t k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(bytes[i + k]);
      if ((b & 0xC0) != 0x80)
        throw encoding_error("invalid UTF-8 continuation byte", i);
      cp = (cp << 6) | (b & 0x3F);
    }

    if (cp < min)
      throw encoding_error("overlong UTF-8 sequence", i);
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
      throw encoding_error("invalid code point", i);

    out.push_back(cp);
    i += len;
  }
  return out;
}

void append(std::string& out, char32_t cp)
{
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

std::string encode(std::u32string_view text)
{
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text)
    append(out, cp);
  return out;
}

bool is_digit(char32_t cp)
{
  return cp >= U'0' && cp <= U'9';
}

bool is_combining_mark(char32_t cp)
{
  return (cp >= 0x0300 && cp <= 0x036F) || (cp >= 0x1AB0 && cp <= 0x1AFF)
      || (cp >= 0x1DC0 && cp <= 0x1DFF) || (cp >= 0x20D0 && cp <= 0x20FF)
      || (cp >= 0xFE20 && cp <= 0xFE2F);
}

bool is_space(char32_t cp)
{
  switch (cp) {
  case U' ': case U'\t': case U'\n': case U'\r': case U'\v': case U'\f':
  case 0x00A0: case 0x1680: case 0x2028: case 0x2029: case 0x202F:
  case 0x205F: case 0x3000: case 0xFEFF:
    return true;
  default:
    return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Approximate letter test without a Unicode database: Latin, Greek, Cyrillic
// and the remaining alphabetic planes, minus the symbol and punctuation blocks.
bool is_letter(char32_t cp)
{
  if (cp < 0x80)
    return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z');
  if (cp < 0x100)
    return cp == 0xAA || cp == 0xB5 || cp == 0xBA || (cp >= 0xC0 && cp != 0xD7 && cp != 0xF7);
  if (cp <= 0x02AF)
    return true;
  if (cp < 0x0370)
    return false;
  if (cp <= 0x052F)
    return cp != 0x037E && cp != 0x0387 && !(cp >= 0x0482 && cp <= 0x0489);
  if (cp >= 0x1E00 && cp <= 0x1FFF)
    return true;
  if (cp >= 0x2000 && cp <= 0x2BFF)
    return false;
  if (cp >= 0x3000 && cp <= 0x303F)
    return false;
  if (cp >= 0xFE30 && cp <= 0xFE6F)
    return false;
  if (cp >= 0xFF00 && cp <= 0xFF20)
    return false;
  if (cp >= 0xE000 && cp <= 0xF8FF)
    return false;
  return cp >= 0x0530 && !is_combining_mark(cp);
}

} // namespace lexacq::utf8

#include "lexacq/corpus_io.hpp"

#include "lexacq/error.hpp"
#include "lexacq/utf8.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace lexacq {

std::string read_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw missing_input_error(path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

namespace {

char32_t to_lower(char32_t cp)
{
  if (cp < 0x80)
    return (cp >= U'A' && cp <= U'Z') ? cp + 0x20 : cp;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7)
    return cp + 0x20;
  if (cp >= 0x0100 && cp <= 0x017F) {
    if (cp == 0x0130)
      return U'i';
    if (cp == 0x0178)
      return 0x00FF;
    const bool even_upper = (cp <= 0x0137) || (cp >= 0x014A && cp <= 0x0177);
    const bool odd_upper = (cp >= 0x0139 && cp <= 0x0148) || (cp >= 0x0179 && cp <= 0x017E);
    if (even_upper && cp % 2 == 0)
      return cp + 1;
    if (odd_upper && cp % 2 == 1)
      return cp + 1;
    return cp;
  }
  if (cp >= 0x0391 && cp <= 0x03A9 && cp != 0x03A2)
    return cp + 0x20;
  if (cp >= 0x0410 && cp <= 0x042F)
    return cp + 0x20;
  if (cp >= 0x0400 && cp <= 0x040F)
    return cp + 0x50;
  return cp;
}

struct fold_range
{
  char32_t lo;
  char32_t hi;
  const char32_t* base;
};

// Base letters of the canonical decompositions of Latin-1 Supplement and
// Latin Extended-A, lowercased. Ligatures expand.
constexpr fold_range fold_table[] = {
  {0x00C0, 0x00C5, U"a"}, {0x00C6, 0x00C6, U"ae"}, {0x00C7, 0x00C7, U"c"},
  {0x00C8, 0x00CB, U"e"}, {0x00CC, 0x00CF, U"i"}, {0x00D0, 0x00D0, U"d"},
  {0x00D1, 0x00D1, U"n"}, {0x00D2, 0x00D6, U"o"}, {0x00D8, 0x00D8, U"o"},
  {0x00D9, 0x00DC, U"u"}, {0x00DD, 0x00DD, U"y"}, {0x00DE, 0x00DE, U"th"},
  {0x00DF, 0x00DF, U"ss"},
  {0x00E0, 0x00E5, U"a"}, {0x00E6, 0x00E6, U"ae"}, {0x00E7, 0x00E7, U"c"},
  {0x00E8, 0x00EB, U"e"}, {0x00EC, 0x00EF, U"i"}, {0x00F0, 0x00F0, U"d"},
  {0x00F1, 0x00F1, U"n"}, {0x00F2, 0x00F6, U"o"}, {0x00F8, 0x00F8, U"o"},
  {0x00F9, 0x00FC, U"u"}, {0x00FD, 0x00FD, U"y"}, {0x00FE, 0x00FE, U"th"},
  {0x00FF, 0x00FF, U"y"},
  {0x0100, 0x0105, U"a"}, {0x0106, 0x010D, U"c"}, {0x010E, 0x0111, U"d"},
  {0x0112, 0x011B, U"e"}, {0x011C, 0x0123, U"g"}, {0x0124, 0x0127, U"h"},
  {0x0128, 0x0131, U"i"}, {0x0132, 0x0133, U"ij"}, {0x0134, 0x0135, U"j"},
  {0x0136, 0x0138, U"k"}, {0x0139, 0x0142, U"l"}, {0x0143, 0x014B, U"n"},
  {0x014C, 0x0151, U"o"}, {0x0152, 0x0153, U"oe"}, {0x0154, 0x0159, U"r"},
  {0x015A, 0x0161, U"s"}, {0x0162, 0x0167, U"t"}, {0x0168, 0x0173, U"u"},
  {0x0174, 0x0175, U"w"}, {0x0176, 0x0178, U"y"}, {0x0179, 0x017E, U"z"},
  {0x017F, 0x017F, U"s"},
};

const char32_t* fold_base(char32_t cp)
{
  if (cp < 0xC0 || cp > 0x017F)
    return nullptr;
  for (const auto& r : fold_table)
    if (cp >= r.lo && cp <= r.hi)
      return r.base;
  return nullptr;
}

bool is_comment_or_blank(std::string_view line)
{
  for (char c : line) {
    if (c == '#')
      return true;
    if (c != ' ' && c != '\t' && c != '\r')
      return false;
  }
  return true;
}

std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn)
{
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    const auto line = text.substr(0, nl);
    fn(line_no, line);
    if (nl == std::string_view::npos)
      break;
    text.remove_prefix(nl + 1);
  }
}

std::string normalize_field(std::string_view field, const normalization& rule,
                            const std::string& source, std::size_t line_no)
{
  try {
    return normalize(field, rule);
  } catch (const encoding_error& e) {
    throw parse_error(source, line_no, e.what());
  }
}

} // namespace

text_half::text_half(std::string language_tag, std::u32string content)
  : language_tag_(std::move(language_tag)), content_(std::move(content))
{
  if (language_tag_.empty())
    throw argument_error("text half needs a non-empty language tag");
}

text_half text_half::from_utf8(std::string language_tag, std::string_view bytes)
{
  return text_half(std::move(language_tag), utf8::decode(bytes));
}

text_half text_half::from_file(std::string language_tag, const std::filesystem::path& path)
{
  return from_utf8(std::move(language_tag), read_file(path));
}

std::string text_half::slice(position begin, position end) const
{
  begin = std::clamp<position>(begin, 0, length());
  end = std::clamp<position>(end, begin, length());
  return utf8::encode(std::u32string_view(content_).substr(begin, end - begin));
}

std::u32string normalize(std::u32string_view surface, const normalization& rule)
{
  std::u32string out;
  out.reserve(surface.size());
  for (char32_t cp : surface) {
    if (!rule.fold_diacritics) {
      out.push_back(to_lower(cp));
      continue;
    }
    if (utf8::is_combining_mark(cp))
      continue;
    const char32_t lower = to_lower(cp);
    if (const char32_t* base = fold_base(lower))
      out.append(base);
    else
      out.push_back(lower);
  }
  return out;
}

std::string normalize(std::string_view surface, const normalization& rule)
{
  return utf8::encode(normalize(utf8::decode(surface), rule));
}

word_list parse_word_list(std::string_view text, list_purpose purpose,
                          const normalization& rule, const std::string& source)
{
  word_list list;
  list.purpose = purpose;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (is_comment_or_blank(line))
      return;
    const auto form = trim(line);
    if (form.find_first_of(" \t") != std::string_view::npos)
      throw parse_error(source, line_no, "expected one form per line");
    auto normalized = normalize_field(form, rule, source, line_no);
    if (!list.entries.insert(normalized).second)
      list.warnings.push_back(source + ":" + std::to_string(line_no) + ": duplicate entry '" + normalized + "'");
  });
  return list;
}

word_list load_word_list(const std::filesystem::path& path, list_purpose purpose,
                         const normalization& rule)
{
  return parse_word_list(read_file(path), purpose, rule, path.string());
}

pair_list parse_pair_list(std::string_view text, const normalization& rule, const std::string& source)
{
  pair_list list;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (is_comment_or_blank(line))
      return;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos)
      throw parse_error(source, line_no, "expected two tab-separated forms");
    const auto left = trim(line.substr(0, tab));
    const auto right = trim(line.substr(tab + 1));
    if (left.empty() || right.empty() || right.find('\t') != std::string_view::npos)
      throw parse_error(source, line_no, "expected two tab-separated forms");
    auto pair = std::make_pair(normalize_field(left, rule, source, line_no),
                               normalize_field(right, rule, source, line_no));
    if (!list.pairs.insert(pair).second)
      list.warnings.push_back(source + ":" + std::to_string(line_no) + ": duplicate pair '"
                              + pair.first + "'/'" + pair.second + "'");
  });
  return list;
}

pair_list load_pair_list(const std::filesystem::path& path, const normalization& rule)
{
  return parse_pair_list(read_file(path), rule, path.string());
}

type_id vocabulary::intern(const std::string& form)
{
  auto [it, inserted] = ids_.try_emplace(form, static_cast<type_id>(forms_.size()));
  if (inserted)
    forms_.push_back(form);
  return it->second;
}

std::optional<type_id> vocabulary::find(const std::string& form) const
{
  const auto it = ids_.find(form);
  if (it == ids_.end())
    return std::nullopt;
  return it->second;
}

namespace {

bool is_joining_hyphen(char32_t cp)
{
  return cp == U'-' || cp == 0x2010 || cp == 0x2011;
}

} // namespace

tokenized_half tokenize(const text_half& half, const tokenizer_config& config)
{
  tokenized_half out;
  const auto& text = half.content();
  const position n = half.length();

  auto emit = [&](position start, position end, bool word) {
    token t;
    const auto span = std::u32string_view(text).substr(start, end - start);
    t.surface = utf8::encode(span);
    t.start = start;
    t.end = end;
    t.center = token_center(start, end);
    t.index = out.tokens.size();
    t.word = word;
    const auto normalized = utf8::encode(normalize(span, config.rule));
    t.type = out.vocab.intern(normalized);
    if (word) {
      bool has_letter = false;
      for (char32_t cp : span)
        has_letter = has_letter || utf8::is_letter(cp);
      t.content = has_letter && !(config.stoplist && config.stoplist->contains(normalized));
    }
    out.tokens.push_back(std::move(t));
  };

  position i = 0;
  while (i < n) {
    const char32_t cp = text[i];
    if (utf8::is_space(cp)) {
      ++i;
      continue;
    }
    const position start = i;
    if (utf8::is_word_char(cp)) {
      ++i;
      while (i < n) {
        if (utf8::is_word_char(text[i])) {
          ++i;
        } else if (is_joining_hyphen(text[i]) && i + 1 < n && utf8::is_word_char(text[i + 1])) {
          i += 2;
        } else {
          break;
        }
      }
      emit(start, i, true);
    } else {
      ++i;
      while (i < n && !utf8::is_space(text[i]) && !utf8::is_word_char(text[i]))
        ++i;
      emit(start, i, false);
    }
  }
  return out;
}

} // namespace lexacq

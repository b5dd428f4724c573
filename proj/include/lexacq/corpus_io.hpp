#ifndef LEXACQ_CORPUS_IO_HPP
#define LEXACQ_CORPUS_IO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lexacq {

using type_id = std::uint32_t;
using position = std::int64_t;

// One half of a bitext. Positions everywhere in the library are code point
// offsets into `content`.
class text_half
{
public:
  text_half(std::string language_tag, std::u32string content);

  // Throws encoding_error on invalid UTF-8.
  static text_half from_utf8(std::string language_tag, std::string_view bytes);
  static text_half from_file(std::string language_tag, const std::filesystem::path& path);

  const std::string& language_tag() const noexcept { return language_tag_; }
  const std::u32string& content() const noexcept { return content_; }
  position length() const noexcept { return static_cast<position>(content_.size()); }

  // UTF-8 text of [begin, end), clamped to the half.
  std::string slice(position begin, position end) const;

private:
  std::string language_tag_;
  std::u32string content_;
};

// Whole file as bytes. Throws missing_input_error when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

struct normalization
{
  bool fold_diacritics = false;
};

// Case fold, plus optional decomposition-and-mark-strip. Idempotent.
std::string normalize(std::string_view surface, const normalization& rule = {});
std::u32string normalize(std::u32string_view surface, const normalization& rule = {});

enum class list_purpose { stoplist, seed_source, seed_target };

struct word_list
{
  list_purpose purpose = list_purpose::stoplist;
  std::set<std::string> entries;
  std::vector<std::string> warnings;

  bool contains(const std::string& normalized) const { return entries.count(normalized) != 0; }
};

struct pair_list
{
  std::set<std::pair<std::string, std::string>> pairs;
  std::vector<std::string> warnings;

  bool contains(const std::string& source, const std::string& target) const
  {
    return pairs.count({source, target}) != 0;
  }
  bool empty() const { return pairs.empty(); }
};

word_list load_word_list(const std::filesystem::path& path, list_purpose purpose,
                         const normalization& rule = {});
word_list parse_word_list(std::string_view text, list_purpose purpose,
                          const normalization& rule = {}, const std::string& source = "<memory>");

pair_list load_pair_list(const std::filesystem::path& path, const normalization& rule = {});
pair_list parse_pair_list(std::string_view text, const normalization& rule = {},
                          const std::string& source = "<memory>");

// Interns normalized forms of one half.
class vocabulary
{
public:
  type_id intern(const std::string& form);
  std::optional<type_id> find(const std::string& form) const;
  const std::string& form(type_id id) const { return forms_.at(id); }
  std::size_t size() const noexcept { return forms_.size(); }

private:
  std::unordered_map<std::string, type_id> ids_;
  std::vector<std::string> forms_;
};

struct token
{
  std::string surface;
  position start = 0;
  position end = 0;
  position center = 0;
  std::size_t index = 0;
  type_id type = 0;
  bool word = false;     // built from letters/digits; punctuation runs are not
  bool content = false;  // word with a letter, not stoplisted
};

struct tokenizer_config
{
  normalization rule;
  const word_list* stoplist = nullptr;
};

struct tokenized_half
{
  std::vector<token> tokens;
  vocabulary vocab;

  const std::string& type_form(const token& t) const { return vocab.form(t.type); }
};

tokenized_half tokenize(const text_half& half, const tokenizer_config& config = {});

inline position token_center(position start, position end) { return (start + end - 1) / 2; }

} // namespace lexacq

#endif

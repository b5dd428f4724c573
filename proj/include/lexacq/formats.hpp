#ifndef LEXACQ_FORMATS_HPP
#define LEXACQ_FORMATS_HPP

#include "lexacq/bitext_geometry.hpp"
#include "lexacq/corpus_io.hpp"
#include "lexacq/eval_stats.hpp"
#include "lexacq/lexicon.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace lexacq {

// Every reader throws parse_error with the line number on malformed rows;
// lines starting with '#' and blank lines are skipped.

std::string format_lexicon(const lexicon& entries);
lexicon parse_lexicon(std::string_view text, const std::string& source = "<memory>");

std::string format_map(std::span<const correspondence_point> points);
std::vector<correspondence_point> parse_map(std::string_view text, const std::string& source = "<memory>");

std::string format_tokens(const tokenized_half& half);

std::string format_annotations(std::span<const annotation> records);
// Tab-separated rows, or one JSON object per line when the first
// non-comment character is '{'.
std::vector<annotation> parse_annotations(std::string_view text, const std::string& source = "<memory>");

// Sheet with provenance; the blind variant drops the variant columns.
std::string format_sheet(std::span<const sheet_entry> sheet, bool with_variant = true);
std::vector<sheet_entry> parse_sheet(std::string_view text, const std::string& source = "<memory>");

std::string format_score(double score);

// Creates parent directories as needed.
void write_file(const std::filesystem::path& path, std::string_view content);

} // namespace lexacq

#endif

#ifndef LEXACQ_SYNTHETIC_HPP
#define LEXACQ_SYNTHETIC_HPP

#include "lexacq/bitext_geometry.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace lexacq {

struct synthetic_params
{
  std::size_t lexicon_size = 500;     // content translation pairs
  double cognate_rate = 0.3;
  double identical_share = 0.25;      // of the cognates, spelled the same on both sides
  std::size_t function_words = 40;
  double function_rate = 0.35;        // share of tokens drawn from function words
  double zipf_exponent = 1.0;
  std::size_t min_segment = 6;        // words per segment
  std::size_t max_segment = 18;
  std::size_t permutation_window = 3; // target words shuffled within blocks this long
  double omission_rate = 0.1;         // content words with no counterpart
  std::size_t target_characters = 400000;  // length of half A, approximate
  std::uint64_t seed = 1;
};

struct synthetic_bitext
{
  std::string text_a;
  std::string text_b;
  std::vector<std::pair<std::string, std::string>> lexicon;     // true content pairs
  std::vector<std::pair<std::string, std::string>> function_pairs;
  std::vector<std::string> stoplist_a;
  std::vector<std::string> stoplist_b;
  std::vector<correspondence_point> alignment;  // token centers of translated pairs, sorted by x
  std::size_t cognates = 0;
};

// Throws argument_error on sizes below 1 or rates outside [0, 1].
synthetic_bitext generate_synthetic_bitext(const synthetic_params& params);

} // namespace lexacq

#endif

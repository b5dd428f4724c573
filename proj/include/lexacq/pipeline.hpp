#ifndef LEXACQ_PIPELINE_HPP
#define LEXACQ_PIPELINE_HPP

#include "lexacq/cooccurrence.hpp"
#include "lexacq/lexicon.hpp"
#include "lexacq/simr.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace lexacq {

struct acquisition_params
{
  tokenizer_config tokens_a;
  tokenizer_config tokens_b;
  simr_params simr;
  std::vector<match_heuristic> heuristics;  // empty means cognates plus exact matches
  band_options band;
  induction_options induction;
};

struct acquisition
{
  tokenized_half a;
  tokenized_half b;
  bitext_space space;
  simr_result mapping;
  monotonic_map map;
  std::vector<band_pair> pairs;
  cooccurrence_counts counts;
  induction_result induced;
};

// Tokenize, map, count and induce in one pass over in-memory halves.
acquisition acquire_lexicon(const text_half& a, const text_half& b, const acquisition_params& params);

// Exit codes of run_cli.
inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_missing_input = 3;
inline constexpr int exit_data = 4;

// The command-line front end: `lexacq <stage> [flags]`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace lexacq

#endif

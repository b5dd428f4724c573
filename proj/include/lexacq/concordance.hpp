#ifndef LEXACQ_CONCORDANCE_HPP
#define LEXACQ_CONCORDANCE_HPP

#include "lexacq/bitext_geometry.hpp"
#include "lexacq/corpus_io.hpp"

#include <string>
#include <vector>

namespace lexacq {

struct concordance_window
{
  std::string text;               // UTF-8
  position begin = 0;             // window start in the half
  position focus_begin = 0;       // focus token, code points from window start
  position focus_end = 0;
  position center = 0;            // focus token center in the half
};

struct concordance_instance
{
  concordance_window source;
  concordance_window target;
  double deviation = 0.0;
};

struct concordance_options
{
  double delta = 100.0;
  std::size_t limit = 10;
  position window = 80;  // characters each side of the focus token
};

struct concordance_query
{
  std::string source;  // normalized forms
  std::string target;
};

// Banded instances of the pair ordered by (source center, target center),
// truncated to options.limit. Throws argument_error when limit is 0.
std::vector<concordance_instance> build_concordance(const concordance_query& pair,
                                                    const text_half& half_a, const tokenized_half& a,
                                                    const text_half& half_b, const tokenized_half& b,
                                                    const interpolator& map,
                                                    const concordance_options& options = {});

// Two lines per instance with the focus token in brackets, blank line between.
std::string render_text(const std::vector<concordance_instance>& instances);

// One JSON object per line.
std::string render_json_lines(const std::vector<concordance_instance>& instances);

} // namespace lexacq

#endif

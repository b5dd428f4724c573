#ifndef LEXACQ_SIMR_HPP
#define LEXACQ_SIMR_HPP

#include "lexacq/bitext_geometry.hpp"
#include "lexacq/corpus_io.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lexacq {

struct simr_params
{
  std::size_t chain_size = 6;
  double lcsr_threshold = 0.58;
  double max_slope_deviation = 0.33;  // |chain slope - diagonal slope| / diagonal slope
  double max_rms_error = 20.0;        // characters
  double search_widening = 1.5;
  double initial_span = 400.0;        // x extent of a fresh search rectangle, characters

  // Throws argument_error on out-of-range values.
  void validate() const;
};

enum class heuristic_kind { cognate_lcsr, seed_lexicon, exact_match };

struct match_heuristic
{
  heuristic_kind kind = heuristic_kind::exact_match;
  std::shared_ptr<const pair_list> resources;
};

// Throws argument_error for a seed-lexicon heuristic without pairs.
match_heuristic make_heuristic(heuristic_kind kind, std::shared_ptr<const pair_list> resources = nullptr);

std::size_t lcs_length(std::u32string_view a, std::u32string_view b);

// Longest common subsequence length over the longer length, on code points.
// Throws argument_error when either form is empty.
double lcsr(std::string_view a, std::string_view b);

std::size_t letter_count(std::u32string_view form);

// Half-open rectangle of bitext space.
struct search_rect
{
  position x_begin = 0;
  position x_end = 0;
  position y_begin = 0;
  position y_end = 0;

  bool contains(position x, position y) const
  {
    return x >= x_begin && x < x_end && y >= y_begin && y < y_end;
  }
};

// For every source type, the sorted target types some enabled heuristic
// accepts. Only word types take part.
using type_match_table = std::vector<std::vector<type_id>>;

type_match_table build_type_matches(const vocabulary& a, const vocabulary& b,
                                    std::span<const match_heuristic> heuristics, const simr_params& params);

namespace reference {

type_match_table build_type_matches(const vocabulary& a, const vocabulary& b,
                                    std::span<const match_heuristic> heuristics, const simr_params& params);

} // namespace reference

class candidate_generator
{
public:
  candidate_generator(const tokenized_half& a, const tokenized_half& b,
                      std::span<const match_heuristic> heuristics, const simr_params& params);

  // All matching (a.center, b.center) points inside the rectangle, sorted.
  std::vector<correspondence_point> generate(const search_rect& rect) const;

  const type_match_table& matches() const noexcept { return matches_; }

private:
  type_match_table matches_;
  std::vector<position> a_centers_;
  std::vector<type_id> a_types_;
  std::vector<std::vector<position>> b_centers_by_type_;
};

std::vector<correspondence_point> generate_candidates(const search_rect& rect, const tokenized_half& a,
                                                      const tokenized_half& b,
                                                      std::span<const match_heuristic> heuristics,
                                                      const simr_params& params);

struct line_fit
{
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

// Least-squares line y = slope*x + intercept with the RMS residual.
// Returns nullopt when all x coincide.
std::optional<line_fit> fit_line(std::span<const correspondence_point> points);

bool accept_chain(std::span<const correspondence_point> points, const bitext_space& space,
                  const simr_params& params);

struct simr_result
{
  bitext_map map;
  std::size_t chains_accepted = 0;
  std::size_t searches = 0;
  std::vector<std::string> diagnostics;
};

simr_result map_bitext(const tokenized_half& a, const tokenized_half& b, const bitext_space& space,
                       std::span<const match_heuristic> heuristics, const simr_params& params);

} // namespace lexacq

#endif

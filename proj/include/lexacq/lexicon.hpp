#ifndef LEXACQ_LEXICON_HPP
#define LEXACQ_LEXICON_HPP

#include "lexacq/cooccurrence.hpp"
#include "lexacq/corpus_io.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace lexacq {

struct contingency_table
{
  std::uint64_t n11 = 0;  // u with v
  std::uint64_t n12 = 0;  // u without v
  std::uint64_t n21 = 0;  // v without u
  std::uint64_t n22 = 0;  // neither

  std::uint64_t total() const { return n11 + n12 + n21 + n22; }
  std::uint64_t row() const { return n11 + n12; }
  std::uint64_t column() const { return n11 + n21; }

  // Throws argument_error when the marginals cannot hold n11.
  static contingency_table from_marginals(std::uint64_t n11, std::uint64_t row, std::uint64_t column,
                                          std::uint64_t total);
};

// Log-likelihood ratio G^2 = 2 * sum n_ij ln(n_ij / m_ij) against the
// independence expectation. Throws argument_error on an empty table.
double g2_score(const contingency_table& t);

// n11 below its independence expectation.
bool negatively_associated(const contingency_table& t);

namespace reference {

// Serial scoring loop kept as the check for the parallel one.
std::vector<double> score_tables(std::span<const contingency_table> tables);

} // namespace reference

// Parallel over tables; same values as the serial loop.
std::vector<double> score_tables(std::span<const contingency_table> tables);

using pair_key = std::uint64_t;

inline pair_key make_pair_key(type_id u, type_id v) { return (static_cast<pair_key>(u) << 32) | v; }
inline type_id key_source(pair_key k) { return static_cast<type_id>(k >> 32); }
inline type_id key_target(pair_key k) { return static_cast<type_id>(k & 0xFFFFFFFFu); }

struct token_link
{
  std::uint32_t a = 0;
  std::uint32_t b = 0;

  friend bool operator==(const token_link&, const token_link&) = default;
  friend auto operator<=>(const token_link&, const token_link&) = default;
};

// One-to-one token links, sorted by (a, b).
using link_assignment = std::vector<token_link>;

// Greedy best-first linking: band pairs ordered by type score (desc), then
// |deviation| (asc), then (a, b); a pair is linked when neither token is.
// Band pairs whose type pair has no score take no part.
link_assignment competitive_link(std::span<const band_pair> pairs, std::span<const token> a,
                                 std::span<const token> b,
                                 const std::unordered_map<pair_key, double>& type_scores);

struct induction_options
{
  std::size_t max_iterations = 10;
  // Drop type pairs whose co-occurrence (or link) count falls below the
  // independence expectation; G^2 alone cannot tell the two directions apart.
  bool drop_negative = true;
};

struct induction_state
{
  std::map<pair_key, double> scores;               // surviving type pairs
  std::map<pair_key, std::uint64_t> link_counts;   // empty before the first pass
  std::size_t iterations = 0;

  friend bool operator==(const induction_state&, const induction_state&) = default;
};

// Scores every banded type pair from the co-occurrence table.
induction_state initial_state(const cooccurrence_counts& counts, const induction_options& options);

// One pass: link, recount from links, rescore, drop pairs left without links.
induction_state reestimate(const induction_state& state, std::span<const band_pair> pairs,
                           std::span<const token> a, std::span<const token> b,
                           const induction_options& options);

struct lexicon_entry
{
  std::string source;
  std::string target;
  double score = 0.0;
  std::size_t plateau = 0;
  std::uint64_t n11 = 0;         // band co-occurrences
  std::uint64_t link_count = 0;  // links in the final pass

  friend bool operator==(const lexicon_entry&, const lexicon_entry&) = default;
};

using lexicon = std::vector<lexicon_entry>;

struct induction_result
{
  lexicon entries;  // plateaus assigned, in file order
  std::size_t iterations = 0;
  bool converged = false;
};

induction_result induce_lexicon(const cooccurrence_counts& counts, std::span<const band_pair> pairs,
                                const tokenized_half& a, const tokenized_half& b,
                                const induction_options& options = {});

// Distinct scores rounded to 6 decimals, descending, number the plateaus from 1.
void assign_plateaus(lexicon& entries);

// Plateau, then score descending, then source, then target.
void sort_lexicon(lexicon& entries);

// Covered distinct types of both halves over all distinct types; a type is
// identified by its half and normalized form. Throws argument_error on an
// empty bitext.
double compute_recall(const lexicon& entries, const tokenized_half& a, const tokenized_half& b,
                      bool content_only);

struct recall_threshold
{
  std::size_t cutoff = 0;  // deepest plateau kept; 0 for an empty lexicon
  double recall = 0.0;
  bool reached = false;
};

// Recall of the entries on plateaus 1..k, for every k present.
std::vector<double> recall_by_plateau(const lexicon& entries, const tokenized_half& a,
                                      const tokenized_half& b, bool content_only);

recall_threshold threshold_by_recall(const lexicon& entries, double target_recall, const tokenized_half& a,
                                     const tokenized_half& b, bool content_only);

// Same decision from a precomputed cumulative coverage curve.
recall_threshold threshold_from_curve(std::span<const double> cumulative, double target_recall);

lexicon cut_at_plateau(const lexicon& entries, std::size_t cutoff);

} // namespace lexacq

#endif

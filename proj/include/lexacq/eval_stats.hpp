#ifndef LEXACQ_EVAL_STATS_HPP
#define LEXACQ_EVAL_STATS_HPP

#include "lexacq/error.hpp"
#include "lexacq/lexicon.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lexacq {

enum class verdict { invalid, v, p, i, skipped };

std::string_view to_string(verdict v);
// Accepts invalid, V, P, I, skipped (case-insensitive); nullopt otherwise.
std::optional<verdict> parse_verdict(std::string_view text);

inline bool is_valid_type(verdict v) { return v == verdict::v || v == verdict::p || v == verdict::i; }

// A flag set on an invalid or skipped verdict.
class malformed_annotation_error : public argument_error
{
public:
  using argument_error::argument_error;
};

struct annotation
{
  std::string annotator;
  std::string entry_id;
  verdict judgement = verdict::skipped;
  bool specific = false;
  bool general = false;

  friend bool operator==(const annotation&, const annotation&) = default;
};

// Throws malformed_annotation_error on a flagged invalid/skipped verdict.
// Returns true when the annotation is accepted but flagged for review: a
// valid type with neither Specific nor General.
bool check_annotation(const annotation& a);

enum class group_validity { invalid, v, p, i, unclassified_valid, none };

std::string_view to_string(group_validity g);

inline bool retained(group_validity g) { return g != group_validity::invalid && g != group_validity::none; }

struct group_options
{
  std::size_t quorum = 3;
  // Valid verdicts needed for "unclassified valid" when no type reaches quorum.
  std::size_t unclassified_threshold = 4;
};

struct group_annotation
{
  std::string entry_id;
  group_validity validity = group_validity::none;
  bool specific = false;  // false means no consensus
  bool general = false;

  friend bool operator==(const group_annotation&, const group_annotation&) = default;
};

// All annotations must share one entry id. Throws data_error on a repeated
// annotator and argument_error when quorum < 2.
group_annotation group_entry(std::span<const annotation> entry, const group_options& options = {});

// One group annotation per distinct entry id, sorted by entry id.
std::vector<group_annotation> group_all(std::span<const annotation> all, const group_options& options = {});

struct precision_summary
{
  std::size_t entries = 0;
  double pct_v = 0, pct_p = 0, pct_i = 0, pct_unclassified = 0;
  double pct_all_valid = 0;
  double pct_specific_only = 0, pct_general_only = 0, pct_both = 0;
};

// Percentages over all entries. Throws argument_error on an empty set.
precision_summary summarize_precision(std::span<const group_annotation> groups);

struct kappa_result
{
  double kappa = 0.0;
  double p_o = 0.0;
  double p_e = 0.0;
  std::size_t items = 0;
  bool defined = false;  // false with fewer than 2 items or p_e == 1
};

// Labels are arbitrary integers. Throws argument_error on unequal lengths.
kappa_result cohen_kappa(std::span<const int> a, std::span<const int> b);

struct kappa_report
{
  std::string annotator;
  kappa_result retain;       // retained / rejected / skipped, all entries
  kappa_result type;         // V / P / I, entries both retain with a typed group verdict
  kappa_result specific;     // entries both retain
  kappa_result general;
};

// Label vectors behind each kappa of one annotator against the group.
struct kappa_slices
{
  std::vector<int> retain_a, retain_g;
  std::vector<int> type_a, type_g;
  std::vector<int> specific_a, specific_g;
  std::vector<int> general_a, general_g;
};

kappa_slices kappa_labels(const std::string& annotator, std::span<const annotation> all,
                          std::span<const group_annotation> groups);

// One report per annotator, sorted by annotator id.
std::vector<kappa_report> kappa_suite(std::span<const annotation> all, std::span<const group_annotation> groups);

struct interval
{
  double lower = 0.0;
  double upper = 0.0;
};

// Normal-approximation interval p +- z sqrt(p(1-p)/n), clipped to [0, 1].
// Throws argument_error unless 0 <= p <= 1, n >= 1 and 0 <= level < 1.
interval proportion_ci(double p, std::size_t n, double level = 0.95);

struct sheet_entry
{
  std::string entry_id;
  lexicon_entry entry;
  std::size_t variant = 0;
  std::string variant_name;
  std::string hint;

  friend bool operator==(const sheet_entry&, const sheet_entry&) = default;
};

struct named_lexicon
{
  std::string name;
  lexicon entries;
};

// Uniform draw without replacement from each variant, then round-robin
// interleaving with a fresh random rotation each round. Throws
// sampling_error when a variant has fewer than n entries.
std::vector<sheet_entry> sample_and_interleave(std::span<const named_lexicon> variants, std::size_t n,
                                               std::uint64_t seed);

} // namespace lexacq

#endif

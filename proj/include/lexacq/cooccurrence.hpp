#ifndef LEXACQ_COOCCURRENCE_HPP
#define LEXACQ_COOCCURRENCE_HPP

#include "lexacq/bitext_geometry.hpp"
#include "lexacq/corpus_io.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace lexacq {

// A token instance pair inside the band around the interpolated map.
struct band_pair
{
  std::uint32_t a = 0;     // token index in half A
  std::uint32_t b = 0;     // token index in half B
  double deviation = 0.0;  // b.center - interpolated y at a.center

  friend bool operator==(const band_pair&, const band_pair&) = default;
};

struct band_options
{
  double delta = 100.0;
  bool content_only = true;
};

struct joint_count
{
  type_id source = 0;
  type_id target = 0;
  std::uint64_t count = 0;

  friend bool operator==(const joint_count&, const joint_count&) = default;
};

struct cooccurrence_counts
{
  std::vector<joint_count> joint;  // sorted by (source, target)
  // Instance counts of each type in its half (content-filtered when asked),
  // indexed by type id.
  std::vector<std::uint64_t> source_marginal;
  std::vector<std::uint64_t> target_marginal;
  // Sums of the joint counts by row and column.
  std::vector<std::uint64_t> source_pair_marginal;
  std::vector<std::uint64_t> target_pair_marginal;
  std::uint64_t total_pairs = 0;
  std::uint64_t source_tokens = 0;
  std::uint64_t target_tokens = 0;

  std::uint64_t joint_of(type_id u, type_id v) const;

  friend bool operator==(const cooccurrence_counts&, const cooccurrence_counts&) = default;
};

inline bool counts_token(const token& t, bool content_only) { return !content_only || t.content; }

// Band walk; parallel over fixed blocks of half A. Output sorted by (a, b)
// and identical for any thread count.
std::vector<band_pair> collect_band_pairs(std::span<const token> a, std::span<const token> b,
                                          const interpolator& map, const band_options& options);

cooccurrence_counts aggregate_counts(std::span<const band_pair> pairs, std::span<const token> a,
                                     std::span<const token> b, bool content_only);

// Throws undefined_map_error when the map is empty and argument_error when
// delta is not positive.
cooccurrence_counts count_cooccurrences(std::span<const token> a, std::span<const token> b,
                                        const monotonic_map& map, const bitext_space& space,
                                        const band_options& options);

namespace reference {

// Serial two-pointer band walk kept as the check for the parallel kernel.
std::vector<band_pair> collect_band_pairs(std::span<const token> a, std::span<const token> b,
                                          const interpolator& map, const band_options& options);

} // namespace reference

} // namespace lexacq

#endif

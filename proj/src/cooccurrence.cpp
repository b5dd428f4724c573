#include "lexacq/cooccurrence.hpp"

#include "lexacq/error.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace lexacq {

namespace {

constexpr std::size_t block_size = 1024;

void check_delta(double delta)
{
  if (!(delta > 0.0))
    throw argument_error("band width delta must be positive");
}

inline bool in_band(double b_center, double y_hat, double delta)
{
  return std::fabs(b_center - y_hat) <= delta;
}

std::size_t type_bound(std::span<const token> tokens)
{
  std::size_t bound = 0;
  for (const auto& t : tokens)
    bound = std::max<std::size_t>(bound, t.type + 1);
  return bound;
}

} // namespace

std::uint64_t cooccurrence_counts::joint_of(type_id u, type_id v) const
{
  const auto it = std::lower_bound(joint.begin(), joint.end(), std::make_pair(u, v),
                                   [](const joint_count& j, const std::pair<type_id, type_id>& key) {
                                     return std::tie(j.source, j.target) < std::tie(key.first, key.second);
                                   });
  if (it == joint.end() || it->source != u || it->target != v)
    return 0;
  return it->count;
}

std::vector<band_pair> collect_band_pairs(std::span<const token> a, std::span<const token> b,
                                          const interpolator& map, const band_options& options)
{
  check_delta(options.delta);

  std::vector<std::uint32_t> b_index;
  std::vector<double> b_center;
  for (const auto& t : b) {
    if (counts_token(t, options.content_only)) {
      b_index.push_back(static_cast<std::uint32_t>(t.index));
      b_center.push_back(static_cast<double>(t.center));
    }
  }

  const std::size_t blocks = (a.size() + block_size - 1) / block_size;
  std::vector<std::vector<band_pair>> partial(blocks);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t blk = 0; blk < blocks; ++blk) {
    auto& out = partial[blk];
    const std::size_t end = std::min(a.size(), (blk + 1) * block_size);
    for (std::size_t i = blk * block_size; i < end; ++i) {
      const auto& ta = a[i];
      if (!counts_token(ta, options.content_only))
        continue;
      const double y_hat = map(static_cast<double>(ta.center));
      // Loose bounds first; the exact band test decides membership.
      auto it = std::lower_bound(b_center.begin(), b_center.end(), y_hat - options.delta - 1.0);
      for (; it != b_center.end() && *it <= y_hat + options.delta + 1.0; ++it) {
        if (!in_band(*it, y_hat, options.delta))
          continue;
        const auto k = static_cast<std::size_t>(it - b_center.begin());
        out.push_back({static_cast<std::uint32_t>(ta.index), b_index[k], *it - y_hat});
      }
    }
  }

  std::size_t total = 0;
  for (const auto& p : partial)
    total += p.size();
  std::vector<band_pair> pairs;
  pairs.reserve(total);
  for (auto& p : partial)
    pairs.insert(pairs.end(), p.begin(), p.end());
  return pairs;
}

namespace reference {

std::vector<band_pair> collect_band_pairs(std::span<const token> a, std::span<const token> b,
                                          const interpolator& map, const band_options& options)
{
  check_delta(options.delta);

  std::vector<band_pair> pairs;
  std::size_t lo = 0;
  for (const auto& ta : a) {
    if (!counts_token(ta, options.content_only))
      continue;
    const double y_hat = map(static_cast<double>(ta.center));
    // The interpolated map is non-decreasing, so the window start only moves right.
    while (lo < b.size() && static_cast<double>(b[lo].center) < y_hat - options.delta - 1.0)
      ++lo;
    for (std::size_t k = lo; k < b.size(); ++k) {
      const auto& tb = b[k];
      const double c = static_cast<double>(tb.center);
      if (c > y_hat + options.delta + 1.0)
        break;
      if (counts_token(tb, options.content_only) && in_band(c, y_hat, options.delta))
        pairs.push_back({static_cast<std::uint32_t>(ta.index), static_cast<std::uint32_t>(tb.index), c - y_hat});
    }
  }
  return pairs;
}

} // namespace reference

cooccurrence_counts aggregate_counts(std::span<const band_pair> pairs, std::span<const token> a,
                                     std::span<const token> b, bool content_only)
{
  cooccurrence_counts counts;
  counts.source_marginal.assign(type_bound(a), 0);
  counts.target_marginal.assign(type_bound(b), 0);
  counts.source_pair_marginal.assign(counts.source_marginal.size(), 0);
  counts.target_pair_marginal.assign(counts.target_marginal.size(), 0);

  for (const auto& t : a)
    if (counts_token(t, content_only)) {
      ++counts.source_marginal[t.type];
      ++counts.source_tokens;
    }
  for (const auto& t : b)
    if (counts_token(t, content_only)) {
      ++counts.target_marginal[t.type];
      ++counts.target_tokens;
    }

  std::vector<std::uint64_t> keys;
  keys.reserve(pairs.size());
  for (const auto& p : pairs)
    keys.push_back((static_cast<std::uint64_t>(a[p.a].type) << 32) | b[p.b].type);
  std::sort(keys.begin(), keys.end());

  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i])
      ++j;
    const auto u = static_cast<type_id>(keys[i] >> 32);
    const auto v = static_cast<type_id>(keys[i] & 0xFFFFFFFFu);
    const auto n = static_cast<std::uint64_t>(j - i);
    counts.joint.push_back({u, v, n});
    counts.source_pair_marginal[u] += n;
    counts.target_pair_marginal[v] += n;
    counts.total_pairs += n;
    i = j;
  }
  return counts;
}

cooccurrence_counts count_cooccurrences(std::span<const token> a, std::span<const token> b,
                                        const monotonic_map& map, const bitext_space& space,
                                        const band_options& options)
{
  check_delta(options.delta);
  const interpolator interp(map, space);
  const auto pairs = collect_band_pairs(a, b, interp, options);
  return aggregate_counts(pairs, a, b, options.content_only);
}

} // namespace lexacq

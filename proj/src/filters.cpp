#include "lexacq/filters.hpp"

#include "lexacq/error.hpp"

#include <set>

namespace lexacq {

namespace {

template <typename Pred>
filter_result partition(const lexicon& entries, Pred&& remove)
{
  filter_result out;
  for (const auto& e : entries)
    (remove(e) ? out.removed : out.kept).push_back(e);
  return out;
}

} // namespace

filter_result mrd_filter(const lexicon& entries, const pair_list& mrd, const normalization& rule)
{
  return partition(entries, [&](const lexicon_entry& e) {
    return mrd.contains(normalize(e.source, rule), normalize(e.target, rule));
  });
}

filter_result corpus_filter(const lexicon& entries, const lexicon& other, const normalization& rule)
{
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& e : other)
    seen.emplace(normalize(e.source, rule), normalize(e.target, rule));
  return partition(entries, [&](const lexicon_entry& e) {
    return seen.count({normalize(e.source, rule), normalize(e.target, rule)}) != 0;
  });
}

double exact_match_fraction(const lexicon& entries, const normalization& rule)
{
  if (entries.empty())
    throw argument_error("exact-match fraction of an empty lexicon is undefined");
  std::size_t same = 0;
  for (const auto& e : entries)
    if (normalize(e.source, rule) == normalize(e.target, rule))
      ++same;
  return static_cast<double>(same) / static_cast<double>(entries.size());
}

} // namespace lexacq

#ifndef LEXACQ_FILTERS_HPP
#define LEXACQ_FILTERS_HPP

#include "lexacq/corpus_io.hpp"
#include "lexacq/lexicon.hpp"

namespace lexacq {

struct filter_result
{
  lexicon kept;
  lexicon removed;
};

// Removes entries whose normalized pair appears in a bilingual dictionary.
filter_result mrd_filter(const lexicon& entries, const pair_list& mrd, const normalization& rule = {});

// Removes entries also induced from another corpus.
filter_result corpus_filter(const lexicon& entries, const lexicon& other, const normalization& rule = {});

// Fraction of entries whose two sides normalize to the same form.
// Throws argument_error on an empty lexicon.
double exact_match_fraction(const lexicon& entries, const normalization& rule = {});

} // namespace lexacq

#endif

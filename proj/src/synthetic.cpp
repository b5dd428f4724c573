#include "lexacq/synthetic.hpp"

#include "lexacq/error.hpp"
#include "lexacq/random.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace lexacq {

namespace {

constexpr const char* onsets[] = {"b", "c", "d", "f", "g", "l", "m", "n", "p", "r", "s", "t", "v", "z",
                                  "br", "tr", "st", "pl", "gr", "ch"};
constexpr const char* nuclei[] = {"a", "e", "i", "o", "u", "ai", "ou", "ie"};
constexpr const char* codas[] = {"", "", "", "n", "r", "s", "l", "t"};

template <std::size_t N>
const char* pick(std::mt19937_64& rng, const char* const (&table)[N])
{
  return table[draw_below(rng, N)];
}

std::string random_word(std::mt19937_64& rng, std::size_t syllables)
{
  std::string w;
  for (std::size_t s = 0; s < syllables; ++s) {
    w += pick(rng, onsets);
    w += pick(rng, nuclei);
    w += pick(rng, codas);
  }
  return w;
}

std::string fresh_word(std::mt19937_64& rng, std::set<std::string>& used, std::size_t lo, std::size_t hi)
{
  for (;;) {
    auto w = random_word(rng, lo + draw_below(rng, hi - lo + 1));
    if (used.insert(w).second)
      return w;
  }
}

// Substitutes at most 30% of the letters, so the common subsequence keeps at
// least 70% of the length.
std::string cognate_of(std::mt19937_64& rng, const std::string& source, std::set<std::string>& used)
{
  static constexpr char letters[] = "abcdefghilmnoprstuvz";
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::string w = source;
    const std::size_t edits = 1 + draw_below(rng, std::max<std::size_t>(1, w.size() * 3 / 10));
    for (std::size_t e = 0; e < edits; ++e)
      w[draw_below(rng, w.size())] = letters[draw_below(rng, sizeof(letters) - 1)];
    if (used.insert(w).second)
      return w;
  }
  throw data_error("could not derive a distinct cognate for " + source);
}

struct word_pair
{
  std::string a;
  std::string b;
};

struct placed
{
  std::size_t pair;
  bool function;
};

// Appends a word and returns its token center.
position emit(std::string& text, const std::string& word)
{
  if (!text.empty())
    text += ' ';
  const auto start = static_cast<position>(text.size());
  text += word;
  return (start + static_cast<position>(text.size()) - 1) / 2;
}

} // namespace

synthetic_bitext generate_synthetic_bitext(const synthetic_params& p)
{
  auto in_unit = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (p.lexicon_size < 1 || p.function_words < 1 || p.min_segment < 1 || p.max_segment < p.min_segment ||
      p.permutation_window < 1 || p.target_characters < 1)
    throw argument_error("synthetic sizes must be at least 1");
  if (!in_unit(p.cognate_rate) || !in_unit(p.identical_share) || !in_unit(p.function_rate) ||
      !in_unit(p.omission_rate))
    throw argument_error("synthetic rates must lie in [0, 1]");

  std::mt19937_64 rng(p.seed);
  std::set<std::string> used_a, used_b;
  synthetic_bitext out;

  std::vector<word_pair> functions;
  for (std::size_t k = 0; k < p.function_words; ++k)
    functions.push_back({fresh_word(rng, used_a, 1, 1), fresh_word(rng, used_b, 1, 1)});

  std::vector<word_pair> content;
  for (std::size_t k = 0; k < p.lexicon_size; ++k) {
    word_pair w;
    w.a = fresh_word(rng, used_a, 2, 3);
    if (draw_unit(rng) < p.cognate_rate) {
      ++out.cognates;
      if (draw_unit(rng) < p.identical_share && used_b.insert(w.a).second)
        w.b = w.a;
      else
        w.b = cognate_of(rng, w.a, used_b);
    } else {
      w.b = fresh_word(rng, used_b, 2, 3);
    }
    content.push_back(std::move(w));
  }

  // Zipf weights over a random rank order, so frequency is independent of
  // whether a pair is a cognate.
  std::vector<std::size_t> rank(p.lexicon_size);
  for (std::size_t k = 0; k < rank.size(); ++k)
    rank[k] = k;
  for (std::size_t k = rank.size(); k > 1; --k)
    std::swap(rank[k - 1], rank[draw_below(rng, k)]);
  std::vector<double> cumulative(p.lexicon_size);
  double sum = 0.0;
  for (std::size_t r = 0; r < p.lexicon_size; ++r) {
    sum += 1.0 / std::pow(static_cast<double>(r + 1), p.zipf_exponent);
    cumulative[r] = sum;
  }

  while (out.text_a.size() < p.target_characters) {
    const std::size_t len = p.min_segment + draw_below(rng, p.max_segment - p.min_segment + 1);
    std::vector<placed> words;
    for (std::size_t k = 0; k < len; ++k) {
      if (draw_unit(rng) < p.function_rate) {
        words.push_back({static_cast<std::size_t>(draw_below(rng, functions.size())), true});
      } else {
        const double u = draw_unit(rng) * sum;
        const auto r = static_cast<std::size_t>(
          std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        words.push_back({rank[std::min(r, rank.size() - 1)], false});
      }
    }

    // Omitted content words appear in one half only.
    std::vector<int> side(len, 0);  // 0 both, 1 A only, 2 B only
    for (std::size_t k = 0; k < len; ++k)
      if (!words[k].function && draw_unit(rng) < p.omission_rate)
        side[k] = 1 + static_cast<int>(draw_below(rng, 2));

    std::vector<std::size_t> order(len);
    for (std::size_t k = 0; k < len; ++k)
      order[k] = k;
    for (std::size_t lo = 0; lo < len; lo += p.permutation_window) {
      const std::size_t hi = std::min(len, lo + p.permutation_window);
      for (std::size_t k = hi; k > lo + 1; --k)
        std::swap(order[k - 1], order[lo + draw_below(rng, k - lo)]);
    }

    std::vector<position> center_a(len, -1);
    for (std::size_t k = 0; k < len; ++k)
      if (side[k] != 2) {
        const auto& w = words[k].function ? functions[words[k].pair] : content[words[k].pair];
        center_a[k] = emit(out.text_a, w.a);
      }
    for (std::size_t k : order)
      if (side[k] != 1) {
        const auto& w = words[k].function ? functions[words[k].pair] : content[words[k].pair];
        const position cb = emit(out.text_b, w.b);
        if (side[k] == 0)
          out.alignment.push_back({center_a[k], cb});
      }
    out.text_a += " .";
    out.text_b += " .";
  }
  out.text_a += '\n';
  out.text_b += '\n';
  std::sort(out.alignment.begin(), out.alignment.end());

  for (const auto& w : content)
    out.lexicon.emplace_back(w.a, w.b);
  for (const auto& w : functions) {
    out.function_pairs.emplace_back(w.a, w.b);
    out.stoplist_a.push_back(w.a);
    out.stoplist_b.push_back(w.b);
  }
  std::sort(out.lexicon.begin(), out.lexicon.end());
  std::sort(out.function_pairs.begin(), out.function_pairs.end());
  std::sort(out.stoplist_a.begin(), out.stoplist_a.end());
  std::sort(out.stoplist_b.begin(), out.stoplist_b.end());
  return out;
}

} // namespace lexacq

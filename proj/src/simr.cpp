#include "lexacq/simr.hpp"

#include "lexacq/error.hpp"
#include "lexacq/utf8.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace lexacq {

void simr_params::validate() const
{
  if (chain_size < 4)
    throw argument_error("chain_size must be at least 4");
  if (!(lcsr_threshold > 0.0 && lcsr_threshold <= 1.0))
    throw argument_error("lcsr_threshold must lie in (0, 1]");
  if (!(max_slope_deviation > 0.0))
    throw argument_error("max_slope_deviation must be positive");
  if (!(max_rms_error > 0.0))
    throw argument_error("max_rms_error must be positive");
  if (!(search_widening > 1.0))
    throw argument_error("search_widening must exceed 1");
  if (!(initial_span > 0.0))
    throw argument_error("initial_span must be positive");
}

match_heuristic make_heuristic(heuristic_kind kind, std::shared_ptr<const pair_list> resources)
{
  if (kind == heuristic_kind::seed_lexicon && (!resources || resources->empty()))
    throw argument_error("seed-lexicon heuristic needs a non-empty pair list");
  return {kind, std::move(resources)};
}

std::size_t lcs_length(std::u32string_view a, std::u32string_view b)
{
  if (a.size() < b.size())
    std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = a[i - 1] == b[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

double lcsr(std::string_view a, std::string_view b)
{
  if (a.empty() || b.empty())
    throw argument_error("lcsr needs two non-empty forms");
  const auto ua = utf8::decode(a);
  const auto ub = utf8::decode(b);
  return static_cast<double>(lcs_length(ua, ub)) / static_cast<double>(std::max(ua.size(), ub.size()));
}

std::size_t letter_count(std::u32string_view form)
{
  return static_cast<std::size_t>(std::count_if(form.begin(), form.end(), utf8::is_letter));
}

namespace {

constexpr std::size_t min_cognate_letters = 4;

struct decoded_vocab
{
  std::vector<std::u32string> forms;
  std::vector<bool> word;
  std::vector<std::size_t> letters;

  explicit decoded_vocab(const vocabulary& v)
  {
    forms.reserve(v.size());
    for (type_id t = 0; t < v.size(); ++t) {
      forms.push_back(utf8::decode(v.form(t)));
      word.push_back(!forms.back().empty() && utf8::is_word_char(forms.back().front()));
      letters.push_back(letter_count(forms.back()));
    }
  }
};

bool has_kind(std::span<const match_heuristic> hs, heuristic_kind k)
{
  return std::any_of(hs.begin(), hs.end(), [k](const match_heuristic& h) { return h.kind == k; });
}

bool cognate(const std::u32string& a, std::size_t a_letters, const std::u32string& b, std::size_t b_letters,
             double threshold)
{
  if (a_letters < min_cognate_letters || b_letters < min_cognate_letters)
    return false;
  const auto longer = std::max(a.size(), b.size());
  const auto shorter = std::min(a.size(), b.size());
  // LCS never exceeds the shorter form.
  if (static_cast<double>(shorter) / static_cast<double>(longer) < threshold)
    return false;
  return static_cast<double>(lcs_length(a, b)) / static_cast<double>(longer) >= threshold;
}

} // namespace

type_match_table build_type_matches(const vocabulary& a, const vocabulary& b,
                                    std::span<const match_heuristic> heuristics, const simr_params& params)
{
  const decoded_vocab da(a);
  const decoded_vocab db(b);
  const bool exact = has_kind(heuristics, heuristic_kind::exact_match);
  const bool cognates = has_kind(heuristics, heuristic_kind::cognate_lcsr);

  std::map<std::string, std::vector<type_id>> seeds;
  for (const auto& h : heuristics) {
    if (h.kind != heuristic_kind::seed_lexicon || !h.resources)
      continue;
    for (const auto& [s, t] : h.resources->pairs)
      if (const auto v = b.find(t))
        seeds[s].push_back(*v);
  }

  // Cognate candidates bucketed by form length so each source type only
  // visits targets whose length can reach the threshold.
  std::map<std::size_t, std::vector<type_id>> by_length;
  if (cognates)
    for (type_id v = 0; v < db.forms.size(); ++v)
      if (db.word[v] && db.letters[v] >= min_cognate_letters)
        by_length[db.forms[v].size()].push_back(v);

  type_match_table table(da.forms.size());

#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t u = 0; u < da.forms.size(); ++u) {
    if (!da.word[u])
      continue;
    auto& out = table[u];
    if (exact)
      if (const auto v = b.find(a.form(static_cast<type_id>(u))); v && db.word[*v])
        out.push_back(*v);
    if (const auto it = seeds.find(a.form(static_cast<type_id>(u))); it != seeds.end())
      for (type_id v : it->second)
        if (db.word[v])
          out.push_back(v);
    if (cognates && da.letters[u] >= min_cognate_letters) {
      const double len = static_cast<double>(da.forms[u].size());
      // Loose length window; cognate() applies the exact test.
      const auto lo = static_cast<std::size_t>(std::max(0.0, std::floor(len * params.lcsr_threshold) - 1.0));
      const auto hi = static_cast<std::size_t>(std::ceil(len / params.lcsr_threshold) + 1.0);
      for (auto it = by_length.lower_bound(lo); it != by_length.end() && it->first <= hi; ++it)
        for (type_id v : it->second)
          if (cognate(da.forms[u], da.letters[u], db.forms[v], db.letters[v], params.lcsr_threshold))
            out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return table;
}

namespace reference {

type_match_table build_type_matches(const vocabulary& a, const vocabulary& b,
                                    std::span<const match_heuristic> heuristics, const simr_params& params)
{
  const decoded_vocab da(a);
  const decoded_vocab db(b);
  type_match_table table(da.forms.size());
  for (type_id u = 0; u < da.forms.size(); ++u) {
    if (!da.word[u])
      continue;
    for (type_id v = 0; v < db.forms.size(); ++v) {
      if (!db.word[v])
        continue;
      bool hit = false;
      for (const auto& h : heuristics) {
        switch (h.kind) {
        case heuristic_kind::exact_match:
          hit = hit || a.form(u) == b.form(v);
          break;
        case heuristic_kind::seed_lexicon:
          hit = hit || (h.resources && h.resources->contains(a.form(u), b.form(v)));
          break;
        case heuristic_kind::cognate_lcsr:
          hit = hit || (da.letters[u] >= min_cognate_letters && db.letters[v] >= min_cognate_letters
                        && lcsr(a.form(u), b.form(v)) >= params.lcsr_threshold);
          break;
        }
      }
      if (hit)
        table[u].push_back(v);
    }
  }
  return table;
}

} // namespace reference

candidate_generator::candidate_generator(const tokenized_half& a, const tokenized_half& b,
                                         std::span<const match_heuristic> heuristics,
                                         const simr_params& params)
  : matches_(build_type_matches(a.vocab, b.vocab, heuristics, params))
{
  for (const auto& t : a.tokens) {
    if (!t.word)
      continue;
    a_centers_.push_back(t.center);
    a_types_.push_back(t.type);
  }
  b_centers_by_type_.resize(b.vocab.size());
  for (const auto& t : b.tokens)
    if (t.word)
      b_centers_by_type_[t.type].push_back(t.center);
}

std::vector<correspondence_point> candidate_generator::generate(const search_rect& rect) const
{
  std::vector<correspondence_point> out;
  auto it = std::lower_bound(a_centers_.begin(), a_centers_.end(), rect.x_begin);
  for (; it != a_centers_.end() && *it < rect.x_end; ++it) {
    const auto i = static_cast<std::size_t>(it - a_centers_.begin());
    for (type_id v : matches_[a_types_[i]]) {
      const auto& ys = b_centers_by_type_[v];
      for (auto y = std::lower_bound(ys.begin(), ys.end(), rect.y_begin); y != ys.end() && *y < rect.y_end; ++y)
        out.push_back({*it, *y});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<correspondence_point> generate_candidates(const search_rect& rect, const tokenized_half& a,
                                                      const tokenized_half& b,
                                                      std::span<const match_heuristic> heuristics,
                                                      const simr_params& params)
{
  return candidate_generator(a, b, heuristics, params).generate(rect);
}

std::optional<line_fit> fit_line(std::span<const correspondence_point> points)
{
  const auto n = static_cast<double>(points.size());
  if (points.size() < 2)
    return std::nullopt;
  double mx = 0, my = 0;
  for (const auto& p : points) {
    mx += static_cast<double>(p.x);
    my += static_cast<double>(p.y);
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (const auto& p : points) {
    const double dx = static_cast<double>(p.x) - mx;
    sxx += dx * dx;
    sxy += dx * (static_cast<double>(p.y) - my);
  }
  if (sxx == 0.0)
    return std::nullopt;
  line_fit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0;
  for (const auto& p : points) {
    const double r = static_cast<double>(p.y) - (my + fit.slope * (static_cast<double>(p.x) - mx));
    sse += r * r;
  }
  fit.rms = std::sqrt(sse / n);
  return fit;
}

bool accept_chain(std::span<const correspondence_point> points, const bitext_space& space,
                  const simr_params& params)
{
  if (points.size() != params.chain_size)
    return false;
  std::set<position> xs, ys;
  for (const auto& p : points)
    if (!xs.insert(p.x).second || !ys.insert(p.y).second)
      return false;
  const auto fit = fit_line(points);
  if (!fit)
    return false;
  const double diagonal = space.slope();
  if (std::fabs(fit->slope - diagonal) > params.max_slope_deviation * diagonal)
    return false;
  return fit->rms <= params.max_rms_error;
}

namespace {

struct column
{
  position x;
  std::vector<position> ys;
};

std::vector<column> group_columns(const std::vector<correspondence_point>& cands)
{
  std::vector<column> cols;
  for (const auto& p : cands) {
    if (cols.empty() || cols.back().x != p.x)
      cols.push_back({p.x, {}});
    cols.back().ys.push_back(p.y);
  }
  return cols;
}

// Nearest point to the guide line in each column, never reusing a y.
bool pick_chain(std::span<const column> cols, double slope, double intercept,
                std::vector<correspondence_point>& chain)
{
  chain.clear();
  for (const auto& c : cols) {
    const double expected = slope * static_cast<double>(c.x) + intercept;
    position best = 0;
    double best_dev = INFINITY;
    for (position y : c.ys) {
      const double dev = std::fabs(static_cast<double>(y) - expected);
      const bool used = std::any_of(chain.begin(), chain.end(), [y](const auto& p) { return p.y == y; });
      if (!used && dev < best_dev) {
        best_dev = dev;
        best = y;
      }
    }
    if (!std::isfinite(best_dev))
      return false;
    chain.push_back({c.x, best});
  }
  return true;
}

std::optional<std::vector<correspondence_point>>
find_chain(const std::vector<column>& cols, double slope, double intercept, const bitext_space& space,
           const simr_params& params)
{
  const std::size_t k = params.chain_size;
  std::vector<correspondence_point> chain;
  for (std::size_t w = 0; w + k <= cols.size(); ++w) {
    const std::span<const column> window(cols.data() + w, k);
    if (!pick_chain(window, slope, intercept, chain))
      continue;
    if (accept_chain(chain, space, params))
      return chain;
    // One refinement pass against the chain's own fit.
    if (const auto fit = fit_line(chain)) {
      if (pick_chain(window, fit->slope, fit->intercept, chain) && accept_chain(chain, space, params))
        return chain;
    }
  }
  return std::nullopt;
}

} // namespace

simr_result map_bitext(const tokenized_half& a, const tokenized_half& b, const bitext_space& space,
                       std::span<const match_heuristic> heuristics, const simr_params& params)
{
  params.validate();
  if (a.tokens.empty() || b.tokens.empty())
    throw argument_error("map_bitext needs two non-empty halves");

  simr_result result;
  const candidate_generator generator(a, b, heuristics, params);
  const double slope = space.slope();
  const double margin = 3.0 * params.max_rms_error;

  position next_x = 0;       // first x the next rectangle may cover
  double frontier_x = 0.0;   // guide line passes through the frontier
  double frontier_y = 0.0;
  double span = params.initial_span;

  while (next_x < space.width) {
    search_rect rect;
    rect.x_begin = next_x;
    rect.x_end = std::min<position>(space.width, next_x + static_cast<position>(std::ceil(span)));
    // y extent grows with span even once x is clamped at the terminal edge.
    const double reach = static_cast<double>(next_x) - frontier_x + span;
    rect.y_begin = std::max<position>(0, static_cast<position>(std::floor(frontier_y - margin)));
    rect.y_end = std::min<position>(
      space.height, static_cast<position>(std::ceil(frontier_y + reach * slope * (1.0 + params.max_slope_deviation) + margin)));
    ++result.searches;

    const auto cols = group_columns(generator.generate(rect));
    const auto chain = find_chain(cols, slope, frontier_y - slope * frontier_x, space, params);
    if (chain) {
      for (const auto& p : *chain)
        result.map.try_insert(p);
      ++result.chains_accepted;
      const auto& last = chain->back();
      const auto fit = fit_line(*chain);
      frontier_x = static_cast<double>(last.x);
      frontier_y = fit ? fit->slope * frontier_x + fit->intercept : static_cast<double>(last.y);
      next_x = last.x + 1;
      span = params.initial_span;
      continue;
    }
    if (rect.x_end >= space.width && rect.y_end >= space.height)
      break;
    span *= params.search_widening;
  }

  if (result.chains_accepted == 0)
    result.diagnostics.push_back("no chain accepted; bitext map is empty");
  return result;
}

} // namespace lexacq

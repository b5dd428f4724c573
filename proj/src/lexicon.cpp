#include "lexacq/lexicon.hpp"

#include "lexacq/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

namespace lexacq {

contingency_table contingency_table::from_marginals(std::uint64_t n11, std::uint64_t row,
                                                    std::uint64_t column, std::uint64_t total)
{
  if (n11 > row || n11 > column || row + column - n11 > total)
    throw argument_error("contingency marginals inconsistent with n11");
  contingency_table t;
  t.n11 = n11;
  t.n12 = row - n11;
  t.n21 = column - n11;
  t.n22 = total - row - column + n11;
  return t;
}

double g2_score(const contingency_table& t)
{
  const double n = static_cast<double>(t.total());
  if (t.total() == 0)
    throw argument_error("g2_score needs a non-empty table");

  const double cells[2][2] = {{static_cast<double>(t.n11), static_cast<double>(t.n12)},
                              {static_cast<double>(t.n21), static_cast<double>(t.n22)}};
  const double rows[2] = {cells[0][0] + cells[0][1], cells[1][0] + cells[1][1]};
  const double cols[2] = {cells[0][0] + cells[1][0], cells[0][1] + cells[1][1]};

  double sum = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double observed = cells[i][j];
      if (observed == 0.0)
        continue;
      const double expected = rows[i] * cols[j] / n;
      sum += observed * std::log(observed / expected);
    }
  return std::max(0.0, 2.0 * sum);
}

bool negatively_associated(const contingency_table& t)
{
  // n11 * N < row * column, in long double to stay exact at corpus scale.
  return static_cast<long double>(t.n11) * static_cast<long double>(t.total())
       < static_cast<long double>(t.row()) * static_cast<long double>(t.column());
}

std::vector<double> score_tables(std::span<const contingency_table> tables)
{
  std::vector<double> out(tables.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < tables.size(); ++i)
    out[i] = g2_score(tables[i]);
  return out;
}

namespace reference {

std::vector<double> score_tables(std::span<const contingency_table> tables)
{
  std::vector<double> out;
  out.reserve(tables.size());
  for (const auto& t : tables)
    out.push_back(g2_score(t));
  return out;
}

} // namespace reference

link_assignment competitive_link(std::span<const band_pair> pairs, std::span<const token> a,
                                 std::span<const token> b,
                                 const std::unordered_map<pair_key, double>& type_scores)
{
  struct ranked
  {
    double score;
    double deviation;
    std::uint32_t a;
    std::uint32_t b;
  };

  std::vector<ranked> order;
  order.reserve(pairs.size());
  for (const auto& p : pairs) {
    const auto it = type_scores.find(make_pair_key(a[p.a].type, b[p.b].type));
    if (it == type_scores.end())
      continue;
    order.push_back({it->second, std::fabs(p.deviation), p.a, p.b});
  }
  std::sort(order.begin(), order.end(), [](const ranked& l, const ranked& r) {
    if (l.score != r.score)
      return l.score > r.score;
    return std::tie(l.deviation, l.a, l.b) < std::tie(r.deviation, r.a, r.b);
  });

  std::vector<bool> a_linked(a.size(), false), b_linked(b.size(), false);
  link_assignment links;
  for (const auto& r : order) {
    if (a_linked[r.a] || b_linked[r.b])
      continue;
    a_linked[r.a] = true;
    b_linked[r.b] = true;
    links.push_back({r.a, r.b});
  }
  std::sort(links.begin(), links.end());
  return links;
}

induction_state initial_state(const cooccurrence_counts& counts, const induction_options& options)
{
  std::vector<contingency_table> tables;
  std::vector<pair_key> keys;
  tables.reserve(counts.joint.size());
  keys.reserve(counts.joint.size());
  for (const auto& j : counts.joint) {
    const auto t = contingency_table::from_marginals(j.count, counts.source_pair_marginal[j.source],
                                                     counts.target_pair_marginal[j.target], counts.total_pairs);
    if (options.drop_negative && negatively_associated(t))
      continue;
    tables.push_back(t);
    keys.push_back(make_pair_key(j.source, j.target));
  }
  const auto scores = score_tables(tables);

  induction_state state;
  for (std::size_t i = 0; i < keys.size(); ++i)
    state.scores.emplace_hint(state.scores.end(), keys[i], scores[i]);
  return state;
}

induction_state reestimate(const induction_state& state, std::span<const band_pair> pairs,
                           std::span<const token> a, std::span<const token> b,
                           const induction_options& options)
{
  const std::unordered_map<pair_key, double> lookup(state.scores.begin(), state.scores.end());
  const auto links = competitive_link(pairs, a, b, lookup);

  std::map<pair_key, std::uint64_t> link_counts;
  std::unordered_map<type_id, std::uint64_t> row, column;
  for (const auto& l : links) {
    const auto u = a[l.a].type;
    const auto v = b[l.b].type;
    ++link_counts[make_pair_key(u, v)];
    ++row[u];
    ++column[v];
  }
  const auto total = static_cast<std::uint64_t>(links.size());

  std::vector<contingency_table> tables;
  std::vector<pair_key> keys;
  for (const auto& [key, n] : link_counts) {
    const auto t = contingency_table::from_marginals(n, row[key_source(key)], column[key_target(key)], total);
    if (options.drop_negative && negatively_associated(t))
      continue;
    tables.push_back(t);
    keys.push_back(key);
  }
  const auto scores = score_tables(tables);

  induction_state next;
  next.iterations = state.iterations + 1;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    next.scores.emplace_hint(next.scores.end(), keys[i], scores[i]);
    next.link_counts.emplace_hint(next.link_counts.end(), keys[i], link_counts[keys[i]]);
  }
  return next;
}

namespace {

bool same_fixed_point(const induction_state& x, const induction_state& y)
{
  if (x.link_counts != y.link_counts || x.scores.size() != y.scores.size())
    return false;
  return std::equal(x.scores.begin(), x.scores.end(), y.scores.begin(),
                    [](const auto& l, const auto& r) { return l.first == r.first; });
}

} // namespace

induction_result induce_lexicon(const cooccurrence_counts& counts, std::span<const band_pair> pairs,
                                const tokenized_half& a, const tokenized_half& b,
                                const induction_options& options)
{
  induction_result result;
  auto state = initial_state(counts, options);
  if (state.scores.empty()) {
    result.converged = true;
    return result;
  }

  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    auto next = reestimate(state, pairs, a.tokens, b.tokens, options);
    const bool fixed = same_fixed_point(state, next);
    state = std::move(next);
    if (fixed) {
      result.converged = true;
      break;
    }
  }
  result.iterations = state.iterations;

  for (const auto& [key, score] : state.scores) {
    lexicon_entry e;
    e.source = a.vocab.form(key_source(key));
    e.target = b.vocab.form(key_target(key));
    e.score = score;
    e.n11 = counts.joint_of(key_source(key), key_target(key));
    const auto lc = state.link_counts.find(key);
    e.link_count = lc == state.link_counts.end() ? 0 : lc->second;
    result.entries.push_back(std::move(e));
  }
  assign_plateaus(result.entries);
  sort_lexicon(result.entries);
  return result;
}

namespace {

long long rounded_score(double score)
{
  return std::llround(score * 1e6);
}

} // namespace

void assign_plateaus(lexicon& entries)
{
  std::set<long long, std::greater<>> levels;
  for (const auto& e : entries)
    levels.insert(rounded_score(e.score));
  std::map<long long, std::size_t, std::greater<>> index;
  std::size_t k = 0;
  for (long long level : levels)
    index.emplace(level, ++k);
  for (auto& e : entries)
    e.plateau = index.at(rounded_score(e.score));
}

void sort_lexicon(lexicon& entries)
{
  std::sort(entries.begin(), entries.end(), [](const lexicon_entry& l, const lexicon_entry& r) {
    if (l.plateau != r.plateau)
      return l.plateau < r.plateau;
    if (l.score != r.score)
      return l.score > r.score;
    return std::tie(l.source, l.target) < std::tie(r.source, r.target);
  });
}

namespace {

std::set<std::string> bitext_types(const tokenized_half& half, bool content_only)
{
  std::set<std::string> types;
  for (const auto& t : half.tokens)
    if (content_only ? t.content : t.word)
      types.insert(half.type_form(t));
  return types;
}

struct recall_universe
{
  std::set<std::string> a;
  std::set<std::string> b;
  double size;

  recall_universe(const tokenized_half& ha, const tokenized_half& hb, bool content_only)
    : a(bitext_types(ha, content_only)), b(bitext_types(hb, content_only)),
      size(static_cast<double>(a.size() + b.size()))
  {
    if (a.empty() && b.empty())
      throw argument_error("recall is undefined on a bitext without types");
  }
};

} // namespace

double compute_recall(const lexicon& entries, const tokenized_half& a, const tokenized_half& b,
                      bool content_only)
{
  const recall_universe universe(a, b, content_only);
  std::set<std::string> covered_a, covered_b;
  for (const auto& e : entries) {
    if (universe.a.count(e.source))
      covered_a.insert(e.source);
    if (universe.b.count(e.target))
      covered_b.insert(e.target);
  }
  return static_cast<double>(covered_a.size() + covered_b.size()) / universe.size;
}

std::vector<double> recall_by_plateau(const lexicon& entries, const tokenized_half& a,
                                      const tokenized_half& b, bool content_only)
{
  const recall_universe universe(a, b, content_only);
  std::size_t deepest = 0;
  for (const auto& e : entries)
    deepest = std::max(deepest, e.plateau);
  std::vector<std::vector<const lexicon_entry*>> by_plateau(deepest + 1);
  for (const auto& e : entries)
    by_plateau[e.plateau].push_back(&e);

  std::vector<double> curve;
  std::set<std::string> covered_a, covered_b;
  for (std::size_t k = 1; k <= deepest; ++k) {
    for (const auto* e : by_plateau[k]) {
      if (universe.a.count(e->source))
        covered_a.insert(e->source);
      if (universe.b.count(e->target))
        covered_b.insert(e->target);
    }
    curve.push_back(static_cast<double>(covered_a.size() + covered_b.size()) / universe.size);
  }
  return curve;
}

recall_threshold threshold_from_curve(std::span<const double> cumulative, double target_recall)
{
  if (!(target_recall > 0.0 && target_recall <= 1.0))
    throw argument_error("target recall must lie in (0, 1]");
  recall_threshold out;
  for (std::size_t k = 0; k < cumulative.size(); ++k) {
    out.cutoff = k + 1;
    out.recall = cumulative[k];
    if (cumulative[k] >= target_recall) {
      out.reached = true;
      return out;
    }
  }
  return out;
}

recall_threshold threshold_by_recall(const lexicon& entries, double target_recall, const tokenized_half& a,
                                     const tokenized_half& b, bool content_only)
{
  const auto curve = recall_by_plateau(entries, a, b, content_only);
  return threshold_from_curve(curve, target_recall);
}

lexicon cut_at_plateau(const lexicon& entries, std::size_t cutoff)
{
  lexicon out;
  for (const auto& e : entries)
    if (e.plateau <= cutoff)
      out.push_back(e);
  return out;
}

} // namespace lexacq

#include "lexacq/eval_stats.hpp"

#include "lexacq/random.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>

namespace lexacq {

std::string_view to_string(verdict v)
{
  switch (v) {
  case verdict::invalid: return "invalid";
  case verdict::v: return "V";
  case verdict::p: return "P";
  case verdict::i: return "I";
  case verdict::skipped: return "skipped";
  }
  return "?";
}

std::optional<verdict> parse_verdict(std::string_view text)
{
  std::string lower;
  for (char c : text)
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "invalid")
    return verdict::invalid;
  if (lower == "v")
    return verdict::v;
  if (lower == "p")
    return verdict::p;
  if (lower == "i")
    return verdict::i;
  if (lower == "skipped" || lower == "skip")
    return verdict::skipped;
  return std::nullopt;
}

bool check_annotation(const annotation& a)
{
  if (!is_valid_type(a.judgement)) {
    if (a.specific || a.general)
      throw malformed_annotation_error(std::string(to_string(a.judgement)) +
                                       " verdict cannot carry Specific/General flags");
    return false;
  }
  return !a.specific && !a.general;
}

std::string_view to_string(group_validity g)
{
  switch (g) {
  case group_validity::invalid: return "invalid";
  case group_validity::v: return "V";
  case group_validity::p: return "P";
  case group_validity::i: return "I";
  case group_validity::unclassified_valid: return "unclassified-valid";
  case group_validity::none: return "none";
  }
  return "?";
}

group_annotation group_entry(std::span<const annotation> entry, const group_options& options)
{
  if (options.quorum < 2)
    throw argument_error("group quorum must be at least 2");

  group_annotation g;
  if (entry.empty())
    return g;
  g.entry_id = entry.front().entry_id;

  std::set<std::string> seen;
  std::size_t invalid = 0, v = 0, p = 0, i = 0, specific = 0, general = 0;
  for (const auto& a : entry) {
    if (a.entry_id != g.entry_id)
      throw argument_error("group_entry given annotations of several entries");
    if (!seen.insert(a.annotator).second)
      throw data_error("annotator " + a.annotator + " annotated entry " + a.entry_id + " twice");
    switch (a.judgement) {
    case verdict::invalid: ++invalid; break;
    case verdict::v: ++v; break;
    case verdict::p: ++p; break;
    case verdict::i: ++i; break;
    case verdict::skipped: break;
    }
    specific += a.specific ? 1 : 0;
    general += a.general ? 1 : 0;
  }

  const std::size_t q = options.quorum;
  std::vector<std::pair<std::size_t, group_validity>> candidates;
  for (auto [count, cls] : {std::pair{invalid, group_validity::invalid}, std::pair{v, group_validity::v},
                            std::pair{p, group_validity::p}, std::pair{i, group_validity::i}})
    if (count >= q)
      candidates.emplace_back(count, cls);
  const std::size_t valid = v + p + i;
  if (v < q && p < q && i < q && valid >= options.unclassified_threshold)
    candidates.emplace_back(valid, group_validity::unclassified_valid);

  std::size_t best = 0, winners = 0;
  for (const auto& [count, cls] : candidates) {
    if (count > best) {
      best = count;
      winners = 1;
      g.validity = cls;
    } else if (count == best) {
      ++winners;
    }
  }
  if (winners != 1)
    g.validity = group_validity::none;

  g.specific = specific >= q;
  g.general = general >= q;
  return g;
}

std::vector<group_annotation> group_all(std::span<const annotation> all, const group_options& options)
{
  std::map<std::string, std::vector<annotation>> by_entry;
  for (const auto& a : all)
    by_entry[a.entry_id].push_back(a);
  std::vector<group_annotation> out;
  out.reserve(by_entry.size());
  for (const auto& [id, entry] : by_entry)
    out.push_back(group_entry(entry, options));
  return out;
}

precision_summary summarize_precision(std::span<const group_annotation> groups)
{
  if (groups.empty())
    throw argument_error("precision summary of an empty annotation set");
  std::size_t v = 0, p = 0, i = 0, u = 0, spec = 0, gen = 0, both = 0;
  for (const auto& g : groups) {
    switch (g.validity) {
    case group_validity::v: ++v; break;
    case group_validity::p: ++p; break;
    case group_validity::i: ++i; break;
    case group_validity::unclassified_valid: ++u; break;
    default: break;
    }
    if (g.specific && g.general)
      ++both;
    else if (g.specific)
      ++spec;
    else if (g.general)
      ++gen;
  }
  const double n = static_cast<double>(groups.size());
  auto pct = [n](std::size_t k) { return 100.0 * static_cast<double>(k) / n; };
  precision_summary s;
  s.entries = groups.size();
  s.pct_v = pct(v);
  s.pct_p = pct(p);
  s.pct_i = pct(i);
  s.pct_unclassified = pct(u);
  s.pct_all_valid = pct(v + p + i + u);
  s.pct_specific_only = pct(spec);
  s.pct_general_only = pct(gen);
  s.pct_both = pct(both);
  return s;
}

kappa_result cohen_kappa(std::span<const int> a, std::span<const int> b)
{
  if (a.size() != b.size())
    throw argument_error("kappa label sequences differ in length");
  kappa_result r;
  r.items = a.size();
  if (r.items < 2)
    return r;

  std::map<int, std::size_t> ma, mb;
  std::size_t agree = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ++ma[a[k]];
    ++mb[b[k]];
    agree += a[k] == b[k] ? 1 : 0;
  }
  const double n = static_cast<double>(r.items);
  r.p_o = static_cast<double>(agree) / n;
  for (const auto& [label, count] : ma) {
    const auto it = mb.find(label);
    if (it != mb.end())
      r.p_e += (static_cast<double>(count) / n) * (static_cast<double>(it->second) / n);
  }
  if (r.p_e >= 1.0)
    return r;
  r.kappa = (r.p_o - r.p_e) / (1.0 - r.p_e);
  r.defined = true;
  return r;
}

namespace {

enum retain_label { rejected = 0, kept = 1, undecided = 2 };

int retain_of(verdict v)
{
  if (v == verdict::invalid)
    return rejected;
  return is_valid_type(v) ? kept : undecided;
}

int retain_of(group_validity g)
{
  if (g == group_validity::invalid)
    return rejected;
  return retained(g) ? kept : undecided;
}

int type_of(verdict v) { return static_cast<int>(v); }

int type_of(group_validity g)
{
  switch (g) {
  case group_validity::v: return type_of(verdict::v);
  case group_validity::p: return type_of(verdict::p);
  case group_validity::i: return type_of(verdict::i);
  default: return -1;
  }
}

} // namespace

kappa_slices kappa_labels(const std::string& annotator, std::span<const annotation> all,
                          std::span<const group_annotation> groups)
{
  std::map<std::string, const annotation*> mine;
  for (const auto& a : all)
    if (a.annotator == annotator)
      mine[a.entry_id] = &a;

  kappa_slices s;
  for (const auto& g : groups) {
    const auto it = mine.find(g.entry_id);
    const annotation* a = it == mine.end() ? nullptr : it->second;
    const verdict v = a ? a->judgement : verdict::skipped;

    s.retain_a.push_back(retain_of(v));
    s.retain_g.push_back(retain_of(g.validity));

    if (!is_valid_type(v) || !retained(g.validity))
      continue;
    if (type_of(g.validity) >= 0) {
      s.type_a.push_back(type_of(v));
      s.type_g.push_back(type_of(g.validity));
    }
    s.specific_a.push_back(a->specific ? 1 : 0);
    s.specific_g.push_back(g.specific ? 1 : 0);
    s.general_a.push_back(a->general ? 1 : 0);
    s.general_g.push_back(g.general ? 1 : 0);
  }
  return s;
}

std::vector<kappa_report> kappa_suite(std::span<const annotation> all, std::span<const group_annotation> groups)
{
  std::set<std::string> annotators;
  for (const auto& a : all)
    annotators.insert(a.annotator);

  std::vector<kappa_report> out;
  for (const auto& who : annotators) {
    const auto s = kappa_labels(who, all, groups);
    kappa_report r;
    r.annotator = who;
    r.retain = cohen_kappa(s.retain_a, s.retain_g);
    r.type = cohen_kappa(s.type_a, s.type_g);
    r.specific = cohen_kappa(s.specific_a, s.specific_g);
    r.general = cohen_kappa(s.general_a, s.general_g);
    out.push_back(std::move(r));
  }
  return out;
}

interval proportion_ci(double p, std::size_t n, double level)
{
  if (!(p >= 0.0 && p <= 1.0))
    throw argument_error("proportion must lie in [0, 1]");
  if (n == 0)
    throw argument_error("sample size must be at least 1");
  if (!(level >= 0.0 && level < 1.0))
    throw argument_error("confidence level must lie in [0, 1)");
  if (level == 0.0)
    return {p, p};
  const boost::math::normal_distribution<double> normal;
  const double z = boost::math::quantile(normal, 0.5 + level / 2.0);
  const double half = z * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return {std::max(0.0, p - half), std::min(1.0, p + half)};
}

namespace {

std::string entry_id(std::size_t k, std::size_t total)
{
  const std::size_t width = std::max<std::size_t>(3, std::to_string(total).size());
  std::string digits = std::to_string(k);
  return "E" + std::string(width - digits.size(), '0') + digits;
}

} // namespace

std::vector<sheet_entry> sample_and_interleave(std::span<const named_lexicon> variants, std::size_t n,
                                               std::uint64_t seed)
{
  for (const auto& v : variants)
    if (v.entries.size() < n)
      throw sampling_error("variant " + v.name + " has " + std::to_string(v.entries.size()) +
                           " entries, fewer than the " + std::to_string(n) + " requested");

  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> picks;
  for (const auto& v : variants) {
    std::vector<std::size_t> idx(v.entries.size());
    for (std::size_t k = 0; k < idx.size(); ++k)
      idx[k] = k;
    for (std::size_t k = 0; k < n; ++k) {
      const auto j = k + static_cast<std::size_t>(draw_below(rng, idx.size() - k));
      std::swap(idx[k], idx[j]);
    }
    idx.resize(n);
    picks.push_back(std::move(idx));
  }

  const std::size_t m = variants.size();
  const std::size_t total = n * m;
  std::vector<sheet_entry> sheet;
  sheet.reserve(total);
  for (std::size_t round = 0; round < n; ++round) {
    const auto rotation = static_cast<std::size_t>(draw_below(rng, m));
    for (std::size_t t = 0; t < m; ++t) {
      const std::size_t v = (rotation + t) % m;
      sheet_entry e;
      e.entry_id = entry_id(sheet.size() + 1, total);
      e.entry = variants[v].entries[picks[v][round]];
      e.variant = v;
      e.variant_name = variants[v].name;
      sheet.push_back(std::move(e));
    }
  }
  return sheet;
}

} // namespace lexacq

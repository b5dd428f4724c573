// One PASS/FAIL line per acceptance criterion; exit status is the number of
// failures. Tolerances are fixed here.
#include "lexacq/filters.hpp"
#include "lexacq/formats.hpp"
#include "lexacq/manifest.hpp"
#include "lexacq/pipeline.hpp"
#include "lexacq/synthetic.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>

using namespace lexacq;
namespace fs = std::filesystem;

namespace {

constexpr double kappa_tolerance = 1e-12;
constexpr double table_tolerance_pp = 0.01;
constexpr double g2_tolerance = 1e-9;
constexpr double min_precision = 0.80;
constexpr double min_recall = 0.30;
constexpr double end_to_end_budget_s = 300.0;
constexpr double cooccurrence_budget_s = 120.0;

struct outcome
{
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---- co-occurrence -------------------------------------------------------

bool same_counts(const cooccurrence_counts& got, const oracle::counts& want)
{
  if (got.joint.size() != want.joint.size() || got.total_pairs != want.total)
    return false;
  std::size_t k = 0;
  for (const auto& [key, n] : want.joint) {
    const auto& j = got.joint[k++];
    if (j.source != key.first || j.target != key.second || j.count != n)
      return false;
  }
  for (const auto& [u, n] : want.source_instances)
    if (got.source_marginal.at(u) != n)
      return false;
  for (const auto& [v, n] : want.target_instances)
    if (got.target_marginal.at(v) != n)
      return false;
  return true;
}

outcome cooccurrence_oracle()
{
  const auto t0 = std::chrono::steady_clock::now();
  constexpr int bitexts = 1000;
  const double deltas[] = {10, 50, 100, 250};
  const word_list stop = parse_word_list("the\n", list_purpose::stoplist);
  int mismatches = 0;
  std::uint64_t max_tokens = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : mismatches) reduction(max : max_tokens)
  for (int trial = 0; trial < bitexts; ++trial) {
    std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(trial));
    tokenizer_config config;
    config.stoplist = &stop;
    const auto ha = text_half::from_utf8("a", oracle::random_text(rng, 1 + draw_below(rng, 2000), 80, "a"));
    const auto hb = text_half::from_utf8("b", oracle::random_text(rng, 1 + draw_below(rng, 2000), 80, "b"));
    const auto a = tokenize(ha, config);
    const auto b = tokenize(hb, config);
    max_tokens = std::max<std::uint64_t>(max_tokens, std::max(a.tokens.size(), b.tokens.size()));
    const bitext_space space(ha.length(), hb.length());
    const auto map = oracle::random_monotonic_map(rng, space, 40);
    const bool content_only = trial % 2 == 0;
    for (double delta : deltas) {
      const auto got = count_cooccurrences(a.tokens, b.tokens, map, space, {delta, content_only});
      if (!same_counts(got, oracle::all_pairs(a, b, map, space, delta, content_only)))
        ++mismatches;
    }
  }
  const double s = seconds_since(t0);
  return {mismatches == 0 && max_tokens <= 2000 && s < cooccurrence_budget_s,
          std::to_string(bitexts) + " bitexts x 4 deltas, " + std::to_string(mismatches) +
            " mismatches, max " + std::to_string(max_tokens) + " tokens/half, " + fmt("%.1f s", s)};
}

// ---- geometry ------------------------------------------------------------

outcome geometry_properties()
{
  std::mt19937_64 rng(2024);
  constexpr int sets = 10000;
  int failures = 0;
  for (int trial = 0; trial < sets; ++trial) {
    const bitext_space space(1000, 1200);
    bitext_map map;
    const auto n = 1 + draw_below(rng, 30);
    std::vector<correspondence_point> inserted;
    for (std::uint64_t k = 0; k < 3 * n; ++k) {
      const correspondence_point p{static_cast<position>(draw_below(rng, 1000)),
                                   static_cast<position>(draw_below(rng, 1200))};
      const bool clash = map.contains_x(p.x) || map.contains_y(p.y);
      if (map.try_insert(p) == clash) {
        ++failures;
        continue;
      }
      if (clash) {
        try {
          map.insert(p);
          ++failures;  // a conflicting insert must throw
        } catch (const injectivity_error&) {
        }
      } else {
        inserted.push_back(p);
      }
    }
    if (map.size() != inserted.size())
      ++failures;
    const auto mono = monotonize(map);
    const auto& pts = mono.points();
    for (std::size_t k = 1; k < pts.size(); ++k)
      if (pts[k].x <= pts[k - 1].x || pts[k].y <= pts[k - 1].y)
        ++failures;
    if (pts != oracle::monotonize(map.points()))
      ++failures;
    if (!pts.empty()) {
      const interpolator f(mono, space);
      double last = -1.0;
      for (position x = 0; x < space.width; x += 7) {
        const double y = f(static_cast<double>(x));
        if (y < last)
          ++failures;
        last = y;
      }
    }
  }
  return {failures == 0, std::to_string(sets) + " point sets, " + std::to_string(failures) + " violations"};
}

// ---- kappa ---------------------------------------------------------------

outcome kappa_oracle()
{
  std::mt19937_64 rng(77);
  const verdict vs[] = {verdict::invalid, verdict::v, verdict::p, verdict::i, verdict::skipped};
  constexpr int sheets = 500;
  int failures = 0;
  double worst = 0.0;
  std::set<verdict> seen;
  for (int sheet = 0; sheet < sheets; ++sheet) {
    std::vector<annotation> all;
    const auto entries = 2 + draw_below(rng, 399);
    for (std::uint64_t e = 0; e < entries; ++e) {
      const auto lean = vs[draw_below(rng, 5)];
      for (int k = 1; k <= 6; ++k) {
        if (draw_below(rng, 20) == 0)
          continue;
        const auto v = draw_below(rng, 2) ? lean : vs[draw_below(rng, 5)];
        seen.insert(v);
        const bool valid = is_valid_type(v);
        all.push_back({"A" + std::to_string(k), "E" + std::to_string(10000 + e), v, valid && draw_below(rng, 2) != 0,
                       valid && draw_below(rng, 2) != 0});
      }
    }
    const auto groups = group_all(all);
    for (const auto& r : kappa_suite(all, groups)) {
      const auto s = oracle::kappa_slices(r.annotator, all, groups);
      const std::pair<const kappa_result*, oracle::kappa> pairs[] = {{&r.retain, oracle::cohen(s.k1a, s.k1g)},
                                                                     {&r.type, oracle::cohen(s.k2a, s.k2g)},
                                                                     {&r.specific, oracle::cohen(s.k3a, s.k3g)},
                                                                     {&r.general, oracle::cohen(s.k4a, s.k4g)}};
      for (const auto& [got, want] : pairs) {
        if (got->defined != want.defined) {
          ++failures;
          continue;
        }
        if (!got->defined)
          continue;
        const double d = std::max({std::fabs(got->kappa - want.value), std::fabs(got->p_o - want.p_o),
                                   std::fabs(got->p_e - want.p_e)});
        worst = std::max(worst, d);
        if (d > kappa_tolerance)
          ++failures;
      }
    }
  }

  // Two invalid, two V+Specific, two P+Specific+General.
  const std::vector<annotation> worked{{"A1", "E1", verdict::invalid, false, false},
                                       {"A2", "E1", verdict::invalid, false, false},
                                       {"A3", "E1", verdict::v, true, false},
                                       {"A4", "E1", verdict::v, true, false},
                                       {"A5", "E1", verdict::p, true, true},
                                       {"A6", "E1", verdict::p, true, true}};
  const auto g = group_entry(worked);
  const bool example = g.validity == group_validity::unclassified_valid && g.specific && !g.general;

  return {failures == 0 && example && seen.size() == 5,
          std::to_string(sheets) + " sheets, max deviation " + fmt("%.2e", worst) + ", group example " +
            (example ? "unclassified-valid/specific" : "WRONG")};
}

// ---- table shape ---------------------------------------------------------

struct table_row
{
  const char* name;
  int v, p, i, unclassified, specific_only, general_only, both;  // entries out of 400
  double pct_v, pct_p, pct_i, pct_all_valid, pct_specific_only, pct_general_only, pct_both;
};

// Raw annotations of six annotators realizing one group verdict per entry.
std::vector<annotation> realize(const table_row& row)
{
  std::vector<annotation> out;
  int next = 0;
  auto entry = [&](group_validity g, bool specific, bool general) {
    const std::string id = "E" + std::to_string(1000 + next++);
    auto add = [&](int who, verdict v, bool s, bool gen) {
      out.push_back({"A" + std::to_string(who), id, v, s, gen});
    };
    if (g == group_validity::invalid) {
      for (int k = 1; k <= 6; ++k)
        add(k, verdict::invalid, false, false);
      return;
    }
    const bool split = !specific && !general;  // valid with no flag consensus
    auto flags = [&](int k) -> std::pair<bool, bool> {
      if (split)
        return {k % 2 == 1, k % 2 == 0};
      return {specific, general};
    };
    if (g == group_validity::unclassified_valid) {
      for (int k = 1; k <= 2; ++k)
        add(k, verdict::invalid, false, false);
      for (int k = 3; k <= 6; ++k) {
        const auto [s, gen] = flags(k);
        add(k, k <= 4 ? verdict::v : verdict::p, s, gen);
      }
      return;
    }
    const verdict v = g == group_validity::v ? verdict::v : g == group_validity::p ? verdict::p : verdict::i;
    for (int k = 1; k <= 4; ++k) {
      const auto [s, gen] = flags(k);
      add(k, v, s, gen);
    }
    for (int k = 5; k <= 6; ++k)
      add(k, verdict::invalid, false, false);
  };

  std::vector<group_validity> valid;
  valid.insert(valid.end(), static_cast<std::size_t>(row.v), group_validity::v);
  valid.insert(valid.end(), static_cast<std::size_t>(row.p), group_validity::p);
  valid.insert(valid.end(), static_cast<std::size_t>(row.i), group_validity::i);
  valid.insert(valid.end(), static_cast<std::size_t>(row.unclassified), group_validity::unclassified_valid);
  for (std::size_t k = 0; k < valid.size(); ++k) {
    const auto s = static_cast<int>(k);
    const bool specific = s < row.specific_only || (s >= row.specific_only + row.general_only &&
                                                    s < row.specific_only + row.general_only + row.both);
    const bool general = s >= row.specific_only && s < row.specific_only + row.general_only + row.both;
    entry(valid[k], specific, general);
  }
  while (next < 400)
    entry(group_validity::invalid, false, false);
  return out;
}

outcome table_shape()
{
  const table_row rows[] = {
    {"out-of-context", 158, 37, 22, 14, 119, 94, 4, 39.5, 9.25, 5.5, 57.75, 29.75, 23.5, 1},
    {"in-context", 187, 20, 52, 19, 152, 93, 14, 46.75, 5, 13, 69.5, 38, 23.25, 3.5},
  };
  bool pass = true;
  double worst = 0.0;
  for (const auto& row : rows) {
    const auto groups = group_all(realize(row));
    const auto s = summarize_precision(groups);
    const double got[] = {s.pct_v, s.pct_p, s.pct_i, s.pct_all_valid, s.pct_specific_only, s.pct_general_only, s.pct_both};
    const double want[] = {row.pct_v, row.pct_p, row.pct_i, row.pct_all_valid, row.pct_specific_only,
                           row.pct_general_only, row.pct_both};
    for (std::size_t k = 0; k < 7; ++k)
      worst = std::max(worst, std::fabs(got[k] - want[k]));
    const double derived = s.pct_v + s.pct_p + s.pct_i + s.pct_unclassified;
    worst = std::max(worst, std::fabs(derived - row.pct_all_valid));
    pass = pass && s.entries == 400;
  }
  return {pass && worst <= table_tolerance_pp, "2 rows from 2400 raw annotations each, max deviation " +
                                                  fmt("%.4f", worst) + " pp"};
}

// ---- G2 ------------------------------------------------------------------

outcome g2_correctness()
{
  std::mt19937_64 rng(9);
  constexpr int tables = 10000;
  double worst = 0.0, worst_zero = 0.0;
  for (int k = 0; k < tables; ++k) {
    contingency_table t{draw_below(rng, 500), draw_below(rng, 500), draw_below(rng, 500), draw_below(rng, 20000)};
    if (t.total() == 0)
      t.n22 = 1;
    const double want = oracle::g2(static_cast<double>(t.n11), static_cast<double>(t.n12),
                                   static_cast<double>(t.n21), static_cast<double>(t.n22));
    worst = std::max(worst, std::fabs(g2_score(t) - want));

    // Outer products are exactly independent.
    const auto r1 = 1 + draw_below(rng, 100), r2 = 1 + draw_below(rng, 100);
    const auto c1 = 1 + draw_below(rng, 100), c2 = 1 + draw_below(rng, 100);
    worst_zero = std::max(worst_zero, std::fabs(g2_score({r1 * c1, r1 * c2, r2 * c1, r2 * c2})));
  }
  return {worst <= g2_tolerance && worst_zero < g2_tolerance,
          std::to_string(tables) + " tables, max |G2 - oracle| " + fmt("%.2e", worst) + ", max |G2| at independence " +
            fmt("%.2e", worst_zero)};
}

// ---- synthetic end to end -------------------------------------------------

synthetic_params shipped_corpus()
{
  synthetic_params p;
  p.seed = 7;
  return p;  // 400k characters, 500 pairs, 30% cognates, 10% omissions, window 3
}

outcome synthetic_end_to_end()
{
  const auto t0 = std::chrono::steady_clock::now();
  const auto syn = generate_synthetic_bitext(shipped_corpus());
  auto joined = [](const std::vector<std::string>& words) {
    std::string s;
    for (const auto& w : words)
      s += w + '\n';
    return s;
  };
  const auto stop_a = parse_word_list(joined(syn.stoplist_a), list_purpose::stoplist);
  const auto stop_b = parse_word_list(joined(syn.stoplist_b), list_purpose::stoplist);
  acquisition_params params;
  params.tokens_a.stoplist = &stop_a;
  params.tokens_b.stoplist = &stop_b;
  const auto ha = text_half::from_utf8("a", syn.text_a);
  const auto hb = text_half::from_utf8("b", syn.text_b);
  const auto run = acquire_lexicon(ha, hb, params);
  const auto& entries = run.induced.entries;

  const std::set<std::pair<std::string, std::string>> truth(syn.lexicon.begin(), syn.lexicon.end());
  auto precision_at = [&](std::size_t cutoff) {
    std::size_t kept = 0, right = 0;
    for (const auto& e : entries)
      if (e.plateau <= cutoff) {
        ++kept;
        right += truth.count({e.source, e.target});
      }
    return kept ? static_cast<double>(right) / static_cast<double>(kept) : 0.0;
  };
  const auto t = threshold_by_recall(entries, min_recall, run.a, run.b, true);
  const double precision = precision_at(t.cutoff);
  const double top = precision_at(1);
  const double s = seconds_since(t0);
  return {t.reached && precision >= min_precision && top >= min_precision && s < end_to_end_budget_s,
          std::to_string(entries.size()) + " entries; cutoff plateau " + std::to_string(t.cutoff) + ": recall " +
            fmt("%.3f", t.recall) + ", precision " + fmt("%.3f", precision) + "; plateau 1 precision " +
            fmt("%.3f", top) + "; " + fmt("%.1f s", s)};
}

// ---- filter algebra -------------------------------------------------------

outcome filter_algebra()
{
  std::mt19937_64 rng(13);
  constexpr int cases = 1000;
  int failures = 0;
  auto word = [&](char tag) { return std::string(1, tag) + std::to_string(draw_below(rng, 15)); };
  for (int trial = 0; trial < cases; ++trial) {
    lexicon l;
    const auto n = draw_below(rng, 60);
    for (std::uint64_t k = 0; k < n; ++k)
      l.push_back({word('s'), word('t'), static_cast<double>(draw_below(rng, 1000)) / 7.0, 1 + draw_below(rng, 20),
                   draw_below(rng, 30), draw_below(rng, 30)});
    std::string mrd_text;
    const auto m = draw_below(rng, 60);
    for (std::uint64_t k = 0; k < m; ++k)
      mrd_text += word('s') + '\t' + word('t') + '\n';
    const auto mrd = parse_pair_list(mrd_text);
    lexicon other;
    const auto o = draw_below(rng, 60);
    for (std::uint64_t k = 0; k < o; ++k)
      other.push_back({word('s'), word('t'), 1.0, 1, 1, 1});

    for (const auto& r : {mrd_filter(l, mrd), corpus_filter(l, other)}) {
      // kept and removed are complementary subsequences of the input with
      // every field unchanged.
      std::size_t i = 0, j = 0;
      bool ok = r.kept.size() + r.removed.size() == l.size();
      for (const auto& e : l) {
        if (i < r.kept.size() && r.kept[i] == e)
          ++i;
        else if (j < r.removed.size() && r.removed[j] == e)
          ++j;
        else
          ok = false;
      }
      if (!ok || i != r.kept.size() || j != r.removed.size())
        ++failures;
    }
    if (corpus_filter(mrd_filter(l, mrd).kept, other).kept != mrd_filter(corpus_filter(l, other).kept, mrd).kept)
      ++failures;
  }
  return {failures == 0, std::to_string(cases) + " cases, " + std::to_string(failures) + " violations"};
}

// ---- determinism ----------------------------------------------------------

std::vector<std::string> run_all_stages(const fs::path& dir)
{
  const std::string d = dir.string();
  const std::vector<std::string> corpus = {"--a", d + "/a.txt", "--b", d + "/b.txt", "--stop-a", d + "/stop_a.txt",
                                           "--stop-b", d + "/stop_b.txt"};
  auto with = [&](std::vector<std::string> head, const std::vector<std::string>& tail) {
    head.insert(head.end(), tail.begin(), tail.end());
    return head;
  };
  const std::vector<std::vector<std::string>> stages = {
    {"synth", "--out", d, "--seed", "7"},
    with({"tokenize", "--out", d}, corpus),
    with({"map", "--out", d}, corpus),
    with({"cooccur", "--out", d, "--map", d + "/map.tsv"}, corpus),
    with({"induce", "--out", d, "--map", d + "/map.tsv", "--target-recall", "0.3"}, corpus),
    {"filter", "--out", d, "--lexicon", d + "/lexicon.tsv", "--mrd", d + "/function_pairs.tsv", "--cutoff", "200"},
    with({"concord", "--out", d, "--map", d + "/map.tsv", "--source", "x", "--target", "y"}, corpus),
    {"sample", "--out", d, "--seed", "7", "--n", "50", "--variant", "all=" + d + "/lexicon.tsv", "--variant",
     "cut=" + d + "/lexicon_cut.tsv"},
  };
  std::vector<std::string> hashes;
  for (const auto& args : stages) {
    std::ostringstream out, err;
    if (run_cli(args, out, err) != exit_ok)
      throw std::runtime_error(args[0] + " failed: " + err.str());
    const auto m = manifest::from_json(read_file(dir / (args[0] + ".manifest.json")));
    for (const auto& o : m.outputs)
      hashes.push_back(args[0] + ":" + fs::path(o.path).filename().string() + ":" + o.sha256);
    std::string params;
    for (const auto& [key, value] : m.parameters)
      params += key + '=' + value + '\n';
    hashes.push_back(args[0] + ":parameters:" + sha256_hex(params));
  }

  // Annotations derived from the sheet, so eval also runs.
  const auto sheet = parse_sheet(read_file(dir / "sheet.tsv"));
  std::vector<annotation> anns;
  for (std::size_t k = 0; k < sheet.size(); ++k)
    for (int a = 1; a <= 6; ++a) {
      const auto v = (k + static_cast<std::size_t>(a)) % 4 == 0 ? verdict::invalid : verdict::v;
      anns.push_back({"A" + std::to_string(a), sheet[k].entry_id, v, v == verdict::v, false});
    }
  write_file(dir / "annotations.tsv", format_annotations(anns));
  std::ostringstream out, err;
  if (run_cli({"eval", "--out", d, "--annotations", d + "/annotations.tsv", "--sheet", d + "/sheet.tsv"}, out, err) !=
      exit_ok)
    throw std::runtime_error("eval failed: " + err.str());
  const auto m = manifest::from_json(read_file(dir / "eval.manifest.json"));
  for (const auto& o : m.outputs)
    hashes.push_back("eval:" + fs::path(o.path).filename().string() + ":" + o.sha256);
  return hashes;
}

outcome determinism()
{
  const auto base = fs::temp_directory_path() / "lexacq_acceptance_determinism";
  fs::remove_all(base);
  std::vector<std::vector<std::string>> runs;
  for (int k = 0; k < 3; ++k)
    runs.push_back(run_all_stages(base / ("run" + std::to_string(k))));
  const bool same = runs[0] == runs[1] && runs[1] == runs[2];
  fs::remove_all(base);
  return {same && !runs[0].empty(),
          "3 runs of 9 stages, " + std::to_string(runs[0].size()) + " hashed artifacts " +
            (same ? "identical" : "DIFFER")};
}

} // namespace

int main()
{
  const std::vector<std::pair<const char*, std::function<outcome()>>> criteria = {
    {"co-occurrence oracle", cooccurrence_oracle},
    {"geometry properties", geometry_properties},
    {"kappa oracle", kappa_oracle},
    {"table shape reproduction", table_shape},
    {"G2 correctness", g2_correctness},
    {"synthetic end-to-end", synthetic_end_to_end},
    {"filter algebra", filter_algebra},
    {"determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    outcome r;
    try {
      r = check();
    } catch (const std::exception& e) {
      r = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s  %-26s %s\n", r.pass ? "PASS" : "FAIL", name, r.detail.c_str());
    std::fflush(stdout);
    failures += r.pass ? 0 : 1;
  }
  return failures;
}

#include "lexacq/pipeline.hpp"

#include "lexacq/concordance.hpp"
#include "lexacq/error.hpp"
#include "lexacq/eval_stats.hpp"
#include "lexacq/filters.hpp"
#include "lexacq/formats.hpp"
#include "lexacq/manifest.hpp"
#include "lexacq/review_service.hpp"
#include "lexacq/synthetic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <ostream>

namespace fs = std::filesystem;

namespace lexacq {

acquisition acquire_lexicon(const text_half& a, const text_half& b, const acquisition_params& params)
{
  params.simr.validate();
  acquisition out;
  out.a = tokenize(a, params.tokens_a);
  out.b = tokenize(b, params.tokens_b);
  out.space = bitext_space(a.length(), b.length());

  std::vector<match_heuristic> heuristics = params.heuristics;
  if (heuristics.empty()) {
    heuristics.push_back(make_heuristic(heuristic_kind::cognate_lcsr));
    heuristics.push_back(make_heuristic(heuristic_kind::exact_match));
  }
  out.mapping = map_bitext(out.a, out.b, out.space, heuristics, params.simr);
  out.map = monotonize(out.mapping.map);

  const interpolator line(out.map, out.space);
  out.pairs = collect_band_pairs(out.a.tokens, out.b.tokens, line, params.band);
  out.counts = aggregate_counts(out.pairs, out.a.tokens, out.b.tokens, params.band.content_only);
  out.induced = induce_lexicon(out.counts, out.pairs, out.a, out.b, params.induction);
  return out;
}

namespace {

struct options
{
  std::uint64_t seed = 1;
  std::string out = ".";

  std::string a, b, stop_a, stop_b;
  bool fold_diacritics = false;
  std::string map, lexicon;

  double delta = 100.0;
  bool content_only = true;

  simr_params simr;
  std::vector<std::string> heuristics{"cognate", "exact"};
  std::string seed_lexicon;

  std::size_t max_iterations = 10;
  double target_recall = 0.0;

  std::string mrd, subtract;
  std::size_t cutoff = 0;

  std::string source, target;
  std::size_t limit = 10;
  position window = 80;
  bool json = false;

  std::vector<std::string> variants;
  std::size_t n = 100;

  std::string annotations, sheet;
  std::size_t quorum = 3;
  std::size_t unclassified_threshold = 4;
  double ci_level = 0.95;

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string log;
  std::vector<std::string> annotators;
  std::string manifest_path;

  synthetic_params synth;
};

std::string num(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string num(std::size_t v) { return std::to_string(v); }

void require(const std::string& value, const char* flag, const char* stage)
{
  if (value.empty())
    throw argument_error(std::string(stage) + " needs " + flag);
}

fs::path out_path(const options& o, const char* name) { return fs::path(o.out) / name; }

void write_output(manifest& m, const fs::path& path, std::string_view content)
{
  write_file(path, content);
  m.add_output(path);
}

void write_manifest(const options& o, const manifest& m)
{
  write_file(fs::path(o.out) / (m.stage + ".manifest.json"), m.to_json());
}

// Halves and stoplists; tokenizer configs point into this object, so it
// stays where it was built.
struct corpus
{
  std::unique_ptr<text_half> a, b;
  word_list stop_a, stop_b;
  tokenizer_config config_a, config_b;

  corpus(const corpus&) = delete;
  corpus& operator=(const corpus&) = delete;

  corpus(const options& o, manifest& m, const char* stage)
  {
    require(o.a, "--a", stage);
    require(o.b, "--b", stage);
    const normalization rule{o.fold_diacritics};
    a = std::make_unique<text_half>(text_half::from_file("A", o.a));
    m.add_input(o.a);
    b = std::make_unique<text_half>(text_half::from_file("B", o.b));
    m.add_input(o.b);
    config_a.rule = config_b.rule = rule;
    if (!o.stop_a.empty()) {
      stop_a = load_word_list(o.stop_a, list_purpose::stoplist, rule);
      m.add_input(o.stop_a);
      config_a.stoplist = &stop_a;
    }
    if (!o.stop_b.empty()) {
      stop_b = load_word_list(o.stop_b, list_purpose::stoplist, rule);
      m.add_input(o.stop_b);
      config_b.stoplist = &stop_b;
    }
    m.parameters["fold_diacritics"] = o.fold_diacritics ? "true" : "false";
  }
};

void record_simr(const options& o, manifest& m)
{
  m.parameters["chain_size"] = num(o.simr.chain_size);
  m.parameters["lcsr_threshold"] = num(o.simr.lcsr_threshold);
  m.parameters["max_slope_deviation"] = num(o.simr.max_slope_deviation);
  m.parameters["max_rms_error"] = num(o.simr.max_rms_error);
  m.parameters["search_widening"] = num(o.simr.search_widening);
  m.parameters["initial_span"] = num(o.simr.initial_span);
  std::string joined;
  for (const auto& h : o.heuristics)
    joined += (joined.empty() ? "" : ",") + h;
  m.parameters["heuristics"] = joined;
}

std::vector<match_heuristic> heuristics_of(const options& o, manifest& m)
{
  std::vector<match_heuristic> out;
  for (const auto& h : o.heuristics) {
    if (h == "cognate") {
      out.push_back(make_heuristic(heuristic_kind::cognate_lcsr));
    } else if (h == "exact") {
      out.push_back(make_heuristic(heuristic_kind::exact_match));
    } else if (h == "seed") {
      require(o.seed_lexicon, "--seed-lexicon", "the seed heuristic");
      auto seeds = std::make_shared<pair_list>(load_pair_list(o.seed_lexicon, {o.fold_diacritics}));
      m.add_input(o.seed_lexicon);
      out.push_back(make_heuristic(heuristic_kind::seed_lexicon, std::move(seeds)));
    } else {
      throw argument_error("unknown heuristic '" + h + "' (cognate, exact, seed)");
    }
  }
  if (out.empty())
    throw argument_error("at least one matching heuristic is required");
  return out;
}

monotonic_map load_map(const options& o, manifest& m, const char* stage)
{
  require(o.map, "--map", stage);
  const auto points = parse_map(read_file(o.map), o.map);
  m.add_input(o.map);
  try {
    return monotonic_map(points);
  } catch (const argument_error& e) {
    throw data_error(o.map + ": " + e.what());
  }
}

band_options band_of(const options& o, manifest& m)
{
  m.parameters["delta"] = num(o.delta);
  m.parameters["content_only"] = o.content_only ? "true" : "false";
  return {o.delta, o.content_only};
}

lexicon load_lexicon(const std::string& path, manifest& m)
{
  auto entries = parse_lexicon(read_file(path), path);
  m.add_input(path);
  return entries;
}

std::string pairs_tsv(const std::vector<std::pair<std::string, std::string>>& pairs)
{
  std::string out = "#source\ttarget\n";
  for (const auto& [s, t] : pairs)
    out += s + '\t' + t + '\n';
  return out;
}

std::string words_txt(const std::vector<std::string>& words)
{
  std::string out;
  for (const auto& w : words)
    out += w + '\n';
  return out;
}

void stage_synth(const options& o, std::ostream& out)
{
  manifest m{"synth"};
  auto p = o.synth;
  p.seed = o.seed;
  m.parameters["seed"] = std::to_string(o.seed);
  m.parameters["lexicon_size"] = num(p.lexicon_size);
  m.parameters["cognate_rate"] = num(p.cognate_rate);
  m.parameters["omission_rate"] = num(p.omission_rate);
  m.parameters["permutation_window"] = num(p.permutation_window);
  m.parameters["function_rate"] = num(p.function_rate);
  m.parameters["characters"] = num(p.target_characters);
  const auto s = generate_synthetic_bitext(p);
  write_output(m, out_path(o, "a.txt"), s.text_a);
  write_output(m, out_path(o, "b.txt"), s.text_b);
  write_output(m, out_path(o, "stop_a.txt"), words_txt(s.stoplist_a));
  write_output(m, out_path(o, "stop_b.txt"), words_txt(s.stoplist_b));
  write_output(m, out_path(o, "true_lexicon.tsv"), pairs_tsv(s.lexicon));
  write_output(m, out_path(o, "function_pairs.tsv"), pairs_tsv(s.function_pairs));
  write_output(m, out_path(o, "alignment.tsv"), format_map(s.alignment));
  write_manifest(o, m);
  out << "synth: " << s.text_a.size() << "/" << s.text_b.size() << " bytes, " << s.lexicon.size()
      << " true pairs, " << s.cognates << " cognates\n";
}

void stage_tokenize(const options& o, std::ostream& out)
{
  manifest m{"tokenize"};
  corpus c(o, m, "tokenize");
  const auto ta = tokenize(*c.a, c.config_a);
  const auto tb = tokenize(*c.b, c.config_b);
  write_output(m, out_path(o, "tokens_a.tsv"), format_tokens(ta));
  write_output(m, out_path(o, "tokens_b.tsv"), format_tokens(tb));
  write_manifest(o, m);
  out << "tokenize: " << ta.tokens.size() << " / " << tb.tokens.size() << " tokens\n";
}

void stage_map(const options& o, std::ostream& out)
{
  manifest m{"map"};
  corpus c(o, m, "map");
  record_simr(o, m);
  const auto heuristics = heuristics_of(o, m);
  const auto ta = tokenize(*c.a, c.config_a);
  const auto tb = tokenize(*c.b, c.config_b);
  const bitext_space space(c.a->length(), c.b->length());
  const auto result = map_bitext(ta, tb, space, heuristics, o.simr);
  const auto mono = monotonize(result.map);
  write_output(m, out_path(o, "map_raw.tsv"), format_map(result.map.points()));
  write_output(m, out_path(o, "map.tsv"), format_map(mono.points()));
  write_manifest(o, m);
  out << "map: " << result.map.size() << " points from " << result.chains_accepted << " chains, "
      << mono.size() << " after monotonizing\n";
}

void stage_cooccur(const options& o, std::ostream& out)
{
  manifest m{"cooccur"};
  corpus c(o, m, "cooccur");
  const auto mono = load_map(o, m, "cooccur");
  const auto band = band_of(o, m);
  const auto ta = tokenize(*c.a, c.config_a);
  const auto tb = tokenize(*c.b, c.config_b);
  const auto counts = count_cooccurrences(ta.tokens, tb.tokens, mono, {c.a->length(), c.b->length()}, band);

  std::string text = "#source\ttarget\tcount\trow\tcolumn\n";
  for (const auto& j : counts.joint)
    text += ta.vocab.form(j.source) + '\t' + tb.vocab.form(j.target) + '\t' + std::to_string(j.count) + '\t' +
            std::to_string(counts.source_pair_marginal[j.source]) + '\t' +
            std::to_string(counts.target_pair_marginal[j.target]) + '\n';
  write_output(m, out_path(o, "cooccur.tsv"), text);
  write_manifest(o, m);
  out << "cooccur: " << counts.joint.size() << " type pairs, " << counts.total_pairs << " banded pairs\n";
}

void stage_induce(const options& o, std::ostream& out)
{
  manifest m{"induce"};
  corpus c(o, m, "induce");
  const auto mono = load_map(o, m, "induce");
  const auto band = band_of(o, m);
  m.parameters["max_iterations"] = num(o.max_iterations);
  const auto ta = tokenize(*c.a, c.config_a);
  const auto tb = tokenize(*c.b, c.config_b);
  const bitext_space space(c.a->length(), c.b->length());
  const interpolator line(mono, space);
  const auto pairs = collect_band_pairs(ta.tokens, tb.tokens, line, band);
  const auto counts = aggregate_counts(pairs, ta.tokens, tb.tokens, band.content_only);
  const auto result = induce_lexicon(counts, pairs, ta, tb, {o.max_iterations, true});
  write_output(m, out_path(o, "lexicon.tsv"), format_lexicon(result.entries));

  const auto curve = recall_by_plateau(result.entries, ta, tb, band.content_only);
  std::string recall = "#plateau\trecall\n";
  for (std::size_t k = 0; k < curve.size(); ++k)
    recall += std::to_string(k + 1) + '\t' + format_score(curve[k]) + '\n';
  write_output(m, out_path(o, "recall.tsv"), recall);

  out << "induce: " << result.entries.size() << " entries, " << curve.size() << " plateaus, "
      << result.iterations << " passes" << (result.converged ? "" : " (not converged)") << "\n";
  if (o.target_recall > 0.0) {
    m.parameters["target_recall"] = num(o.target_recall);
    const auto t = threshold_from_curve(curve, o.target_recall);
    write_output(m, out_path(o, "lexicon_cut.tsv"), format_lexicon(cut_at_plateau(result.entries, t.cutoff)));
    out << "induce: cutoff plateau " << t.cutoff << ", recall " << format_score(t.recall)
        << (t.reached ? "" : " (target not reached)") << "\n";
  }
  write_manifest(o, m);
}

void stage_filter(const options& o, std::ostream& out)
{
  manifest m{"filter"};
  require(o.lexicon, "--lexicon", "filter");
  auto entries = load_lexicon(o.lexicon, m);
  const normalization rule{o.fold_diacritics};
  lexicon removed;
  if (o.cutoff > 0) {
    m.parameters["cutoff"] = num(o.cutoff);
    lexicon kept;
    for (auto& e : entries)
      (e.plateau <= o.cutoff ? kept : removed).push_back(std::move(e));
    entries = std::move(kept);
  }
  if (!o.mrd.empty()) {
    const auto mrd = load_pair_list(o.mrd, rule);
    m.add_input(o.mrd);
    auto r = mrd_filter(entries, mrd, rule);
    entries = std::move(r.kept);
    removed.insert(removed.end(), r.removed.begin(), r.removed.end());
  }
  if (!o.subtract.empty()) {
    const auto other = load_lexicon(o.subtract, m);
    auto r = corpus_filter(entries, other, rule);
    entries = std::move(r.kept);
    removed.insert(removed.end(), r.removed.begin(), r.removed.end());
  }
  sort_lexicon(removed);
  write_output(m, out_path(o, "kept.tsv"), format_lexicon(entries));
  write_output(m, out_path(o, "removed.tsv"), format_lexicon(removed));
  write_manifest(o, m);
  out << "filter: kept " << entries.size() << ", removed " << removed.size() << "\n";
  if (!entries.empty())
    out << "filter: exact-match fraction of kept " << format_score(exact_match_fraction(entries, rule)) << "\n";
}

void stage_concord(const options& o, std::ostream& out)
{
  manifest m{"concord"};
  require(o.source, "--source", "concord");
  require(o.target, "--target", "concord");
  corpus c(o, m, "concord");
  const auto mono = load_map(o, m, "concord");
  m.parameters["delta"] = num(o.delta);
  m.parameters["limit"] = num(o.limit);
  m.parameters["window"] = std::to_string(o.window);
  m.parameters["source"] = o.source;
  m.parameters["target"] = o.target;
  const auto ta = tokenize(*c.a, c.config_a);
  const auto tb = tokenize(*c.b, c.config_b);
  const interpolator line(mono, {c.a->length(), c.b->length()});
  const normalization rule{o.fold_diacritics};
  const auto instances = build_concordance({normalize(o.source, rule), normalize(o.target, rule)}, *c.a, ta, *c.b,
                                           tb, line, {o.delta, o.limit, o.window});
  const auto text = o.json ? render_json_lines(instances) : render_text(instances);
  write_output(m, out_path(o, o.json ? "concordance.jsonl" : "concordance.txt"), text);
  write_manifest(o, m);
  out << text;
}

void stage_sample(const options& o, std::ostream& out)
{
  manifest m{"sample"};
  if (o.variants.empty())
    throw argument_error("sample needs at least one --variant name=path");
  std::vector<named_lexicon> variants;
  for (const auto& v : o.variants) {
    const auto eq = v.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == v.size())
      throw argument_error("--variant expects name=path, got '" + v + "'");
    variants.push_back({v.substr(0, eq), load_lexicon(v.substr(eq + 1), m)});
  }
  m.parameters["n"] = num(o.n);
  m.parameters["seed"] = std::to_string(o.seed);
  const auto sheet = sample_and_interleave(variants, o.n, o.seed);
  write_output(m, out_path(o, "sheet.tsv"), format_sheet(sheet, true));
  write_output(m, out_path(o, "sheet_blind.tsv"), format_sheet(sheet, false));
  write_manifest(o, m);
  out << "sample: " << sheet.size() << " entries\n";
}

nlohmann::ordered_json summary_json(const std::vector<group_annotation>& groups, double level)
{
  if (groups.empty())
    return {{"entries", 0}};
  const auto s = summarize_precision(groups);
  const auto ci = proportion_ci(s.pct_all_valid / 100.0, s.entries, level);
  return {{"entries", s.entries},
          {"pct_v", s.pct_v},
          {"pct_p", s.pct_p},
          {"pct_i", s.pct_i},
          {"pct_unclassified", s.pct_unclassified},
          {"pct_all_valid", s.pct_all_valid},
          {"pct_specific_only", s.pct_specific_only},
          {"pct_general_only", s.pct_general_only},
          {"pct_both", s.pct_both},
          {"all_valid_ci", {100.0 * ci.lower, 100.0 * ci.upper}}};
}

nlohmann::ordered_json kappa_json(const kappa_result& k)
{
  nlohmann::ordered_json j = {{"items", k.items}, {"p_o", k.p_o}, {"p_e", k.p_e}};
  j["kappa"] = k.defined ? nlohmann::ordered_json(k.kappa) : nlohmann::ordered_json(nullptr);
  return j;
}

void stage_eval(const options& o, std::ostream& out)
{
  manifest m{"eval"};
  require(o.annotations, "--annotations", "eval");
  const auto records = latest_records(parse_annotations(read_file(o.annotations), o.annotations));
  m.add_input(o.annotations);
  m.parameters["quorum"] = num(o.quorum);
  m.parameters["unclassified_threshold"] = num(o.unclassified_threshold);
  m.parameters["ci_level"] = num(o.ci_level);

  const group_options grouping{o.quorum, o.unclassified_threshold};
  const auto groups = group_all(records, grouping);

  nlohmann::ordered_json report;
  report["overall"] = summary_json(groups, o.ci_level);

  if (!o.sheet.empty()) {
    const auto sheet = parse_sheet(read_file(o.sheet), o.sheet);
    m.add_input(o.sheet);
    std::map<std::string, std::string> variant_of;
    std::map<std::string, lexicon> entries_of;
    for (const auto& s : sheet) {
      variant_of[s.entry_id] = s.variant_name;
      entries_of[s.variant_name].push_back(s.entry);
    }
    std::map<std::string, std::vector<group_annotation>> by_variant;
    for (const auto& g : groups) {
      const auto it = variant_of.find(g.entry_id);
      if (it == variant_of.end())
        throw data_error("annotated entry " + g.entry_id + " is not on the sheet");
      by_variant[it->second].push_back(g);
    }
    nlohmann::ordered_json variants = nlohmann::ordered_json::object();
    for (const auto& [name, list] : entries_of) {
      auto j = summary_json(by_variant[name], o.ci_level);
      j["exact_match_fraction"] = exact_match_fraction(list);
      variants[name] = std::move(j);
    }
    report["variants"] = std::move(variants);
  }

  nlohmann::ordered_json kappas = nlohmann::ordered_json::array();
  for (const auto& r : kappa_suite(records, groups))
    kappas.push_back({{"annotator", r.annotator},
                      {"kappa1", kappa_json(r.retain)},
                      {"kappa2", kappa_json(r.type)},
                      {"kappa3", kappa_json(r.specific)},
                      {"kappa4", kappa_json(r.general)}});
  report["kappa"] = std::move(kappas);

  const auto text = report.dump(2) + "\n";
  write_output(m, out_path(o, "report.json"), text);
  write_manifest(o, m);
  out << text;
}

void stage_serve(const options& o, std::ostream& out)
{
  require(o.sheet, "--sheet", "serve");
  require(o.log, "--log", "serve");
  review_config config;
  config.sheet = parse_sheet(read_file(o.sheet), o.sheet);
  config.annotators = o.annotators;
  config.log_path = o.log;
  config.grouping = {o.quorum, o.unclassified_threshold};

  if (!o.manifest_path.empty()) {
    const auto recorded = manifest::from_json(read_file(o.manifest_path), o.manifest_path);
    for (const auto* path : {&o.sheet, &o.a, &o.b, &o.map}) {
      if (path->empty())
        continue;
      const auto hash = recorded_hash(recorded, *path);
      if (!hash.empty())
        config.expected.push_back({*path, hash});
    }
  }
  if (!o.a.empty() && !o.b.empty() && !o.map.empty()) {
    manifest unused;
    corpus c(o, unused, "serve");
    const auto mono = load_map(o, unused, "serve");
    config.corpus = std::make_shared<concordance_source>(std::move(*c.a), std::move(*c.b), c.config_a, c.config_b,
                                                         mono, concordance_options{o.delta, o.limit, o.window});
  }

  review_session session(std::move(config));
  review_server server(session);
  out << "serve: listening on " << o.host << ":" << o.port << "\n" << std::flush;
  server.listen(o.host, o.port);
}

void add_parameters(CLI::App& app, options& o)
{
  app.add_option("--seed", o.seed, "Seed for every random stage")->capture_default_str();
  app.add_option("--out", o.out, "Output directory")->capture_default_str();

  app.add_option("--a", o.a, "Half A text (UTF-8)");
  app.add_option("--b", o.b, "Half B text (UTF-8)");
  app.add_option("--stop-a", o.stop_a, "Stoplist for half A");
  app.add_option("--stop-b", o.stop_b, "Stoplist for half B");
  app.add_flag("--fold-diacritics", o.fold_diacritics, "Strip diacritics when normalizing");
  app.add_option("--map", o.map, "Bitext map (x<TAB>y)");
  app.add_option("--lexicon", o.lexicon, "Lexicon TSV");

  app.add_option("--delta", o.delta, "Band half-width in characters")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--content-only", o.content_only, "Count only content words")->capture_default_str();

  app.add_option("--chain-size", o.simr.chain_size, "Points per chain")->capture_default_str();
  app.add_option("--lcsr-threshold", o.simr.lcsr_threshold, "Cognate LCSR threshold")->capture_default_str();
  app.add_option("--max-slope-deviation", o.simr.max_slope_deviation, "Relative chain slope tolerance")
    ->capture_default_str();
  app.add_option("--max-rms-error", o.simr.max_rms_error, "Chain RMS tolerance in characters")->capture_default_str();
  app.add_option("--search-widening", o.simr.search_widening, "Search rectangle growth factor")->capture_default_str();
  app.add_option("--initial-span", o.simr.initial_span, "Initial search span in characters")->capture_default_str();
  app.add_option("--heuristic", o.heuristics, "Matching heuristics: cognate, exact, seed")->capture_default_str();
  app.add_option("--seed-lexicon", o.seed_lexicon, "Seed translation pairs for the seed heuristic");

  app.add_option("--max-iterations", o.max_iterations, "Re-estimation passes")->capture_default_str();
  app.add_option("--target-recall", o.target_recall, "Cut the lexicon where recall reaches this")
    ->check(CLI::Range(0.0, 1.0));

  app.add_option("--mrd", o.mrd, "Bilingual dictionary whose pairs are removed");
  app.add_option("--subtract", o.subtract, "Lexicon from another corpus whose pairs are removed");
  app.add_option("--cutoff", o.cutoff, "Keep plateaus 1..cutoff (0 keeps all)")->capture_default_str();

  app.add_option("--source", o.source, "Source form of the pair");
  app.add_option("--target", o.target, "Target form of the pair");
  app.add_option("--limit", o.limit, "Concordance instances")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--window", o.window, "Context characters each side")->check(CLI::NonNegativeNumber)
    ->capture_default_str();
  app.add_flag("--json", o.json, "One JSON record per instance");

  app.add_option("--variant", o.variants, "Lexicon variant as name=path (repeatable)");
  app.add_option("--n", o.n, "Entries sampled per variant")->capture_default_str();

  app.add_option("--annotations", o.annotations, "Annotation file (TSV or JSON lines)");
  app.add_option("--sheet", o.sheet, "Annotation sheet with provenance");
  app.add_option("--quorum", o.quorum, "Annotators needed for a group verdict")->capture_default_str();
  app.add_option("--unclassified-threshold", o.unclassified_threshold,
                 "Valid verdicts needed for an unclassified-valid group verdict")->capture_default_str();
  app.add_option("--ci-level", o.ci_level, "Confidence level")->capture_default_str();

  app.add_option("--host", o.host, "Bind address")->capture_default_str();
  app.add_option("--port", o.port, "Bind port")->capture_default_str();
  app.add_option("--log", o.log, "Annotation log file");
  app.add_option("--annotator", o.annotators, "Registered annotator id (repeatable)");
  app.add_option("--manifest", o.manifest_path, "Manifest whose artifact hashes must match");

  app.add_option("--synth-lexicon-size", o.synth.lexicon_size, "True content pairs")->capture_default_str();
  app.add_option("--synth-cognate-rate", o.synth.cognate_rate, "Share of cognate pairs")->capture_default_str();
  app.add_option("--synth-omission-rate", o.synth.omission_rate, "Share of untranslated words")
    ->capture_default_str();
  app.add_option("--synth-permutation-window", o.synth.permutation_window, "Word-order shuffle window")
    ->capture_default_str();
  app.add_option("--synth-function-rate", o.synth.function_rate, "Share of function words")->capture_default_str();
  app.add_option("--synth-characters", o.synth.target_characters, "Approximate characters per half")
    ->capture_default_str();
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  options o;
  CLI::App app{"Translation lexicon acquisition from parallel text", "lexacq"};
  app.set_config("--config", "", "Flat key=value parameter file");
  add_parameters(app, o);
  app.require_subcommand(1, 1);

  using stage_fn = void (*)(const options&, std::ostream&);
  const std::vector<std::tuple<const char*, const char*, stage_fn>> stages = {
    {"synth", "Write a synthetic bitext with its true lexicon", stage_synth},
    {"tokenize", "Tokenize both halves", stage_tokenize},
    {"map", "Map bitext correspondence", stage_map},
    {"cooccur", "Count co-occurrences around the map", stage_cooccur},
    {"induce", "Induce a scored translation lexicon", stage_induce},
    {"filter", "Apply plateau, dictionary and corpus filters", stage_filter},
    {"concord", "Show bilingual concordance lines for a pair", stage_concord},
    {"sample", "Sample and interleave lexicon variants into a sheet", stage_sample},
    {"eval", "Group annotations and report precision and agreement", stage_eval},
    {"serve", "Serve a review session over HTTP", stage_serve},
  };
  std::map<CLI::App*, stage_fn> dispatch;
  for (const auto& [name, help, fn] : stages)
    dispatch[app.add_subcommand(name, help)->fallthrough()] = fn;

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    for (auto* sub : app.get_subcommands())
      dispatch.at(sub)(o, out);
    return exit_ok;
  } catch (const missing_input_error& e) {
    err << "error: " << e.what() << "\n";
    return exit_missing_input;
  } catch (const argument_error& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const data_error& e) {
    err << "data error: " << e.what() << "\n";
    return exit_data;
  } catch (const parse_error& e) {
    err << "data error: " << e.what() << "\n";
    return exit_data;
  } catch (const encoding_error& e) {
    err << "data error: " << e.what() << "\n";
    return exit_data;
  } catch (const sampling_error& e) {
    err << "data error: " << e.what() << "\n";
    return exit_data;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }
}

} // namespace lexacq

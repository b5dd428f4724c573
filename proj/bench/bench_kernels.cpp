// Serial reference against OpenMP kernel on the shipped synthetic corpus.
#include "lexacq/cooccurrence.hpp"
#include "lexacq/lexicon.hpp"
#include "lexacq/random.hpp"
#include "lexacq/simr.hpp"
#include "lexacq/synthetic.hpp"

#include <benchmark/benchmark.h>

#include <omp.h>

using namespace lexacq;

namespace {

struct fixture
{
  text_half a, b;
  tokenized_half ta, tb;
  interpolator line;
  std::vector<match_heuristic> heuristics{make_heuristic(heuristic_kind::cognate_lcsr),
                                          make_heuristic(heuristic_kind::exact_match)};
  std::vector<contingency_table> tables;

  static const fixture& get()
  {
    static const fixture f = [] {
      synthetic_params p;
      p.seed = 7;
      return fixture(generate_synthetic_bitext(p));
    }();
    return f;
  }

private:
  explicit fixture(const synthetic_bitext& s)
    : a(text_half::from_utf8("a", s.text_a)), b(text_half::from_utf8("b", s.text_b)), ta(tokenize(a)),
      tb(tokenize(b)),
      line(monotonic_map({{0, 0}, {a.length() - 1, b.length() - 1}}), bitext_space(a.length(), b.length()))
  {
    std::mt19937_64 rng(1);
    for (int k = 0; k < 200000; ++k)
      tables.push_back({1 + draw_below(rng, 300), draw_below(rng, 300), draw_below(rng, 300), draw_below(rng, 1u << 20)});
  }
};

void band_pairs_serial(benchmark::State& state)
{
  const auto& f = fixture::get();
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::collect_band_pairs(f.ta.tokens, f.tb.tokens, f.line, {100.0, true}));
}

void band_pairs_parallel(benchmark::State& state)
{
  const auto& f = fixture::get();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(collect_band_pairs(f.ta.tokens, f.tb.tokens, f.line, {100.0, true}));
}

void score_tables_serial(benchmark::State& state)
{
  const auto& f = fixture::get();
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::score_tables(f.tables));
}

void score_tables_parallel(benchmark::State& state)
{
  const auto& f = fixture::get();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(score_tables(f.tables));
}

void type_matches_serial(benchmark::State& state)
{
  const auto& f = fixture::get();
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::build_type_matches(f.ta.vocab, f.tb.vocab, f.heuristics, {}));
}

void type_matches_parallel(benchmark::State& state)
{
  const auto& f = fixture::get();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(build_type_matches(f.ta.vocab, f.tb.vocab, f.heuristics, {}));
}

void threads(benchmark::internal::Benchmark* b)
{
  for (int t = 1; t <= omp_get_num_procs(); t *= 2)
    b->Arg(t);
}

} // namespace

BENCHMARK(band_pairs_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(band_pairs_parallel)->Apply(threads)->Unit(benchmark::kMillisecond);
BENCHMARK(score_tables_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(score_tables_parallel)->Apply(threads)->Unit(benchmark::kMillisecond);
BENCHMARK(type_matches_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(type_matches_parallel)->Apply(threads)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

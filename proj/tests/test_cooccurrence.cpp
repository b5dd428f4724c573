#include "lexacq/cooccurrence.hpp"
#include "lexacq/error.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace lexacq;

namespace {

void check_against_oracle(const tokenized_half& a, const tokenized_half& b, const monotonic_map& map,
                          const bitext_space& space, double delta, bool content_only)
{
  const auto got = count_cooccurrences(a.tokens, b.tokens, map, space, {delta, content_only});
  const auto want = oracle::all_pairs(a, b, map, space, delta, content_only);
  REQUIRE(got.joint.size() == want.joint.size());
  std::size_t k = 0;
  for (const auto& [key, n] : want.joint) {
    CHECK(got.joint[k].source == key.first);
    CHECK(got.joint[k].target == key.second);
    CHECK(got.joint[k].count == n);
    ++k;
  }
  CHECK(got.total_pairs == want.total);
  for (const auto& [u, n] : want.source_instances)
    CHECK(got.source_marginal[u] == n);
  for (const auto& [v, n] : want.target_instances)
    CHECK(got.target_marginal[v] == n);
}

} // namespace

TEST_CASE("single tokens on the diagonal")
{
  const auto a = tokenize(text_half::from_utf8("a", std::string(49, ' ') + "abc"));
  const auto b = tokenize(text_half::from_utf8("b", std::string(49, ' ') + "xyz"));
  const bitext_space s(100, 100);
  const monotonic_map diag({{0, 0}, {99, 99}});
  CHECK(a.tokens[0].center == 50);
  CHECK(count_cooccurrences(a.tokens, b.tokens, diag, s, {10.0, true}).joint_of(0, 0) == 1);

  const auto b2 = tokenize(text_half::from_utf8("b", std::string(69, ' ') + "xyz"));
  CHECK(count_cooccurrences(a.tokens, b2.tokens, diag, s, {10.0, true}).joint.empty());
}

TEST_CASE("errors on empty map and bad delta")
{
  const auto a = tokenize(text_half::from_utf8("a", "one two"));
  const bitext_space s(7, 7);
  CHECK_THROWS_AS(count_cooccurrences(a.tokens, a.tokens, monotonic_map{}, s, {}), undefined_map_error);
  CHECK_THROWS_AS(count_cooccurrences(a.tokens, a.tokens, monotonic_map({{1, 1}}), s, {0.0, true}), argument_error);
}

TEST_CASE("band counts equal the all-pairs scan")
{
  std::mt19937_64 rng(21);
  const auto stop = parse_word_list("the\n", list_purpose::stoplist);
  tokenizer_config cfg;
  cfg.stoplist = &stop;
  for (int trial = 0; trial < 150; ++trial) {
    const auto ha = text_half::from_utf8("a", oracle::random_text(rng, 30 + draw_below(rng, 60), 12, "a"));
    const auto hb = text_half::from_utf8("b", oracle::random_text(rng, 30 + draw_below(rng, 60), 12, "b"));
    const auto a = tokenize(ha, cfg);
    const auto b = tokenize(hb, cfg);
    const bitext_space s(ha.length(), hb.length());
    const auto map = oracle::random_monotonic_map(rng, s, 8);
    for (double delta : {1.0, 25.0, 80.0})
      for (bool content : {true, false})
        check_against_oracle(a, b, map, s, delta, content);
  }
}

TEST_CASE("parallel band walk equals the serial walk across block boundaries")
{
  std::mt19937_64 rng(4);
  const auto ha = text_half::from_utf8("a", oracle::random_text(rng, 5000, 300, "a"));
  const auto hb = text_half::from_utf8("b", oracle::random_text(rng, 5200, 300, "b"));
  const auto a = tokenize(ha);
  const auto b = tokenize(hb);
  const bitext_space s(ha.length(), hb.length());
  const auto map = oracle::random_monotonic_map(rng, s, 200);
  const interpolator f(map, s);
  for (double delta : {10.0, 100.0}) {
    const auto par = collect_band_pairs(a.tokens, b.tokens, f, {delta, false});
    const auto ser = reference::collect_band_pairs(a.tokens, b.tokens, f, {delta, false});
    CHECK(par == ser);
  }
}

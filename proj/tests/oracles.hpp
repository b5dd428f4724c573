// Slow, independent reference computations the tests compare against.
#ifndef LEXACQ_TESTS_ORACLES_HPP
#define LEXACQ_TESTS_ORACLES_HPP

#include "lexacq/bitext_geometry.hpp"
#include "lexacq/corpus_io.hpp"
#include "lexacq/cooccurrence.hpp"
#include "lexacq/eval_stats.hpp"
#include "lexacq/lexicon.hpp"
#include "lexacq/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace oracle {

using namespace lexacq;

// ---- random inputs -------------------------------------------------------

inline std::string random_text(std::mt19937_64& rng, std::size_t words, std::size_t vocab, const char* prefix)
{
  std::string out;
  for (std::size_t k = 0; k < words; ++k) {
    if (k)
      out += draw_below(rng, 8) == 0 ? "  " : " ";
    const auto r = draw_below(rng, 12);
    if (r == 0) {
      out += ",";
      continue;
    }
    if (r == 1) {
      out += "the";  // stoplisted in tests that pass a stoplist
      continue;
    }
    out += prefix;
    out += std::to_string(draw_below(rng, vocab));
  }
  return out;
}

// Random strictly monotonic map inside the space.
inline monotonic_map random_monotonic_map(std::mt19937_64& rng, const bitext_space& space, std::size_t max_points)
{
  const std::size_t n = 1 + draw_below(rng, max_points);
  std::set<position> xs, ys;
  const auto w = static_cast<std::uint64_t>(space.width);
  const auto h = static_cast<std::uint64_t>(space.height);
  for (std::size_t k = 0; k < n; ++k) {
    xs.insert(static_cast<position>(draw_below(rng, w)));
    ys.insert(static_cast<position>(draw_below(rng, h)));
  }
  std::vector<correspondence_point> pts;
  auto xi = xs.begin();
  auto yi = ys.begin();
  for (; xi != xs.end() && yi != ys.end(); ++xi, ++yi)
    pts.push_back({*xi, *yi});
  return monotonic_map(std::move(pts));
}

// ---- geometry ------------------------------------------------------------

// Linear scan over the anchors; same extension rule, written out longhand.
inline double interpolate(const monotonic_map& map, const bitext_space& space, double x)
{
  std::vector<std::pair<double, double>> anchors;
  const auto& pts = map.points();
  if (!(pts.front().x == 0) && pts.front().y >= 0)
    anchors.emplace_back(0.0, 0.0);
  for (const auto& p : pts)
    anchors.emplace_back(static_cast<double>(p.x), static_cast<double>(p.y));
  if (space.width > pts.back().x && space.height >= pts.back().y)
    anchors.emplace_back(static_cast<double>(space.width), static_cast<double>(space.height));
  if (anchors.size() == 1)
    return anchors[0].second;

  std::size_t seg = 0;
  for (std::size_t k = 0; k + 1 < anchors.size(); ++k)
    if (x >= anchors[k].first)
      seg = k;
  const auto [x0, y0] = anchors[seg];
  const auto [x1, y1] = anchors[seg + 1];
  return y0 + (x - x0) * (y1 - y0) / (x1 - x0);
}

// Connected components of the inversion graph, found by union-find over
// every inverted pair.
inline std::vector<correspondence_point> monotonize(std::vector<correspondence_point> pts)
{
  std::sort(pts.begin(), pts.end());
  const std::size_t n = pts.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i)
      i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (pts[j].y < pts[i].y)
        parent[find(i)] = find(j);

  std::map<std::size_t, std::vector<correspondence_point>> groups;
  for (std::size_t i = 0; i < n; ++i)
    groups[find(i)].push_back(pts[i]);

  std::vector<correspondence_point> out;
  for (const auto& [root, g] : groups) {
    if (g.size() == 1) {
      out.push_back(g[0]);
      continue;
    }
    position x0 = g[0].x, x1 = g[0].x, y0 = g[0].y, y1 = g[0].y;
    for (const auto& p : g) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
    out.push_back({x0, y0});
    out.push_back({x1, y1});
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---- co-occurrence -------------------------------------------------------

struct counts
{
  std::map<std::pair<type_id, type_id>, std::uint64_t> joint;
  std::map<type_id, std::uint64_t> source_instances;
  std::map<type_id, std::uint64_t> target_instances;
  std::uint64_t total = 0;
};

// Every token of A against every token of B.
inline counts all_pairs(const tokenized_half& a, const tokenized_half& b, const monotonic_map& map,
                        const bitext_space& space, double delta, bool content_only)
{
  counts c;
  auto counted = [&](const token& t) { return content_only ? t.content : true; };
  for (const auto& s : a.tokens)
    if (counted(s))
      ++c.source_instances[s.type];
  for (const auto& t : b.tokens)
    if (counted(t))
      ++c.target_instances[t.type];
  for (const auto& s : a.tokens) {
    if (!counted(s))
      continue;
    const double y = oracle::interpolate(map, space, static_cast<double>(s.center));
    for (const auto& t : b.tokens) {
      if (!counted(t))
        continue;
      if (std::fabs(static_cast<double>(t.center) - y) <= delta) {
        ++c.joint[{s.type, t.type}];
        ++c.total;
      }
    }
  }
  return c;
}

// ---- scoring -------------------------------------------------------------

// G^2 through the entropy decomposition
// 2 [sum n ln n - sum row ln row - sum col ln col + N ln N].
inline double g2(double n11, double n12, double n21, double n22)
{
  auto xlx = [](double v) { return v > 0.0 ? v * std::log(v) : 0.0; };
  const double n = n11 + n12 + n21 + n22;
  const double cells = xlx(n11) + xlx(n12) + xlx(n21) + xlx(n22);
  const double rows = xlx(n11 + n12) + xlx(n21 + n22);
  const double cols = xlx(n11 + n21) + xlx(n12 + n22);
  return std::max(0.0, 2.0 * (cells - rows - cols + xlx(n)));
}

// Repeatedly take the best remaining compatible pair; no sorting.
inline link_assignment greedy_link(const std::vector<band_pair>& pairs, const std::vector<token>& a,
                                   const std::vector<token>& b, const std::map<pair_key, double>& scores)
{
  std::vector<bool> used(pairs.size(), false);
  std::set<std::uint32_t> la, lb;
  link_assignment out;
  for (;;) {
    std::size_t best = pairs.size();
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (used[k])
        continue;
      const auto& p = pairs[k];
      const auto it = scores.find(make_pair_key(a[p.a].type, b[p.b].type));
      if (it == scores.end() || la.count(p.a) || lb.count(p.b)) {
        used[k] = true;
        continue;
      }
      if (best == pairs.size()) {
        best = k;
        continue;
      }
      const auto& q = pairs[best];
      const double sq = scores.at(make_pair_key(a[q.a].type, b[q.b].type));
      const bool better = it->second != sq ? it->second > sq
                        : std::fabs(p.deviation) != std::fabs(q.deviation) ? std::fabs(p.deviation) < std::fabs(q.deviation)
                        : std::tie(p.a, p.b) < std::tie(q.a, q.b);
      if (better)
        best = k;
    }
    if (best == pairs.size())
      break;
    used[best] = true;
    la.insert(pairs[best].a);
    lb.insert(pairs[best].b);
    out.push_back({pairs[best].a, pairs[best].b});
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---- string matching -----------------------------------------------------

// Memoized recursion, the textbook definition.
inline std::size_t lcs(const std::u32string& a, const std::u32string& b)
{
  std::vector<std::vector<int>> memo(a.size() + 1, std::vector<int>(b.size() + 1, -1));
  auto rec = [&](auto&& self, std::size_t i, std::size_t j) -> std::size_t {
    if (i == a.size() || j == b.size())
      return 0;
    auto& m = memo[i][j];
    if (m >= 0)
      return static_cast<std::size_t>(m);
    std::size_t r = a[i] == b[j] ? 1 + self(self, i + 1, j + 1)
                                 : std::max(self(self, i + 1, j), self(self, i, j + 1));
    m = static_cast<int>(r);
    return r;
  };
  return rec(rec, 0, 0);
}

// ---- least squares -------------------------------------------------------

struct fit
{
  double slope;
  double intercept;
  double rms;
};

// Closed form from raw sums.
inline fit regress(const std::vector<correspondence_point>& pts)
{
  const double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : pts) {
    const double x = static_cast<double>(p.x), y = static_cast<double>(p.y);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  double ss = 0;
  for (const auto& p : pts) {
    const double r = static_cast<double>(p.y) - (slope * static_cast<double>(p.x) + intercept);
    ss += r * r;
  }
  return {slope, intercept, std::sqrt(ss / n)};
}

// ---- agreement -----------------------------------------------------------

struct kappa
{
  bool defined;
  double value;
  double p_o;
  double p_e;
};

// From the full contingency matrix of raw counts.
inline kappa cohen(const std::vector<int>& a, const std::vector<int>& b)
{
  std::set<int> labels(a.begin(), a.end());
  labels.insert(b.begin(), b.end());
  std::vector<int> idx(labels.begin(), labels.end());
  const std::size_t k = idx.size();
  std::vector<std::vector<double>> m(k, std::vector<double>(k, 0.0));
  auto at = [&](int l) { return static_cast<std::size_t>(std::lower_bound(idx.begin(), idx.end(), l) - idx.begin()); };
  for (std::size_t i = 0; i < a.size(); ++i)
    m[at(a[i])][at(b[i])] += 1.0;
  const double n = static_cast<double>(a.size());
  if (a.size() < 2)
    return {false, 0, 0, 0};
  double diag = 0, chance = 0;
  for (std::size_t i = 0; i < k; ++i) {
    diag += m[i][i];
    double row = 0, col = 0;
    for (std::size_t j = 0; j < k; ++j) {
      row += m[i][j];
      col += m[j][i];
    }
    chance += row * col;
  }
  const double p_o = diag / n;
  const double p_e = chance / (n * n);
  if (p_e >= 1.0)
    return {false, 0, p_o, p_e};
  return {true, (p_o - p_e) / (1.0 - p_e), p_o, p_e};
}

// The four kappa label slices of one annotator, derived from a table of
// verdicts indexed by entry rather than the library's record scan.
struct slices
{
  std::vector<int> k1a, k1g, k2a, k2g, k3a, k3g, k4a, k4g;
};

inline slices kappa_slices(const std::string& who, const std::vector<annotation>& all,
                           const std::vector<group_annotation>& groups)
{
  std::map<std::string, annotation> row;
  for (const auto& a : all)
    if (a.annotator == who)
      row[a.entry_id] = a;
  slices s;
  for (const auto& g : groups) {
    const bool has = row.count(g.entry_id) != 0;
    const annotation a = has ? row.at(g.entry_id) : annotation{who, g.entry_id, verdict::skipped, false, false};
    // 0 rejected, 1 retained, 2 neither
    const int mine = a.judgement == verdict::invalid ? 0 : a.judgement == verdict::skipped ? 2 : 1;
    const int theirs = g.validity == group_validity::invalid ? 0 : g.validity == group_validity::none ? 2 : 1;
    s.k1a.push_back(mine);
    s.k1g.push_back(theirs);
    if (mine != 1 || theirs != 1)
      continue;
    if (g.validity != group_validity::unclassified_valid) {
      auto code = [](const std::string& v) { return v == "V" ? 10 : v == "P" ? 20 : 30; };
      s.k2a.push_back(code(std::string(to_string(a.judgement))));
      s.k2g.push_back(code(std::string(to_string(g.validity))));
    }
    s.k3a.push_back(a.specific);
    s.k3g.push_back(g.specific);
    s.k4a.push_back(a.general);
    s.k4g.push_back(g.general);
  }
  return s;
}

} // namespace oracle

#endif

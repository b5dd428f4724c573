#include "lexacq/concordance.hpp"

#include "lexacq/error.hpp"
#include "lexacq/utf8.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace lexacq {

namespace {

// Extends [start - w, end + w) outward so it never cuts a token.
concordance_window make_window(const text_half& half, const tokenized_half& toks, const token& focus,
                               position w)
{
  position lo = std::max<position>(0, focus.start - w);
  position hi = std::min<position>(half.length(), focus.end + w);

  const auto& t = toks.tokens;
  // First token ending after lo; if it starts before lo, snap to its start.
  auto first = std::upper_bound(t.begin(), t.end(), lo,
                                [](position p, const token& k) { return p < k.end; });
  if (first != t.end() && first->start < lo)
    lo = first->start;
  // Last token starting before hi; if it ends after hi, snap to its end.
  auto last = std::lower_bound(t.begin(), t.end(), hi,
                               [](const token& k, position p) { return k.start < p; });
  if (last != t.begin()) {
    --last;
    if (last->end > hi)
      hi = last->end;
  }

  concordance_window out;
  out.text = half.slice(lo, hi);
  out.begin = lo;
  out.focus_begin = focus.start - lo;
  out.focus_end = focus.end - lo;
  out.center = focus.center;
  return out;
}

std::string bracketed(const concordance_window& w)
{
  const auto cps = utf8::decode(w.text);
  std::u32string out;
  out.append(cps, 0, static_cast<std::size_t>(w.focus_begin));
  out.push_back(U'[');
  out.append(cps, static_cast<std::size_t>(w.focus_begin),
             static_cast<std::size_t>(w.focus_end - w.focus_begin));
  out.push_back(U']');
  out.append(cps, static_cast<std::size_t>(w.focus_end));
  for (auto& c : out)
    if (c == U'\n' || c == U'\r' || c == U'\t')
      c = U' ';
  return utf8::encode(out);
}

nlohmann::json window_json(const concordance_window& w)
{
  return {{"text", w.text},
          {"begin", w.begin},
          {"focus_begin", w.focus_begin},
          {"focus_end", w.focus_end},
          {"center", w.center}};
}

} // namespace

std::vector<concordance_instance> build_concordance(const concordance_query& pair,
                                                    const text_half& half_a, const tokenized_half& a,
                                                    const text_half& half_b, const tokenized_half& b,
                                                    const interpolator& map,
                                                    const concordance_options& options)
{
  if (options.limit == 0)
    throw argument_error("concordance limit must be at least 1");
  std::vector<concordance_instance> out;
  const auto u = a.vocab.find(pair.source);
  const auto v = b.vocab.find(pair.target);
  if (!u || !v)
    return out;

  std::vector<const token*> targets;
  for (const auto& t : b.tokens)
    if (t.type == *v)
      targets.push_back(&t);

  // Tokens are in center order, so scanning A in order yields a_center order.
  for (const auto& s : a.tokens) {
    if (s.type != *u)
      continue;
    const double y = map(static_cast<double>(s.center));
    auto it = std::lower_bound(targets.begin(), targets.end(), y - options.delta,
                               [](const token* k, double lo) { return static_cast<double>(k->center) < lo; });
    for (; it != targets.end(); ++it) {
      const double dev = static_cast<double>((*it)->center) - y;
      if (dev > options.delta)
        break;
      if (std::fabs(dev) > options.delta)
        continue;
      out.push_back({make_window(half_a, a, s, options.window), make_window(half_b, b, **it, options.window), dev});
      if (out.size() == options.limit)
        return out;
    }
  }
  return out;
}

std::string render_text(const std::vector<concordance_instance>& instances)
{
  std::string out;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (i)
      out += '\n';
    out += bracketed(instances[i].source);
    out += '\n';
    out += bracketed(instances[i].target);
    out += '\n';
  }
  return out;
}

std::string render_json_lines(const std::vector<concordance_instance>& instances)
{
  std::string out;
  for (const auto& inst : instances) {
    nlohmann::json j = {{"source", window_json(inst.source)},
                        {"target", window_json(inst.target)},
                        {"deviation", inst.deviation}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

} // namespace lexacq

#include "lexacq/formats.hpp"

#include "lexacq/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lexacq {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line)
{
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  for (;;) {
    const auto tab = line.find('\t', pos);
    fields.push_back(line.substr(pos, tab == std::string_view::npos ? std::string_view::npos : tab - pos));
    if (tab == std::string_view::npos)
      return fields;
    pos = tab + 1;
  }
}

// Calls fn(line_number, line) for every data line.
template <typename Fn>
void for_each_row(std::string_view text, Fn&& fn)
{
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos)
      nl = text.size();
    auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    if (line.empty() || line.front() == '#')
      continue;
    fn(line_no, line);
  }
}

template <typename T>
T parse_number(std::string_view field, const std::string& source, std::size_t line, const char* what)
{
  T value{};
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || end != field.data() + field.size())
    throw parse_error(source, line, std::string("bad ") + what + " '" + std::string(field) + "'");
  return value;
}

bool parse_flag(std::string_view field, const std::string& source, std::size_t line)
{
  if (field == "1" || field == "true" || field == "yes")
    return true;
  if (field == "0" || field == "false" || field == "no" || field.empty())
    return false;
  throw parse_error(source, line, "bad flag '" + std::string(field) + "'");
}

void expect_fields(const std::vector<std::string_view>& f, std::size_t n, const std::string& source,
                   std::size_t line)
{
  if (f.size() != n)
    throw parse_error(source, line, "expected " + std::to_string(n) + " fields, found " + std::to_string(f.size()));
}

} // namespace

std::string format_score(double score)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", score);
  return buf;
}

std::string format_lexicon(const lexicon& entries)
{
  std::string out = "#source\ttarget\tscore\tplateau\tn11\tlink_count\n";
  for (const auto& e : entries) {
    out += e.source + '\t' + e.target + '\t' + format_score(e.score) + '\t' + std::to_string(e.plateau) + '\t' +
           std::to_string(e.n11) + '\t' + std::to_string(e.link_count) + '\n';
  }
  return out;
}

lexicon parse_lexicon(std::string_view text, const std::string& source)
{
  lexicon out;
  for_each_row(text, [&](std::size_t line, std::string_view row) {
    const auto f = split_tabs(row);
    expect_fields(f, 6, source, line);
    lexicon_entry e;
    e.source = std::string(f[0]);
    e.target = std::string(f[1]);
    e.score = parse_number<double>(f[2], source, line, "score");
    e.plateau = parse_number<std::size_t>(f[3], source, line, "plateau");
    e.n11 = parse_number<std::uint64_t>(f[4], source, line, "n11");
    e.link_count = parse_number<std::uint64_t>(f[5], source, line, "link count");
    out.push_back(std::move(e));
  });
  return out;
}

std::string format_map(std::span<const correspondence_point> points)
{
  std::string out = "#x\ty\n";
  for (const auto& p : points)
    out += std::to_string(p.x) + '\t' + std::to_string(p.y) + '\n';
  return out;
}

std::vector<correspondence_point> parse_map(std::string_view text, const std::string& source)
{
  std::vector<correspondence_point> out;
  for_each_row(text, [&](std::size_t line, std::string_view row) {
    const auto f = split_tabs(row);
    expect_fields(f, 2, source, line);
    const correspondence_point pt{parse_number<position>(f[0], source, line, "x"),
                                  parse_number<position>(f[1], source, line, "y")};
    if (pt.x < 0 || pt.y < 0)
      throw parse_error(source, line, "negative coordinate");
    out.push_back(pt);
  });
  return out;
}

std::string format_tokens(const tokenized_half& half)
{
  std::string out = "#index\tstart\tend\tcenter\tsurface\tform\tword\tcontent\n";
  for (const auto& t : half.tokens) {
    out += std::to_string(t.index) + '\t' + std::to_string(t.start) + '\t' + std::to_string(t.end) + '\t' +
           std::to_string(t.center) + '\t';
    // Surfaces never hold tabs or newlines except punctuation runs of them,
    // which are whitespace and so never tokens.
    out += t.surface + '\t' + half.type_form(t) + '\t' + (t.word ? "1" : "0") + '\t' + (t.content ? "1" : "0") + '\n';
  }
  return out;
}

std::string format_annotations(std::span<const annotation> records)
{
  std::string out = "#annotator\tentry_id\tverdict\tspecific\tgeneral\n";
  for (const auto& a : records)
    out += a.annotator + '\t' + a.entry_id + '\t' + std::string(to_string(a.judgement)) + '\t' +
           (a.specific ? "1" : "0") + '\t' + (a.general ? "1" : "0") + '\n';
  return out;
}

std::vector<annotation> parse_annotations(std::string_view text, const std::string& source)
{
  std::vector<annotation> out;
  for_each_row(text, [&](std::size_t line, std::string_view row) {
    annotation a;
    std::string verdict_text;
    if (row.front() == '{') {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(row);
        a.annotator = j.at("annotator").get<std::string>();
        a.entry_id = j.at("entry_id").get<std::string>();
        verdict_text = j.at("verdict").get<std::string>();
        a.specific = j.value("specific", false);
        a.general = j.value("general", false);
      } catch (const nlohmann::json::exception& e) {
        throw parse_error(source, line, e.what());
      }
    } else {
      const auto f = split_tabs(row);
      expect_fields(f, 5, source, line);
      a.annotator = std::string(f[0]);
      a.entry_id = std::string(f[1]);
      verdict_text = std::string(f[2]);
      a.specific = parse_flag(f[3], source, line);
      a.general = parse_flag(f[4], source, line);
    }
    const auto v = parse_verdict(verdict_text);
    if (!v)
      throw parse_error(source, line, "unknown verdict '" + verdict_text + "'");
    a.judgement = *v;
    try {
      check_annotation(a);
    } catch (const malformed_annotation_error& e) {
      throw parse_error(source, line, e.what());
    }
    out.push_back(std::move(a));
  });
  return out;
}

std::string format_sheet(std::span<const sheet_entry> sheet, bool with_variant)
{
  std::string out = with_variant ? "#entry_id\tsource\ttarget\tscore\tplateau\thint\tvariant\n"
                                 : "#entry_id\tsource\ttarget\tscore\tplateau\thint\n";
  for (const auto& s : sheet) {
    out += s.entry_id + '\t' + s.entry.source + '\t' + s.entry.target + '\t' + format_score(s.entry.score) + '\t' +
           std::to_string(s.entry.plateau) + '\t' + s.hint;
    if (with_variant)
      out += '\t' + s.variant_name;
    out += '\n';
  }
  return out;
}

std::vector<sheet_entry> parse_sheet(std::string_view text, const std::string& source)
{
  std::vector<sheet_entry> out;
  std::vector<std::string> names;
  for_each_row(text, [&](std::size_t line, std::string_view row) {
    const auto f = split_tabs(row);
    if (f.size() != 6 && f.size() != 7)
      throw parse_error(source, line, "expected 6 or 7 fields, found " + std::to_string(f.size()));
    sheet_entry s;
    s.entry_id = std::string(f[0]);
    s.entry.source = std::string(f[1]);
    s.entry.target = std::string(f[2]);
    s.entry.score = parse_number<double>(f[3], source, line, "score");
    s.entry.plateau = parse_number<std::size_t>(f[4], source, line, "plateau");
    s.hint = std::string(f[5]);
    if (f.size() == 7) {
      s.variant_name = std::string(f[6]);
      auto it = std::find(names.begin(), names.end(), s.variant_name);
      s.variant = static_cast<std::size_t>(it - names.begin());
      if (it == names.end())
        names.push_back(s.variant_name);
    }
    out.push_back(std::move(s));
  });
  return out;
}

void write_file(const std::filesystem::path& path, std::string_view content)
{
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw error("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out)
    throw error("write failed for " + path.string());
}

} // namespace lexacq

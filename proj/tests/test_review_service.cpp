#include "lexacq/annotation_log.hpp"
#include "lexacq/error.hpp"
#include "lexacq/formats.hpp"
#include "lexacq/manifest.hpp"
#include "lexacq/review_service.hpp"

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <thread>

using namespace lexacq;
using nlohmann::json;

namespace {

std::filesystem::path scratch(const std::string& name)
{
  const auto dir = std::filesystem::temp_directory_path() / ("lexacq_review_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<sheet_entry> small_sheet()
{
  return {{"E001", {"déplacez", "drag", 9.0, 1, 1, 1}, 0, "raw", "verb"},
          {"E002", {"dossier", "folder", 8.0, 1, 1, 1}, 1, "mrd", "noun"},
          {"E003", {"maintenez", "press", 7.0, 2, 1, 1}, 0, "raw", ""}};
}

std::shared_ptr<const concordance_source> small_corpus()
{
  return std::make_shared<const concordance_source>(
      text_half::from_utf8("a", "Maintenez SELECT enfoncé et déplacez le dossier."),
      text_half::from_utf8("b", "Press SELECT and drag the folder."), tokenizer_config{}, tokenizer_config{},
      monotonic_map({{10, 6}, {28, 17}, {47, 32}}), concordance_options{});
}

review_config config_in(const std::filesystem::path& dir)
{
  review_config c;
  c.sheet = small_sheet();
  c.annotators = {"A1", "A2", "A3"};
  c.log_path = dir / "annotations.log";
  c.corpus = small_corpus();
  return c;
}

std::string post(const std::string& who, const std::string& verdict, bool specific = false, bool general = false)
{
  return json{{"annotator", who}, {"verdict", verdict}, {"specific", specific}, {"general", general}}.dump();
}

} // namespace

TEST_CASE("entries hide provenance and unknown ids are 404")
{
  review_session s(config_in(scratch("entries")));
  const auto e = s.entry("E002");
  CHECK(e.status == 200);
  const auto j = json::parse(e.body);
  CHECK(j["source"] == "dossier");
  CHECK(j["hint"] == "noun");
  CHECK(e.body.find("mrd") == std::string::npos);
  CHECK(e.body.find("variant") == std::string::npos);
  CHECK(s.entry("E999").status == 404);
  CHECK(s.concordance("E999").status == 404);
  CHECK(s.annotate("E999", post("A1", "V", true)).status == 404);
}

TEST_CASE("concordances come with the entry")
{
  review_session s(config_in(scratch("concord")));
  const auto r = s.concordance("E001");
  CHECK(r.status == 200);
  const auto j = json::parse(r.body);
  REQUIRE(j.size() == 1);
  CHECK(j[0]["source"]["text"].get<std::string>().find("déplacez") != std::string::npos);
  CHECK(j[0]["target"]["text"].get<std::string>().find("drag") != std::string::npos);
  CHECK(j.size() <= 10);
}

TEST_CASE("annotation status codes")
{
  review_session s(config_in(scratch("codes")));
  CHECK(s.annotate("E001", post("A1", "invalid", true)).status == 409);
  CHECK(s.annotate("E001", post("A1", "skipped", false, true)).status == 409);
  CHECK(s.annotate("E001", "{not json").status == 400);
  CHECK(s.annotate("E001", post("A1", "maybe")).status == 400);
  CHECK(s.annotate("E001", post("Z9", "V", true)).status == 400);
  CHECK(s.annotate("E001", json{{"verdict", "V"}}.dump()).status == 400);
  CHECK(s.log_size() == 0);

  const auto flagged = s.annotate("E001", post("A1", "V"));
  CHECK(flagged.status == 200);
  CHECK(json::parse(flagged.body)["flagged"] == true);
  CHECK(s.log_size() == 1);
}

TEST_CASE("pending list and read-your-writes reports")
{
  review_session s(config_in(scratch("pending")));
  auto pending = json::parse(s.list_entries("A1", "pending").body);
  REQUIRE(pending.size() == 3);
  CHECK(pending[0]["entry_id"] == "E001");
  CHECK(s.list_entries("", "pending").status == 400);
  CHECK(s.list_entries("A1", "bogus").status == 400);

  CHECK(s.annotate("E001", post("A1", "V", true)).status == 200);
  CHECK(s.annotate("E002", post("A1", "skipped")).status == 200);
  pending = json::parse(s.list_entries("A1", "pending").body);
  REQUIRE(pending.size() == 1);
  CHECK(pending[0]["entry_id"] == "E003");
  CHECK(json::parse(s.list_entries("A1", "skipped").body).size() == 1);
  CHECK(json::parse(s.list_entries("A2", "pending").body).size() == 3);

  CHECK(s.annotate("E001", post("A2", "V", true)).status == 200);
  CHECK(s.annotate("E001", post("A3", "V", true, true)).status == 200);
  const auto report = json::parse(s.report_precision().body);
  CHECK(report["entries"] == 2);
  CHECK(report["pct_v"].get<double>() == doctest::Approx(50.0));
  CHECK(report["pct_specific_only"].get<double>() == doctest::Approx(50.0));

  const auto info = json::parse(s.session_info().body);
  CHECK(info["entries"] == 3);
  CHECK(info["log_records"] == 4);
  CHECK(info["progress"]["A1"]["done"] == 1);
  CHECK(info["progress"]["A1"]["skipped"] == 1);

  const auto kappa = json::parse(s.report_kappa().body);
  CHECK(kappa.size() == 3);
}

TEST_CASE("corrections supersede earlier records in the export")
{
  const auto dir = scratch("supersede");
  review_session s(config_in(dir));
  CHECK(s.export_annotations().body == format_annotations({}));
  s.annotate("E002", post("A2", "P", true));
  s.annotate("E001", post("A1", "V", true));
  s.annotate("E001", post("A1", "invalid"));
  const auto exported = s.exported();
  REQUIRE(exported.size() == 2);
  CHECK(exported[0].entry_id == "E001");
  CHECK(exported[0].judgement == verdict::invalid);
  CHECK(exported[1].annotator == "A2");
  CHECK(s.log_size() == 3);
  CHECK(parse_annotations(s.export_annotations().body) == exported);
}

TEST_CASE("concurrent posts are all persisted")
{
  const auto dir = scratch("concurrent");
  auto c = config_in(dir);
  c.annotators.clear();
  review_session s(c);
  constexpr int writers = 8, each = 25;
  std::vector<std::thread> threads;
  for (int w = 0; w < writers; ++w)
    threads.emplace_back([&, w] {
      for (int k = 0; k < each; ++k) {
        const std::string id = "E00" + std::to_string(1 + k % 3);
        s.annotate(id, post("W" + std::to_string(w), k % 2 ? "V" : "P", true));
        (void)s.report_precision();
      }
    });
  for (auto& t : threads)
    t.join();
  CHECK(s.log_size() == writers * each);
  const annotation_log reopened(c.log_path);
  CHECK(reopened.size() == writers * each);
  CHECK(reopened.truncated_bytes() == 0);
}

TEST_CASE("a torn tail is dropped on reopen")
{
  const auto dir = scratch("torn");
  const auto path = dir / "annotations.log";
  std::vector<annotation> before;
  {
    annotation_log log(path);
    for (int k = 0; k < 5; ++k) {
      annotation a{"A" + std::to_string(k), "E001", verdict::v, true, false};
      log.append(a);
      before.push_back(a);
    }
  }
  const auto intact = std::filesystem::file_size(path);
  {
    // A partial record: length prefix and half a payload.
    const auto record = annotation_log::encode({"A9", "E002", verdict::p, true, false});
    std::ofstream out(path, std::ios::binary | std::ios::app);
    out.write(record.data(), static_cast<std::streamsize>(record.size() / 2));
  }
  {
    annotation_log log(path);
    CHECK(log.records() == before);
    CHECK(log.truncated_bytes() > 0);
    CHECK(std::filesystem::file_size(path) == intact);
    log.append({"A9", "E002", verdict::p, true, false});
  }
  annotation_log again(path);
  CHECK(again.size() == 6);
  CHECK(again.truncated_bytes() == 0);

  // A flipped payload byte fails the checksum and is cut with everything after.
  {
    std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(static_cast<std::streamoff>(intact) + 6);
    f.put('#');
  }
  annotation_log corrupt(path);
  CHECK(corrupt.size() == 5);
}

TEST_CASE("session replays the log after a restart")
{
  const auto dir = scratch("restart");
  std::string exported;
  {
    review_session s(config_in(dir));
    s.annotate("E001", post("A1", "V", true));
    s.annotate("E003", post("A2", "I", false, true));
    exported = s.export_annotations().body;
  }
  review_session again(config_in(dir));
  CHECK(again.export_annotations().body == exported);
}

TEST_CASE("hash mismatch refuses to start")
{
  const auto dir = scratch("hash");
  write_file(dir / "lexicon.tsv", "x");
  auto c = config_in(dir);
  c.expected.push_back({(dir / "lexicon.tsv").string(), sha256_hex("x")});
  CHECK_NOTHROW(review_session{c});
  c.expected.back().sha256 = sha256_hex("y");
  CHECK_THROWS_AS(review_session{c}, data_error);
}

TEST_CASE("HTTP interface")
{
  const auto dir = scratch("http");
  review_session s(config_in(dir));
  review_server server(s);
  const int port = server.start("127.0.0.1", 0);
  REQUIRE(port > 0);

  httplib::Client client("127.0.0.1", port);
  auto r = client.Get("/session");
  REQUIRE(r);
  CHECK(r->status == 200);
  r = client.Get("/entries?annotator=A1&status=pending");
  REQUIRE(r);
  CHECK(json::parse(r->body).size() == 3);
  r = client.Get("/entries/E001");
  REQUIRE(r);
  CHECK(json::parse(r->body)["target"] == "drag");
  r = client.Get("/entries/E404");
  REQUIRE(r);
  CHECK(r->status == 404);
  r = client.Get("/entries/E001/concordance");
  REQUIRE(r);
  CHECK(json::parse(r->body).size() == 1);

  r = client.Post("/entries/E001/annotation", post("A1", "invalid", true), "application/json");
  REQUIRE(r);
  CHECK(r->status == 409);
  r = client.Post("/entries/E001/annotation", post("A1", "V", true), "application/json");
  REQUIRE(r);
  CHECK(r->status == 200);

  std::thread other([port] {
    httplib::Client c2("127.0.0.1", port);
    c2.Post("/entries/E002/annotation", post("A2", "P", true), "application/json");
  });
  client.Post("/entries/E002/annotation", post("A3", "V", false, true), "application/json");
  other.join();
  CHECK(s.log_size() == 3);

  r = client.Get("/report/precision");
  REQUIRE(r);
  CHECK(json::parse(r->body)["entries"] == 2);
  r = client.Get("/report/kappa");
  REQUIRE(r);
  CHECK(r->status == 200);
  r = client.Get("/export");
  REQUIRE(r);
  CHECK(parse_annotations(r->body).size() == 3);
  server.stop();

  // The port is taken while another server holds it.
  review_server first(s);
  const int held = first.start("127.0.0.1", 0);
  review_server second(s);
  CHECK_THROWS_AS(second.start("127.0.0.1", held), error);
  first.stop();
}

#include "lexacq/review_service.hpp"

#include "lexacq/error.hpp"
#include "lexacq/formats.hpp"

#include <httplib.h>
#include <json.hpp>

#include <mutex>
#include <thread>

namespace lexacq {

using nlohmann::ordered_json;

concordance_source::concordance_source(text_half a, text_half b, const tokenizer_config& config_a,
                                       const tokenizer_config& config_b, monotonic_map m,
                                       concordance_options opts)
  : half_a(std::move(a)), half_b(std::move(b)), tokens_a(tokenize(half_a, config_a)),
    tokens_b(tokenize(half_b, config_b)), map(std::move(m)), space(half_a.length(), half_b.length()),
    line(map, space), options(opts)
{
}

namespace {

http_reply json_reply(int status, const ordered_json& body)
{
  return {status, body.dump() + "\n", "application/json"};
}

http_reply error_reply(int status, const std::string& message)
{
  return json_reply(status, {{"error", message}});
}

ordered_json annotation_json(const annotation& a)
{
  return {{"annotator", a.annotator},
          {"entry_id", a.entry_id},
          {"verdict", std::string(to_string(a.judgement))},
          {"specific", a.specific},
          {"general", a.general}};
}

ordered_json kappa_json(const kappa_result& k)
{
  ordered_json j = {{"items", k.items}, {"defined", k.defined}, {"p_o", k.p_o}, {"p_e", k.p_e}};
  j["kappa"] = k.defined ? ordered_json(k.kappa) : ordered_json(nullptr);
  return j;
}

} // namespace

review_session::review_session(review_config config)
  : config_(std::move(config)), log_(config_.log_path)
{
  for (const auto& a : config_.expected) {
    const auto actual = sha256_file(a.path);
    if (actual != a.sha256)
      throw data_error("artifact " + a.path + " does not match its manifest hash");
  }
  for (std::size_t k = 0; k < config_.sheet.size(); ++k)
    if (!index_.emplace(config_.sheet[k].entry_id, k).second)
      throw data_error("sheet lists entry " + config_.sheet[k].entry_id + " twice");
  for (const auto& a : log_.records())
    latest_[{a.entry_id, a.annotator}] = a;
}

std::string review_session::status_of(const std::string& annotator, const std::string& entry_id) const
{
  const auto it = latest_.find({entry_id, annotator});
  if (it == latest_.end())
    return "pending";
  return it->second.judgement == verdict::skipped ? "skipped" : "done";
}

http_reply review_session::session_info() const
{
  std::shared_lock lock(mutex_);
  std::set<std::string> annotators(config_.annotators.begin(), config_.annotators.end());
  for (const auto& [key, a] : latest_)
    annotators.insert(key.second);

  ordered_json progress = ordered_json::object();
  for (const auto& who : annotators) {
    std::size_t done = 0, skipped = 0, pending = 0;
    for (const auto& s : config_.sheet) {
      const auto st = status_of(who, s.entry_id);
      (st == "done" ? done : st == "skipped" ? skipped : pending)++;
    }
    progress[who] = {{"done", done}, {"skipped", skipped}, {"pending", pending}};
  }
  return json_reply(200, {{"entries", config_.sheet.size()},
                          {"annotators", annotators},
                          {"log_records", log_.size()},
                          {"concordances", config_.corpus != nullptr},
                          {"progress", progress}});
}

http_reply review_session::list_entries(const std::string& annotator, const std::string& status) const
{
  if (!status.empty() && status != "pending" && status != "done" && status != "skipped")
    return error_reply(400, "status must be pending, done or skipped");
  if (!status.empty() && annotator.empty())
    return error_reply(400, "a status filter needs an annotator");

  std::shared_lock lock(mutex_);
  ordered_json list = ordered_json::array();
  for (const auto& s : config_.sheet) {
    ordered_json item = {{"entry_id", s.entry_id}, {"source", s.entry.source}, {"target", s.entry.target},
                         {"hint", s.hint}};
    if (!annotator.empty()) {
      const auto st = status_of(annotator, s.entry_id);
      if (!status.empty() && st != status)
        continue;
      item["status"] = st;
    }
    list.push_back(std::move(item));
  }
  return json_reply(200, list);
}

http_reply review_session::entry(const std::string& id) const
{
  const auto it = index_.find(id);
  if (it == index_.end())
    return error_reply(404, "unknown entry " + id);
  const auto& s = config_.sheet[it->second];
  return json_reply(200, {{"entry_id", s.entry_id},
                          {"source", s.entry.source},
                          {"target", s.entry.target},
                          {"hint", s.hint}});
}

http_reply review_session::concordance(const std::string& id) const
{
  const auto it = index_.find(id);
  if (it == index_.end())
    return error_reply(404, "unknown entry " + id);
  ordered_json list = ordered_json::array();
  if (config_.corpus) {
    const auto& c = *config_.corpus;
    const auto& s = config_.sheet[it->second];
    const auto instances = build_concordance({s.entry.source, s.entry.target}, c.half_a, c.tokens_a, c.half_b,
                                             c.tokens_b, c.line, c.options);
    for (const auto& inst : instances) {
      auto side = [](const concordance_window& w) {
        return ordered_json{{"text", w.text}, {"focus_begin", w.focus_begin}, {"focus_end", w.focus_end}};
      };
      list.push_back({{"source", side(inst.source)}, {"target", side(inst.target)}});
    }
  }
  return json_reply(200, list);
}

http_reply review_session::annotate(const std::string& id, const std::string& body)
{
  if (!index_.count(id))
    return error_reply(404, "unknown entry " + id);

  annotation a;
  a.entry_id = id;
  try {
    const auto j = nlohmann::json::parse(body);
    a.annotator = j.at("annotator").get<std::string>();
    const auto v = parse_verdict(j.at("verdict").get<std::string>());
    if (!v)
      return error_reply(400, "unknown verdict");
    a.judgement = *v;
    a.specific = j.value("specific", false);
    a.general = j.value("general", false);
  } catch (const nlohmann::json::exception& e) {
    return error_reply(400, std::string("malformed annotation: ") + e.what());
  }
  if (a.annotator.empty())
    return error_reply(400, "annotator is required");
  if (!config_.annotators.empty() &&
      std::find(config_.annotators.begin(), config_.annotators.end(), a.annotator) == config_.annotators.end())
    return error_reply(400, "unregistered annotator " + a.annotator);

  bool flagged = false;
  try {
    flagged = check_annotation(a);
  } catch (const malformed_annotation_error& e) {
    return error_reply(409, e.what());
  }

  // Appending under the exclusive lock keeps log order and the in-memory view
  // in step.
  std::unique_lock lock(mutex_);
  log_.append(a);
  latest_[{a.entry_id, a.annotator}] = a;
  auto reply = annotation_json(a);
  reply["flagged"] = flagged;
  return json_reply(200, reply);
}

std::vector<annotation> review_session::exported() const
{
  std::shared_lock lock(mutex_);
  std::vector<annotation> out;
  out.reserve(latest_.size());
  for (const auto& [key, a] : latest_)
    out.push_back(a);
  return out;
}

http_reply review_session::report_precision() const
{
  const auto records = exported();
  const auto groups = group_all(records, config_.grouping);
  if (groups.empty())
    return json_reply(200, {{"entries", 0}});
  const auto s = summarize_precision(groups);
  const auto ci = proportion_ci(s.pct_all_valid / 100.0, s.entries);
  return json_reply(200, {{"entries", s.entries},
                          {"pct_v", s.pct_v},
                          {"pct_p", s.pct_p},
                          {"pct_i", s.pct_i},
                          {"pct_unclassified", s.pct_unclassified},
                          {"pct_all_valid", s.pct_all_valid},
                          {"pct_specific_only", s.pct_specific_only},
                          {"pct_general_only", s.pct_general_only},
                          {"pct_both", s.pct_both},
                          {"all_valid_ci95", {100.0 * ci.lower, 100.0 * ci.upper}}});
}

http_reply review_session::report_kappa() const
{
  const auto records = exported();
  const auto groups = group_all(records, config_.grouping);
  ordered_json list = ordered_json::array();
  for (const auto& r : kappa_suite(records, groups))
    list.push_back({{"annotator", r.annotator},
                    {"kappa1", kappa_json(r.retain)},
                    {"kappa2", kappa_json(r.type)},
                    {"kappa3", kappa_json(r.specific)},
                    {"kappa4", kappa_json(r.general)}});
  return json_reply(200, list);
}

http_reply review_session::export_annotations() const
{
  return {200, format_annotations(exported()), "text/tab-separated-values"};
}

struct review_server::impl
{
  review_session& session;
  httplib::Server server;
  std::thread worker;

  explicit impl(review_session& s) : session(s)
  {
    // No SO_REUSEPORT: a second server on a taken port must fail to bind.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    auto send = [](httplib::Response& res, const http_reply& r) {
      res.status = r.status;
      res.set_content(r.body, r.content_type);
    };
    server.Get("/session", [this, send](const httplib::Request&, httplib::Response& res) {
      send(res, session.session_info());
    });
    server.Get("/entries", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, session.list_entries(req.get_param_value("annotator"), req.get_param_value("status")));
    });
    server.Get(R"(/entries/([^/]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, session.entry(req.matches[1]));
    });
    server.Get(R"(/entries/([^/]+)/concordance)", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, session.concordance(req.matches[1]));
    });
    server.Post(R"(/entries/([^/]+)/annotation)", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, session.annotate(req.matches[1], req.body));
    });
    server.Get("/report/precision", [this, send](const httplib::Request&, httplib::Response& res) {
      send(res, session.report_precision());
    });
    server.Get("/report/kappa", [this, send](const httplib::Request&, httplib::Response& res) {
      send(res, session.report_kappa());
    });
    server.Get("/export", [this, send](const httplib::Request&, httplib::Response& res) {
      send(res, session.export_annotations());
    });
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      std::string what = "internal error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        what = e.what();
      } catch (...) {
      }
      res.status = 500;
      res.set_content(ordered_json{{"error", what}}.dump() + "\n", "application/json");
    });
  }
};

review_server::review_server(review_session& session) : impl_(std::make_unique<impl>(session)) {}

review_server::~review_server()
{
  stop();
}

int review_server::start(const std::string& host, int port)
{
  int bound = port;
  if (port == 0)
    bound = impl_->server.bind_to_any_port(host);
  else if (!impl_->server.bind_to_port(host, port))
    bound = -1;
  if (bound < 0)
    throw error("cannot bind " + host + ":" + std::to_string(port));
  impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void review_server::listen(const std::string& host, int port)
{
  if (!impl_->server.bind_to_port(host, port))
    throw error("cannot bind " + host + ":" + std::to_string(port));
  impl_->server.listen_after_bind();
}

void review_server::stop()
{
  if (!impl_)
    return;
  impl_->server.stop();
  if (impl_->worker.joinable())
    impl_->worker.join();
}

} // namespace lexacq

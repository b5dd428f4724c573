#ifndef LEXACQ_REVIEW_SERVICE_HPP
#define LEXACQ_REVIEW_SERVICE_HPP

#include "lexacq/annotation_log.hpp"
#include "lexacq/concordance.hpp"
#include "lexacq/eval_stats.hpp"
#include "lexacq/manifest.hpp"

#include <filesystem>
#include <memory>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace lexacq {

// Corpus state needed to show concordances; immutable once built.
struct concordance_source
{
  text_half half_a;
  text_half half_b;
  tokenized_half tokens_a;
  tokenized_half tokens_b;
  monotonic_map map;
  bitext_space space;
  interpolator line;
  concordance_options options;

  concordance_source(text_half a, text_half b, const tokenizer_config& config_a,
                     const tokenizer_config& config_b, monotonic_map m, concordance_options opts);
};

struct review_config
{
  std::vector<sheet_entry> sheet;
  std::vector<std::string> annotators;  // empty accepts any identifier
  std::filesystem::path log_path;
  std::shared_ptr<const concordance_source> corpus;  // optional
  group_options grouping;
  // Artifacts whose current hash must match before the service starts.
  std::vector<artifact> expected;
};

struct http_reply
{
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// The session behind the HTTP interface. Handlers are plain functions of
// the request so they can be exercised without a socket.
class review_session
{
public:
  // Throws data_error when an expected artifact hash does not match.
  explicit review_session(review_config config);

  http_reply session_info() const;
  http_reply list_entries(const std::string& annotator, const std::string& status) const;
  http_reply entry(const std::string& id) const;
  http_reply concordance(const std::string& id) const;
  http_reply annotate(const std::string& id, const std::string& body);
  http_reply report_precision() const;
  http_reply report_kappa() const;
  http_reply export_annotations() const;

  // Latest-record-wins view in (entry, annotator) order.
  std::vector<annotation> exported() const;
  std::size_t log_size() const { return log_.size(); }

private:
  std::string status_of(const std::string& annotator, const std::string& entry_id) const;

  review_config config_;
  std::unordered_map<std::string, std::size_t> index_;
  annotation_log log_;
  mutable std::shared_mutex mutex_;
  std::map<std::pair<std::string, std::string>, annotation> latest_;  // (entry, annotator)
};

class review_server
{
public:
  explicit review_server(review_session& session);
  ~review_server();

  // Binds and serves on a background thread; returns the bound port.
  // Throws error when the address cannot be bound. Port 0 picks a free one.
  int start(const std::string& host, int port);
  // Blocks serving on the calling thread.
  void listen(const std::string& host, int port);
  void stop();

private:
  struct impl;
  std::unique_ptr<impl> impl_;
};

} // namespace lexacq

#endif

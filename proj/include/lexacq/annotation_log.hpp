#ifndef LEXACQ_ANNOTATION_LOG_HPP
#define LEXACQ_ANNOTATION_LOG_HPP

#include "lexacq/eval_stats.hpp"

#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

namespace lexacq {

// Append-only file of records: 4-byte little-endian payload length, JSON
// payload, 4-byte little-endian CRC-32 of the payload. Opening a log drops a
// torn or corrupt tail left by a crash.
class annotation_log
{
public:
  explicit annotation_log(std::filesystem::path path);
  ~annotation_log();

  annotation_log(const annotation_log&) = delete;
  annotation_log& operator=(const annotation_log&) = delete;

  // Durable once this returns (fsync). Safe to call from several threads.
  void append(const annotation& record);

  // Every record in append order.
  std::vector<annotation> records() const;
  std::size_t size() const;
  // Bytes removed from the tail when the log was opened.
  std::size_t truncated_bytes() const noexcept { return truncated_; }

  const std::filesystem::path& path() const noexcept { return path_; }

  static std::string encode(const annotation& record);

private:
  std::filesystem::path path_;
  int fd_ = -1;
  mutable std::mutex mutex_;
  std::vector<annotation> records_;
  std::size_t truncated_ = 0;
};

// Latest record per (entry, annotator), ordered by (entry, annotator).
std::vector<annotation> latest_records(const std::vector<annotation>& log);

} // namespace lexacq

#endif

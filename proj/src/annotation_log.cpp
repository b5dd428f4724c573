#include "lexacq/annotation_log.hpp"

#include "lexacq/error.hpp"
#include "lexacq/formats.hpp"

#include <json.hpp>
#include <zlib.h>

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <map>
#include <optional>
#include <system_error>

namespace lexacq {

namespace {

void put_u32(std::string& out, std::uint32_t v)
{
  for (int i = 0; i < 4; ++i)
    out += static_cast<char>((v >> (8 * i)) & 0xFF);
}

std::uint32_t get_u32(const std::string& in, std::size_t at)
{
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

std::uint32_t checksum(std::string_view payload)
{
  return static_cast<std::uint32_t>(
    crc32(0L, reinterpret_cast<const Bytef*>(payload.data()), static_cast<uInt>(payload.size())));
}

std::optional<annotation> decode_payload(std::string_view payload)
{
  try {
    const auto j = nlohmann::json::parse(payload);
    annotation a;
    a.annotator = j.at("annotator").get<std::string>();
    a.entry_id = j.at("entry_id").get<std::string>();
    const auto v = parse_verdict(j.at("verdict").get<std::string>());
    if (!v)
      return std::nullopt;
    a.judgement = *v;
    a.specific = j.at("specific").get<bool>();
    a.general = j.at("general").get<bool>();
    return a;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

std::system_error os_error(const std::string& what)
{
  return std::system_error(errno, std::generic_category(), what);
}

} // namespace

std::string annotation_log::encode(const annotation& record)
{
  const nlohmann::ordered_json j = {{"annotator", record.annotator},
                                    {"entry_id", record.entry_id},
                                    {"verdict", std::string(to_string(record.judgement))},
                                    {"specific", record.specific},
                                    {"general", record.general}};
  const std::string payload = j.dump();
  std::string out;
  put_u32(out, static_cast<std::uint32_t>(payload.size()));
  out += payload;
  put_u32(out, checksum(payload));
  return out;
}

annotation_log::annotation_log(std::filesystem::path path) : path_(std::move(path))
{
  std::string bytes;
  if (std::filesystem::exists(path_))
    bytes = read_file(path_);

  std::size_t good = 0;
  while (good + 4 <= bytes.size()) {
    const std::size_t len = get_u32(bytes, good);
    if (good + 8 + len > bytes.size())
      break;
    const std::string_view payload(bytes.data() + good + 4, len);
    if (checksum(payload) != get_u32(bytes, good + 4 + len))
      break;
    auto a = decode_payload(payload);
    if (!a)
      break;
    records_.push_back(std::move(*a));
    good += 8 + len;
  }
  truncated_ = bytes.size() - good;

  if (path_.has_parent_path())
    std::filesystem::create_directories(path_.parent_path());
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT, 0644);
  if (fd_ < 0)
    throw os_error("cannot open annotation log " + path_.string());
  if (truncated_ && ::ftruncate(fd_, static_cast<off_t>(good)) != 0)
    throw os_error("cannot truncate annotation log " + path_.string());
  if (::lseek(fd_, static_cast<off_t>(good), SEEK_SET) < 0)
    throw os_error("cannot seek annotation log " + path_.string());
}

annotation_log::~annotation_log()
{
  if (fd_ >= 0)
    ::close(fd_);
}

void annotation_log::append(const annotation& record)
{
  const std::string bytes = encode(record);
  std::lock_guard lock(mutex_);
  std::size_t written = 0;
  while (written < bytes.size()) {
    const auto n = ::write(fd_, bytes.data() + written, bytes.size() - written);
    if (n < 0) {
      if (errno == EINTR)
        continue;
      throw os_error("annotation log write failed");
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0)
    throw os_error("annotation log fsync failed");
  records_.push_back(record);
}

std::vector<annotation> annotation_log::records() const
{
  std::lock_guard lock(mutex_);
  return records_;
}

std::size_t annotation_log::size() const
{
  std::lock_guard lock(mutex_);
  return records_.size();
}

std::vector<annotation> latest_records(const std::vector<annotation>& log)
{
  std::map<std::pair<std::string, std::string>, annotation> latest;
  for (const auto& a : log)
    latest[{a.entry_id, a.annotator}] = a;
  std::vector<annotation> out;
  out.reserve(latest.size());
  for (auto& [key, a] : latest)
    out.push_back(std::move(a));
  return out;
}

} // namespace lexacq

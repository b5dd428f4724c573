#ifndef LEXACQ_MANIFEST_HPP
#define LEXACQ_MANIFEST_HPP

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace lexacq {

inline constexpr std::string_view toolkit_version = "1.0.0";

std::string sha256_hex(std::string_view bytes);
// Throws missing_input_error when the file is absent.
std::string sha256_file(const std::filesystem::path& path);

struct artifact
{
  std::string path;
  std::string sha256;

  friend bool operator==(const artifact&, const artifact&) = default;
};

// What a stage read, wrote and was configured with. No timestamps, so a
// re-run with the same inputs writes the same bytes.
struct manifest
{
  manifest() = default;
  explicit manifest(std::string stage_name) : stage(std::move(stage_name)) {}

  std::string stage;
  std::string version = std::string(toolkit_version);
  std::map<std::string, std::string> parameters;
  std::vector<artifact> inputs;
  std::vector<artifact> outputs;

  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);

  std::string to_json() const;
  // Throws parse_error on a malformed document.
  static manifest from_json(std::string_view text, const std::string& source = "<memory>");

  friend bool operator==(const manifest&, const manifest&) = default;
};

// Hash of the artifact at `path` as recorded in `m`, or an empty string.
std::string recorded_hash(const manifest& m, const std::string& path);

} // namespace lexacq

#endif

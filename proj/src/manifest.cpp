#include "lexacq/manifest.hpp"

#include "lexacq/error.hpp"
#include "lexacq/formats.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <memory>

namespace lexacq {

std::string sha256_hex(std::string_view bytes)
{
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw error("sha256 computation failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path)
{
  return sha256_hex(read_file(path));
}

void manifest::add_input(const std::filesystem::path& path)
{
  inputs.push_back({path.generic_string(), sha256_file(path)});
}

void manifest::add_output(const std::filesystem::path& path)
{
  outputs.push_back({path.generic_string(), sha256_file(path)});
}

namespace {

nlohmann::ordered_json artifacts_json(const std::vector<artifact>& list)
{
  auto arr = nlohmann::ordered_json::array();
  for (const auto& a : list)
    arr.push_back({{"path", a.path}, {"sha256", a.sha256}});
  return arr;
}

} // namespace

std::string manifest::to_json() const
{
  nlohmann::ordered_json j;
  j["stage"] = stage;
  j["version"] = version;
  j["parameters"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : parameters)
    j["parameters"][k] = v;
  j["inputs"] = artifacts_json(inputs);
  j["outputs"] = artifacts_json(outputs);
  return j.dump(2) + "\n";
}

manifest manifest::from_json(std::string_view text, const std::string& source)
{
  try {
    const auto j = nlohmann::json::parse(text);
    manifest m;
    m.stage = j.at("stage").get<std::string>();
    m.version = j.at("version").get<std::string>();
    for (const auto& [k, v] : j.at("parameters").items())
      m.parameters[k] = v.get<std::string>();
    for (const auto& a : j.at("inputs"))
      m.inputs.push_back({a.at("path").get<std::string>(), a.at("sha256").get<std::string>()});
    for (const auto& a : j.at("outputs"))
      m.outputs.push_back({a.at("path").get<std::string>(), a.at("sha256").get<std::string>()});
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(source, 0, e.what());
  }
}

std::string recorded_hash(const manifest& m, const std::string& path)
{
  for (const auto* list : {&m.outputs, &m.inputs})
    for (const auto& a : *list)
      if (a.path == path)
        return a.sha256;
  return {};
}

} // namespace lexacq

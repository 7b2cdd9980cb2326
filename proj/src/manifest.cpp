#include "mmudn/manifest.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>

#include <json.hpp>
#include <openssl/evp.h>

#include "mmudn/error.hpp"

namespace mmudn {

std::string_view version() noexcept { return MMUDN_VERSION; }

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("SHA-256 initialization failed");
    }
  }

  void update(const void* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx_.get(), data, n) != 1) throw std::runtime_error("SHA-256 update failed");
  }

  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), md.data(), &len) != 1) {
      throw std::runtime_error("SHA-256 finalization failed");
    }
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
      out += kDigits[md[i] >> 4];
      out += kDigits[md[i] & 15];
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

}  // namespace

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data.data(), data.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path.string());
  Sha256 h;
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string RunManifest::input_digest() const {
  // Length-prefixed fields so no two distinct inputs share an encoding.
  std::string blob;
  const auto field = [&](std::string_view s) {
    blob += std::to_string(s.size());
    blob += ':';
    blob += s;
  };
  field(tool_version);
  field(command);
  for (const auto& a : arguments) field(a);
  field(config_text);
  field(std::to_string(seed));
  return sha256_hex(blob);
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["tool"] = "mmudn";
  j["tool_version"] = tool_version;
  j["command"] = command;
  j["arguments"] = arguments;
  j["seed"] = seed;
  j["config"] = config_text;
  j["input_digest"] = input_digest();
  j["started_utc"] = started_utc;
  j["finished_utc"] = finished_utc;
  j["outputs"] = output_digests;
  j["notes"] = notes;
  return j.dump(2) + "\n";
}

void RunManifest::add_output(const std::filesystem::path& file) {
  output_digests[file.filename().string()] = sha256_file(file);
}

}  // namespace mmudn

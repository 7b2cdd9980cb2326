#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace mmudn {

std::string_view version() noexcept;

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Current UTC time as ISO 8601 (seconds resolution).
std::string utc_timestamp();

/// Provenance record written next to every output file.
///
/// The input digest covers only what determines the outputs (tool version, command,
/// canonical arguments and configuration). It is embedded in the CSV headers; timestamps
/// live only in the manifest, so rerunning the same inputs reproduces every CSV byte for byte.
struct RunManifest {
  std::string tool_version{version()};
  std::string command;
  std::vector<std::string> arguments;  ///< canonical "key=value" sweep arguments
  std::string config_text;             ///< serialized configuration snapshot
  std::uint64_t seed = 0;
  std::string started_utc;
  std::string finished_utc;
  std::map<std::string, std::string> output_digests;  ///< file name -> SHA-256
  std::map<std::string, std::string> notes;           ///< e.g. the C_P variant in use

  std::string input_digest() const;
  std::string to_json() const;

  /// Hashes `file` and records it under its file name.
  void add_output(const std::filesystem::path& file);
};

}  // namespace mmudn

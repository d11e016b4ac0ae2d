#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace rotwalk::cli {

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// ISO 8601 UTC with millisecond precision.
std::string utc_timestamp(std::chrono::system_clock::time_point when);

/*!
 * Run manifest: resolved config, seed, tool version, timestamps, outcome and
 * the content hash of every output file.
 */
class Manifest
{
  public:
    Manifest(std::string command, const nlohmann::json& config, std::filesystem::path out_dir);

    /// Records an output file (path relative to the output directory).
    void add_output(const std::filesystem::path& relative);

    nlohmann::json& extra() noexcept { return doc_["result"]; }

    /// Stamps the stop time, hashes outputs and writes manifest.json.
    void write();

    const nlohmann::json& document() const noexcept { return doc_; }

  private:
    nlohmann::json doc_;
    std::filesystem::path out_dir_;
    std::vector<std::filesystem::path> outputs_;
};

}  // namespace rotwalk::cli

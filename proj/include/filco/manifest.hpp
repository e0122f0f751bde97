#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "filco/types.hpp"

namespace filco {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kManifestName = "manifest.json";

std::string sha256_hex(std::string_view data);
// Throws std::runtime_error when the file cannot be read.
std::string sha256_file(const std::filesystem::path& path);

// One per output directory. Everything except the timestamps is a pure
// function of the command, its configuration and the input bytes.
struct RunManifest {
  std::string command;
  Json config = Json::object();
  std::string input_path;
  std::string input_fingerprint;  // "sha256:<hex>"
  std::vector<std::pair<std::string, std::string>> outputs;  // file name -> fingerprint
  std::string started_at;
  std::string finished_at;
};

std::string utc_timestamp();

Json to_json(const RunManifest& manifest);

// Fingerprints every listed output under dir and writes dir/manifest.json.
void write_manifest(const std::filesystem::path& dir, RunManifest manifest,
                    const std::vector<std::string>& output_files);

}  // namespace filco

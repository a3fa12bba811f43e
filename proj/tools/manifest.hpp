#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace mixgeom::cli {

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

struct FileDigest {
  std::string name;  // file name inside the output directory, or input path
  std::string sha256;
};

/// Everything needed to re-run a command and check its outputs.
struct RunManifest {
  std::string subcommand;
  nlohmann::json config;  // fully resolved options, defaults included
  std::uint64_t seed = 0;
  std::string version;
  std::vector<FileDigest> inputs;
  std::vector<FileDigest> outputs;
};

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

void write_manifest(const std::filesystem::path& path, const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace mixgeom::cli

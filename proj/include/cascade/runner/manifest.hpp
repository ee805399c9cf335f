#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace cascade::runner {

struct ManifestEntry {
  std::string path;  // relative to the run directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

/// Record of one CLI run. Carries no timestamps so identical runs produce
/// identical manifests.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;  // flag -> value, in a fixed order
  std::uint64_t seed = 0;
  std::vector<ManifestEntry> files;
};

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Checksums `relative_paths` under `dir` into manifest.files (sorted by
/// path) and writes dir/manifest.json.
void write_manifest(const std::filesystem::path& dir, RunManifest& manifest,
                    std::vector<std::string> relative_paths);

}  // namespace cascade::runner

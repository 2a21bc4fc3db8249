#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace aaechat::cli {

struct Provenance {
  std::string subcommand;
  std::string manifest_hash;
  nlohmann::json seeds = nlohmann::json::object();
  nlohmann::json mode = nlohmann::json::object();
  std::vector<std::filesystem::path> inputs;
  /// Paths under these roots are recorded relative to them, so runs into
  /// different output directories produce identical provenance.
  std::filesystem::path output_root;
  std::filesystem::path manifest_dir;
};

/// Where the provenance record of `target` lives: `<dir>/provenance.json` for
/// directories, `<file>.provenance.json` otherwise.
std::filesystem::path provenance_path(const std::filesystem::path& target, bool is_directory);

/// Writes {subcommand, manifest_hash, seeds, mode, inputs: [{path, sha256}]}.
/// Directory inputs are hashed over their sorted regular files.
void write_provenance(const std::filesystem::path& target, bool is_directory, const Provenance& p);

/// Hex SHA-256 of a file, or of a directory's sorted (relative path, file
/// hash) listing.
std::string hash_path(const std::filesystem::path& p);

}  // namespace aaechat::cli

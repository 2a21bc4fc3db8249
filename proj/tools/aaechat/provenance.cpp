#include "provenance.hpp"

#include <algorithm>

#include "aaechat/common/hashing.hpp"
#include "aaechat/common/jsonl.hpp"

namespace aaechat::cli {
namespace {

namespace fs = std::filesystem;

bool under(const fs::path& p, const fs::path& root) {
  if (root.empty()) return false;
  auto rel = p.lexically_relative(root);
  return !rel.empty() && *rel.begin() != "..";
}

std::string display(const fs::path& input, const Provenance& p) {
  const auto abs = fs::absolute(input).lexically_normal();
  const auto out_root = p.output_root.empty() ? fs::path() : fs::absolute(p.output_root).lexically_normal();
  const auto manifest_dir = p.manifest_dir.empty() ? fs::path() : fs::absolute(p.manifest_dir).lexically_normal();
  if (under(abs, out_root)) return "$output/" + abs.lexically_relative(out_root).generic_string();
  if (under(abs, manifest_dir)) return abs.lexically_relative(manifest_dir).generic_string();
  return abs.filename().generic_string();
}

}  // namespace

fs::path provenance_path(const fs::path& target, bool is_directory) {
  if (is_directory) return target / "provenance.json";
  auto p = target;
  p += ".provenance.json";
  return p;
}

std::string hash_path(const fs::path& p) {
  if (!fs::is_directory(p)) return sha256_hex(read_file(p));
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(p)) {
    if (e.is_regular_file() && e.path().filename() != "provenance.json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::string listing;
  for (const auto& f : files) {
    listing += f.lexically_relative(p).generic_string() + " " + sha256_hex(read_file(f)) + "\n";
  }
  return sha256_hex(listing);
}

void write_provenance(const fs::path& target, bool is_directory, const Provenance& p) {
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& in : p.inputs) inputs.push_back({{"path", display(in, p)}, {"sha256", hash_path(in)}});
  nlohmann::json doc = {{"subcommand", p.subcommand}, {"manifest_hash", p.manifest_hash},
                        {"seeds", p.seeds},           {"mode", p.mode},
                        {"inputs", inputs}};
  write_json_file(provenance_path(target, is_directory), doc);
}

}  // namespace aaechat::cli

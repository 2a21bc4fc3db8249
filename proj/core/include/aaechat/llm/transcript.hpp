#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace aaechat::llm {

struct TranscriptEntry {
  std::string fingerprint;
  nlohmann::json request_summary;
  std::string response;
};

// Fingerprint -> response store backing record and replay modes.
//
// On disk: one JSON object per line, {"fingerprint", "request", "response"}.
// In record mode every add() is appended to the file immediately, so a crashed
// run keeps what it paid for. Appends are serialized.
class Transcript {
 public:
  Transcript() = default;

  /// Loads `path` if it exists. When `append_on_add` is set, add() also writes
  /// through to `path`.
  static Transcript open(const std::filesystem::path& path, bool append_on_add);

  std::optional<std::string> find(const std::string& fingerprint) const;

  /// Later entries for the same fingerprint replace earlier ones.
  void add(const std::string& fingerprint, nlohmann::json request_summary, std::string response);

  std::size_t size() const;

  Transcript(Transcript&& other) noexcept;
  Transcript& operator=(Transcript&& other) noexcept;

 private:
  mutable std::mutex mu_;
  std::map<std::string, TranscriptEntry> entries_;
  std::filesystem::path path_;
  bool append_on_add_ = false;
};

}  // namespace aaechat::llm

#include "aaechat/llm/transcript.hpp"

#include <fstream>

#include "aaechat/common/errors.hpp"
#include "aaechat/common/jsonl.hpp"

namespace aaechat::llm {

Transcript Transcript::open(const std::filesystem::path& path, bool append_on_add) {
  Transcript t;
  t.path_ = path;
  t.append_on_add_ = append_on_add;
  if (std::filesystem::exists(path)) {
    for (auto& row : read_jsonl(path)) {
      if (!row.contains("fingerprint") || !row.contains("response")) {
        throw ParseError(path.string() + ": transcript entry lacks fingerprint/response");
      }
      TranscriptEntry e{row["fingerprint"].get<std::string>(),
                        row.value("request", nlohmann::json::object()),
                        row["response"].get<std::string>()};
      t.entries_[e.fingerprint] = std::move(e);
    }
  } else if (!append_on_add) {
    throw IoError("transcript not found: " + path.string());
  }
  return t;
}

Transcript::Transcript(Transcript&& other) noexcept {
  std::lock_guard lock(other.mu_);
  entries_ = std::move(other.entries_);
  path_ = std::move(other.path_);
  append_on_add_ = other.append_on_add_;
}

Transcript& Transcript::operator=(Transcript&& other) noexcept {
  if (this != &other) {
    std::scoped_lock lock(mu_, other.mu_);
    entries_ = std::move(other.entries_);
    path_ = std::move(other.path_);
    append_on_add_ = other.append_on_add_;
  }
  return *this;
}

std::optional<std::string> Transcript::find(const std::string& fingerprint) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(fingerprint);
  if (it == entries_.end()) return std::nullopt;
  return it->second.response;
}

void Transcript::add(const std::string& fingerprint, nlohmann::json request_summary,
                     std::string response) {
  std::lock_guard lock(mu_);
  if (append_on_add_) {
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) throw IoError("cannot append to transcript " + path_.string());
    nlohmann::json row = {
        {"fingerprint", fingerprint}, {"request", request_summary}, {"response", response}};
    out << row.dump() << '\n';
  }
  entries_[fingerprint] = TranscriptEntry{fingerprint, std::move(request_summary), std::move(response)};
}

std::size_t Transcript::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

}  // namespace aaechat::llm

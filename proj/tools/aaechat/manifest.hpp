#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aaechat/corpus/corpus.hpp"
#include "aaechat/dialect/dialect.hpp"
#include "aaechat/llm/chat_client.hpp"
#include "aaechat/speech/tts.hpp"

namespace aaechat::cli {

namespace fs = std::filesystem;

struct ProviderEntry {
  /// Short name used in chatbot ids ("gpt" in "gpt:high").
  std::string id;
  llm::ProviderConfig config;
  fs::path transcript;
};

struct Seeds {
  std::uint64_t sample = 0;
  std::uint64_t tag_sample = 0;
  std::uint64_t assign = 0;
  nlohmann::json to_json() const;
};

struct Study {
  std::vector<std::string> evaluators;
  std::vector<std::string> chatbots;
  std::vector<std::string> baseline;
  std::optional<std::size_t> max_load;
  /// Shared evaluator token; empty disables the check.
  std::string evaluator_token;
};

/// A pipeline run configuration. The file is JSON; relative paths resolve
/// against the manifest's directory.
struct RunManifest {
  fs::path path;
  fs::path base_dir;
  /// SHA-256 of the manifest's canonical JSON (sorted keys, compact).
  std::string hash;

  fs::path corpus;
  std::vector<corpus::DomainSpec> domains = corpus::default_domains();
  std::size_t per_domain = 20;
  std::size_t turn_count = 10;
  std::vector<dialect::DialectLevel> levels = {dialect::kAllLevels.begin(), dialect::kAllLevels.end()};
  dialect::HistorySource history = dialect::HistorySource::translated;

  /// Translation providers; every listed provider yields one text chatbot
  /// per level.
  std::vector<ProviderEntry> providers;
  /// The feature-tagging model, configured like a provider.
  std::optional<ProviderEntry> tagger;
  std::optional<fs::path> taxonomy;

  llm::Mode llm_mode = llm::Mode::replay;
  speech::TtsMode tts_mode = speech::TtsMode::stub;
  speech::TtsConfig tts;
  fs::path tts_transcript;
  std::vector<speech::SpeakerRef> speakers;
  int pause_ms = 500;
  std::size_t split_threshold = 30;

  Seeds seeds;
  fs::path output_dir;
  Study study;

  /// Parses and validates. Throws ValidationError listing every problem.
  static RunManifest load(const fs::path& path);
  static RunManifest from_json(const nlohmann::json& doc, const fs::path& base_dir);

  const ProviderEntry& provider(std::string_view id) const;
  const speech::SpeakerRef& speaker(speech::SpeakerRole role) const;
  /// Checks that every referenced input exists. Transcripts are required only
  /// in replay mode.
  void validate() const;
};

std::string manifest_hash(const nlohmann::json& doc);

/// "<provider>:<level>" with the level lowercased, e.g. "gpt:high".
std::string text_chatbot_id(std::string_view provider, dialect::DialectLevel level);
/// "spoken:<level>".
std::string spoken_chatbot_id(dialect::DialectLevel level);
/// Chatbot id with characters outside [A-Za-z0-9._-] replaced by '_'.
std::string slug(std::string_view id);

}  // namespace aaechat::cli

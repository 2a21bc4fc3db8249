#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aaechat/llm/chat_client.hpp"
#include "aaechat/llm/transcript.hpp"
#include "aaechat/llm/transport.hpp"

namespace aaechat::speech {

enum class SpeakerRole { chatbot_aa, chatbot_sa, user_sa };

std::string_view to_string(SpeakerRole role);
SpeakerRole speaker_role_from_string(std::string_view name);

struct SpeakerRef {
  std::string id;
  std::filesystem::path reference_audio;
  std::string reference_transcript;
  SpeakerRole role = SpeakerRole::user_sa;
};

/// Reference clips longer than this are rejected.
inline constexpr double kMaxReferenceSeconds = 15.0;

/// Checks the clip is a readable, non-empty WAV within kMaxReferenceSeconds.
void validate_speaker_ref(const SpeakerRef& ref);

/// Throws ValidationError unless each role appears at most once.
void validate_speaker_set(const std::vector<SpeakerRef>& refs);

struct AudioSegment {
  std::vector<std::int16_t> samples;
  int sample_rate = 0;
  int turn_index = 0;
  int segment_index = 0;
  std::string text;
  std::string speaker_id;

  double duration_seconds() const {
    return sample_rate == 0 ? 0.0 : static_cast<double>(samples.size()) / sample_rate;
  }
};

enum class TtsMode { live, record, replay, stub };

std::string_view to_string(TtsMode mode);
TtsMode tts_mode_from_string(std::string_view name);

struct TtsConfig {
  std::string api_base;
  std::string api_key;
  llm::RetryPolicy retry;
  int stub_sample_rate = 24000;
  int stub_ms_per_word = 300;

  /// TTS_API_BASE, TTS_API_KEY.
  static TtsConfig from_env();
};

/// Canonical request key: SHA-256 over the text, speaker id, reference
/// transcript, and the reference clip's own SHA-256.
std::string tts_fingerprint(std::string_view text, const SpeakerRef& ref);

/// Client for an HTTP speech service that clones a voice from a reference
/// clip. The service takes {text, reference_audio (base64 WAV),
/// reference_transcript} at POST {base}/synthesize and answers with WAV
/// bytes.
///
/// stub mode never touches the network or the reference clip: it emits a
/// square-wave tone lasting stub_ms_per_word per word.
class TtsClient {
 public:
  TtsClient(TtsMode mode, TtsConfig config, std::shared_ptr<llm::Transcript> transcript = nullptr,
            std::unique_ptr<llm::HttpTransport> transport = nullptr);

  /// `text` must already be normalized and split. Throws on service failure
  /// (after bounded retries), replay misses, and empty audio.
  AudioSegment synthesize(const std::string& text, const SpeakerRef& ref, int turn_index = 0,
                          int segment_index = 0);

  TtsMode mode() const { return mode_; }
  const TtsConfig& config() const { return config_; }

 private:
  std::vector<std::uint8_t> call_service(const std::string& text, const SpeakerRef& ref);
  AudioSegment stub(const std::string& text, const SpeakerRef& ref) const;

  TtsMode mode_;
  TtsConfig config_;
  std::shared_ptr<llm::Transcript> transcript_;
  std::unique_ptr<llm::HttpTransport> transport_;
};

}  // namespace aaechat::speech

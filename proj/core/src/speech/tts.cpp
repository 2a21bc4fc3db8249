#include "aaechat/speech/tts.hpp"

#include <cstdlib>
#include <set>

#include "aaechat/common/errors.hpp"
#include "aaechat/common/hashing.hpp"
#include "aaechat/common/jsonl.hpp"
#include "aaechat/common/text.hpp"
#include "aaechat/speech/wav.hpp"

namespace aaechat::speech {

using nlohmann::json;

std::string_view to_string(SpeakerRole role) {
  switch (role) {
    case SpeakerRole::chatbot_aa:
      return "chatbot_aa";
    case SpeakerRole::chatbot_sa:
      return "chatbot_sa";
    case SpeakerRole::user_sa:
      return "user_sa";
  }
  return "?";
}

SpeakerRole speaker_role_from_string(std::string_view name) {
  const auto folded = text::fold_label(name);
  if (folded == "chatbot_aa") return SpeakerRole::chatbot_aa;
  if (folded == "chatbot_sa") return SpeakerRole::chatbot_sa;
  if (folded == "user_sa") return SpeakerRole::user_sa;
  throw ValidationError("unknown speaker role: " + std::string(name));
}

void validate_speaker_ref(const SpeakerRef& ref) {
  if (ref.id.empty()) throw ValidationError("speaker reference without id");
  if (!std::filesystem::exists(ref.reference_audio)) {
    throw ValidationError("speaker '" + ref.id + "': missing clip " + ref.reference_audio.string());
  }
  const auto clip = read_wav(ref.reference_audio);
  if (clip.samples.empty()) throw ValidationError("speaker '" + ref.id + "': empty reference clip");
  if (clip.duration_seconds() > kMaxReferenceSeconds) {
    throw ValidationError("speaker '" + ref.id + "': reference clip is " + std::to_string(clip.duration_seconds()) +
                          " s, limit " + std::to_string(kMaxReferenceSeconds) + " s");
  }
}

void validate_speaker_set(const std::vector<SpeakerRef>& refs) {
  std::set<SpeakerRole> roles;
  for (const auto& r : refs) {
    if (!roles.insert(r.role).second) {
      throw ValidationError("more than one speaker reference for role " + std::string(to_string(r.role)));
    }
  }
}

std::string_view to_string(TtsMode mode) {
  switch (mode) {
    case TtsMode::live:
      return "live";
    case TtsMode::record:
      return "record";
    case TtsMode::replay:
      return "replay";
    case TtsMode::stub:
      return "stub";
  }
  return "?";
}

TtsMode tts_mode_from_string(std::string_view name) {
  const auto folded = text::fold_label(name);
  if (folded == "live") return TtsMode::live;
  if (folded == "record") return TtsMode::record;
  if (folded == "replay") return TtsMode::replay;
  if (folded == "stub") return TtsMode::stub;
  throw ValidationError("unknown TTS mode: " + std::string(name));
}

TtsConfig TtsConfig::from_env() {
  TtsConfig c;
  if (const char* v = std::getenv("TTS_API_BASE")) c.api_base = v;
  if (const char* v = std::getenv("TTS_API_KEY")) c.api_key = v;
  return c;
}

std::string tts_fingerprint(std::string_view text_in, const SpeakerRef& ref) {
  json doc = {{"reference_audio_sha256", sha256_hex(read_file(ref.reference_audio))},
              {"reference_transcript", ref.reference_transcript},
              {"speaker_id", ref.id},
              {"text", text_in}};
  return sha256_hex(doc.dump());
}

TtsClient::TtsClient(TtsMode mode, TtsConfig config, std::shared_ptr<llm::Transcript> transcript,
                     std::unique_ptr<llm::HttpTransport> transport)
    : mode_(mode), config_(std::move(config)), transcript_(std::move(transcript)), transport_(std::move(transport)) {
  if ((mode_ == TtsMode::record || mode_ == TtsMode::replay) && !transcript_) {
    throw ValidationError(std::string(to_string(mode_)) + " mode needs a transcript");
  }
  if (mode_ == TtsMode::live || mode_ == TtsMode::record) {
    if (config_.api_base.empty()) throw ValidationError("TTS_API_BASE is not set");
    if (!transport_) transport_ = llm::make_http_transport();
  }
  if (mode_ == TtsMode::stub && (config_.stub_sample_rate <= 0 || config_.stub_ms_per_word <= 0)) {
    throw ValidationError("stub sample rate and ms-per-word must be positive");
  }
}

std::vector<std::uint8_t> TtsClient::call_service(const std::string& text_in, const SpeakerRef& ref) {
  const auto clip = read_file(ref.reference_audio);
  llm::HttpRequest request;
  std::string base = config_.api_base;
  while (!base.empty() && base.back() == '/') base.pop_back();
  request.url = base + "/synthesize";
  if (!config_.api_key.empty()) request.headers["Authorization"] = "Bearer " + config_.api_key;
  request.body = json{{"text", text_in},
                      {"reference_audio", base64_encode(clip)},
                      {"reference_transcript", ref.reference_transcript}}
                     .dump();
  const auto encoded = llm::with_retries(config_.retry, [&] {
    auto res = transport_->post(request);
    if (res.status < 200 || res.status >= 300) {
      throw Error("TTS service returned HTTP " + std::to_string(res.status));
    }
    return base64_encode(res.body);
  });
  return base64_decode(encoded);
}

AudioSegment TtsClient::stub(const std::string& text_in, const SpeakerRef& ref) const {
  const auto words = text::word_count(text_in);
  if (words == 0) throw Error("stub synthesis of empty text");
  AudioSegment seg;
  seg.sample_rate = config_.stub_sample_rate;
  const std::size_t count = words * static_cast<std::size_t>(config_.stub_ms_per_word) *
                            static_cast<std::size_t>(config_.stub_sample_rate) / 1000;
  // Square wave, lower for the user voice so the speakers are distinguishable.
  const int freq = ref.role == SpeakerRole::user_sa ? 150 : 220;
  const std::size_t half_period = std::max<std::size_t>(1, static_cast<std::size_t>(seg.sample_rate / (2 * freq)));
  seg.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    seg.samples[i] = ((i / half_period) % 2 == 0) ? std::int16_t{3000} : std::int16_t{-3000};
  }
  return seg;
}

AudioSegment TtsClient::synthesize(const std::string& text_in, const SpeakerRef& ref, int turn_index,
                                   int segment_index) {
  AudioSegment seg;
  if (mode_ == TtsMode::stub) {
    seg = stub(text_in, ref);
  } else {
    std::vector<std::uint8_t> wav;
    if (mode_ == TtsMode::replay) {
      const auto fp = tts_fingerprint(text_in, ref);
      auto hit = transcript_->find(fp);
      if (!hit) throw llm::ReplayMissError(fp);
      wav = base64_decode(*hit);
    } else {
      wav = call_service(text_in, ref);
      if (mode_ == TtsMode::record) {
        json summary = {{"speaker_id", ref.id}, {"text_head", std::string(text::utf8_prefix(text_in, 80))}};
        transcript_->add(tts_fingerprint(text_in, ref), std::move(summary), base64_encode(wav));
      }
    }
    auto pcm = decode_wav(wav);
    seg.samples = std::move(pcm.samples);
    seg.sample_rate = pcm.sample_rate;
  }
  if (seg.samples.empty()) throw Error("TTS returned empty audio for '" + text_in + "'");
  seg.turn_index = turn_index;
  seg.segment_index = segment_index;
  seg.text = text_in;
  seg.speaker_id = ref.id;
  return seg;
}

}  // namespace aaechat::speech

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aaechat/corpus/corpus.hpp"
#include "aaechat/speech/tts.hpp"
#include "aaechat/speech/wav.hpp"

namespace aaechat::speech {

inline constexpr int kDefaultPauseMs = 500;

struct SpeakerNames {
  std::string user = "User";
  std::string chatbot = "Chatbot";
};

struct TimelineEntry {
  std::string speaker;
  int turn_index = 0;
  std::size_t start_sample = 0;
  std::size_t end_sample = 0;  // exclusive
  double start_s = 0.0;
  double end_s = 0.0;
  std::string text;
};

struct DialogueAudio {
  std::vector<std::int16_t> samples;
  int sample_rate = 0;
  int pause_ms = 0;
  std::size_t pause_samples = 0;
  std::vector<AudioSegment> segments;
  std::vector<TimelineEntry> timeline;

  double total_duration() const {
    return sample_rate == 0 ? 0.0 : static_cast<double>(samples.size()) / sample_rate;
  }
  PcmAudio to_pcm(std::string comment = {}) const;
};

/// Concatenates the segments in order, inserting `pause_ms` of silence at
/// each turn boundary (never between segments of one turn), and records one
/// timeline entry per turn. Segments must cover every turn of `dialogue` in
/// order with consecutive segment indices and share a sample rate; pause_ms
/// must convert to a whole number of samples. Throws ValidationError.
DialogueAudio assemble(const corpus::Dialogue& dialogue, const std::vector<AudioSegment>& segments,
                       int pause_ms = kDefaultPauseMs, const SpeakerNames& names = {});

/// [{speaker, start_s, end_s, text}, ...]
nlohmann::json timeline_to_json(const DialogueAudio& audio);

}  // namespace aaechat::speech

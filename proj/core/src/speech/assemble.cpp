#include "aaechat/speech/assemble.hpp"

#include <set>

#include "aaechat/common/errors.hpp"

namespace aaechat::speech {

PcmAudio DialogueAudio::to_pcm(std::string comment) const {
  return PcmAudio{samples, sample_rate, std::move(comment)};
}

DialogueAudio assemble(const corpus::Dialogue& dialogue, const std::vector<AudioSegment>& segments, int pause_ms,
                       const SpeakerNames& names) {
  if (segments.empty()) throw ValidationError("dialogue '" + dialogue.id + "': no audio segments");
  if (pause_ms < 0) throw ValidationError("pause must be non-negative");
  const int rate = segments.front().sample_rate;
  if (rate <= 0) throw ValidationError("segment sample rate must be positive");
  if ((static_cast<long long>(pause_ms) * rate) % 1000 != 0) {
    throw ValidationError(std::to_string(pause_ms) + " ms is not a whole number of samples at " +
                          std::to_string(rate) + " Hz");
  }

  // Validate ordering and coverage before touching samples.
  std::set<int> covered;
  int prev_turn = -1;
  int expected_segment = 0;
  for (const auto& seg : segments) {
    if (seg.sample_rate != rate) {
      throw ValidationError("dialogue '" + dialogue.id + "': mixed sample rates " + std::to_string(rate) + " and " +
                            std::to_string(seg.sample_rate));
    }
    if (seg.samples.empty()) throw ValidationError("dialogue '" + dialogue.id + "': empty segment");
    if (seg.turn_index < prev_turn) throw ValidationError("dialogue '" + dialogue.id + "': segments out of order");
    if (seg.turn_index != prev_turn) expected_segment = 0;
    if (seg.segment_index != expected_segment) {
      throw ValidationError("dialogue '" + dialogue.id + "': turn " + std::to_string(seg.turn_index) +
                            " segment " + std::to_string(seg.segment_index) + " out of sequence");
    }
    ++expected_segment;
    prev_turn = seg.turn_index;
    covered.insert(seg.turn_index);
  }
  for (const auto& t : dialogue.turns) {
    if (!covered.contains(t.index)) {
      throw ValidationError("dialogue '" + dialogue.id + "': no audio for turn " + std::to_string(t.index));
    }
  }
  if (covered.size() != dialogue.turns.size()) {
    throw ValidationError("dialogue '" + dialogue.id + "': segments reference turns not in the dialogue");
  }

  DialogueAudio out;
  out.sample_rate = rate;
  out.pause_ms = pause_ms;
  out.pause_samples = static_cast<std::size_t>(static_cast<long long>(pause_ms) * rate / 1000);
  out.segments = segments;
  std::size_t total = 0;
  for (const auto& seg : segments) total += seg.samples.size();
  total += out.pause_samples * (covered.size() - 1);
  out.samples.reserve(total);

  auto turn_by_index = [&](int index) -> const corpus::Turn& {
    for (const auto& t : dialogue.turns) {
      if (t.index == index) return t;
    }
    throw ValidationError("unknown turn index");
  };

  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& seg = segments[i];
    const bool starts_turn = i == 0 || segments[i - 1].turn_index != seg.turn_index;
    if (starts_turn) {
      if (i > 0) out.samples.insert(out.samples.end(), out.pause_samples, std::int16_t{0});
      const auto& turn = turn_by_index(seg.turn_index);
      TimelineEntry entry;
      entry.speaker = turn.side == corpus::Side::chatbot ? names.chatbot : names.user;
      entry.turn_index = seg.turn_index;
      entry.start_sample = out.samples.size();
      entry.text = turn.text;
      out.timeline.push_back(std::move(entry));
    }
    out.samples.insert(out.samples.end(), seg.samples.begin(), seg.samples.end());
    auto& current = out.timeline.back();
    current.end_sample = out.samples.size();
  }
  for (auto& e : out.timeline) {
    e.start_s = static_cast<double>(e.start_sample) / rate;
    e.end_s = static_cast<double>(e.end_sample) / rate;
  }
  return out;
}

nlohmann::json timeline_to_json(const DialogueAudio& audio) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : audio.timeline) {
    out.push_back({{"speaker", e.speaker}, {"start_s", e.start_s}, {"end_s", e.end_s}, {"text", e.text}});
  }
  return out;
}

}  // namespace aaechat::speech

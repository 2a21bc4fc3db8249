#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace aaechat::speech {

struct PcmAudio {
  std::vector<std::int16_t> samples;
  int sample_rate = 0;
  /// Carried in a LIST/INFO ICMT chunk when non-empty.
  std::string comment;

  double duration_seconds() const {
    return sample_rate == 0 ? 0.0 : static_cast<double>(samples.size()) / sample_rate;
  }
};

/// 16-bit PCM mono RIFF/WAVE bytes.
std::vector<std::uint8_t> encode_wav(const PcmAudio& audio);

/// Accepts 16-bit PCM mono only; skips unknown chunks. Throws ParseError.
PcmAudio decode_wav(std::span<const std::uint8_t> bytes);

void write_wav(const std::filesystem::path& path, const PcmAudio& audio);
PcmAudio read_wav(const std::filesystem::path& path);

}  // namespace aaechat::speech

#include "aaechat/speech/wav.hpp"

#include <cstring>

#include "aaechat/common/errors.hpp"
#include "aaechat/common/jsonl.hpp"

namespace aaechat::speech {
namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | static_cast<std::uint32_t>(b[at + 1]) << 8 |
         static_cast<std::uint32_t>(b[at + 2]) << 16 | static_cast<std::uint32_t>(b[at + 3]) << 24;
}
std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | b[at + 1] << 8);
}
bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

}  // namespace

std::vector<std::uint8_t> encode_wav(const PcmAudio& audio) {
  if (audio.sample_rate <= 0) throw ValidationError("sample rate must be positive");
  std::vector<std::uint8_t> info;
  if (!audio.comment.empty()) {
    std::string text = audio.comment;
    text.push_back('\0');
    if (text.size() % 2 == 1) text.push_back('\0');
    put_tag(info, "LIST");
    put_u32(info, static_cast<std::uint32_t>(4 + 8 + text.size()));
    put_tag(info, "INFO");
    put_tag(info, "ICMT");
    put_u32(info, static_cast<std::uint32_t>(text.size()));
    info.insert(info.end(), text.begin(), text.end());
  }
  const auto data_bytes = static_cast<std::uint32_t>(audio.samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + info.size() + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, static_cast<std::uint32_t>(4 + (8 + 16) + info.size() + (8 + data_bytes)));
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<std::uint32_t>(audio.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(audio.sample_rate * 2));
  put_u16(out, 2);
  put_u16(out, 16);
  out.insert(out.end(), info.begin(), info.end());
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (auto s : audio.samples) put_u16(out, static_cast<std::uint16_t>(s));
  return out;
}

PcmAudio decode_wav(std::span<const std::uint8_t> b) {
  if (b.size() < 12 || !tag_is(b, 0, "RIFF") || !tag_is(b, 8, "WAVE")) throw ParseError("not a RIFF/WAVE file");
  PcmAudio audio;
  bool have_fmt = false;
  bool have_data = false;
  std::size_t at = 12;
  while (at + 8 <= b.size()) {
    const std::uint32_t size = get_u32(b, at + 4);
    const std::size_t body = at + 8;
    if (body + size > b.size()) throw ParseError("truncated WAV chunk");
    if (tag_is(b, at, "fmt ")) {
      if (size < 16) throw ParseError("short fmt chunk");
      const auto format = get_u16(b, body);
      const auto channels = get_u16(b, body + 2);
      const auto bits = get_u16(b, body + 14);
      if (format != 1 || channels != 1 || bits != 16) {
        throw ParseError("only 16-bit PCM mono WAV is supported");
      }
      audio.sample_rate = static_cast<int>(get_u32(b, body + 4));
      have_fmt = true;
    } else if (tag_is(b, at, "data")) {
      audio.samples.resize(size / 2);
      for (std::size_t i = 0; i < audio.samples.size(); ++i) {
        audio.samples[i] = static_cast<std::int16_t>(get_u16(b, body + 2 * i));
      }
      have_data = true;
    } else if (tag_is(b, at, "LIST") && size >= 4 && tag_is(b, body, "INFO")) {
      std::size_t sub = body + 4;
      while (sub + 8 <= body + size) {
        const std::uint32_t len = get_u32(b, sub + 4);
        if (tag_is(b, sub, "ICMT")) {
          std::string text(reinterpret_cast<const char*>(b.data() + sub + 8), len);
          audio.comment = text.substr(0, text.find('\0'));
        }
        sub += 8 + len + (len % 2);
      }
    }
    at = body + size + (size % 2);
  }
  if (!have_fmt || !have_data) throw ParseError("WAV lacks fmt or data chunk");
  return audio;
}

void write_wav(const std::filesystem::path& path, const PcmAudio& audio) {
  const auto bytes = encode_wav(audio);
  write_file(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

PcmAudio read_wav(const std::filesystem::path& path) {
  const auto raw = read_file(path);
  try {
    return decode_wav(std::span(reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace aaechat::speech

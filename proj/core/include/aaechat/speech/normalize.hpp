#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "aaechat/common/diagnostics.hpp"

namespace aaechat::speech {

/// Largest value spelled out; bigger numbers pass through unchanged.
inline constexpr std::uint64_t kMaxSpelledNumber = 1'000'000'000;

/// English cardinal, e.g. 1234 -> "one thousand two hundred thirty-four".
/// Throws ValidationError above kMaxSpelledNumber.
std::string number_to_words(std::uint64_t value);

/// Rewrites numbers, currency and percentages as words so a TTS model reads
/// them naturally: "50%" -> "fifty percent", "$5.50" -> "five dollars and
/// fifty cents", "3.5" -> "three point five", "1,200" -> "one thousand two
/// hundred". Other symbols are kept. Numeric forms it does not understand
/// ("1st", "3:30", values above one billion) are left as-is and reported.
/// Idempotent.
std::string normalize_for_tts(std::string_view text, Diagnostics* diag = nullptr);

}  // namespace aaechat::speech

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace aaechat::speech {

/// Rule-based sentence splitter. A boundary is terminal punctuation
/// (. ! ?, optionally followed by closing quotes or brackets), then
/// whitespace, then an uppercase letter (optionally behind an opening quote).
/// Periods after common abbreviations and single-letter initials are not
/// boundaries. Sentences come back trimmed with whitespace squashed.
std::vector<std::string> split_sentences(std::string_view text);

/// True if `token` (the word carrying a trailing period, period included)
/// is treated as an abbreviation.
bool is_abbreviation(std::string_view token);

inline constexpr std::size_t kDefaultSplitThreshold = 30;

/// Texts of at most `word_threshold` words come back as one segment. Longer
/// texts are cut at sentence boundaries and consecutive sentences are packed
/// greedily while a segment stays within the threshold; a single sentence
/// longer than the threshold is kept whole. Joining the segments with single
/// spaces yields the whitespace-squashed input. Throws ValidationError if
/// word_threshold is 0.
std::vector<std::string> split_long_utterance(std::string_view text,
                                              std::size_t word_threshold = kDefaultSplitThreshold);

}  // namespace aaechat::speech

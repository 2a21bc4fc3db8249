#include "aaechat/speech/sentences.hpp"

#include <array>
#include <cctype>

#include "aaechat/common/errors.hpp"
#include "aaechat/common/text.hpp"

namespace aaechat::speech {
namespace {

constexpr std::array<std::string_view, 30> kAbbreviations = {
    "mr",   "mrs",  "ms",   "dr",  "prof", "sr",  "jr",  "st",  "mt",   "vs",
    "etc",  "e.g",  "i.e",  "inc", "ltd",  "co",  "corp", "gov", "gen", "capt",
    "lt",   "sgt",  "rev",  "hon", "a.m",  "p.m", "u.s", "u.k", "approx", "dept"};

bool is_upper_start(std::string_view s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s.front()));
}

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }
bool is_opener(char c) { return c == '"' || c == '\'' || c == '(' || c == '['; }

// Does the word `token` end a sentence, given the word that follows it?
bool ends_sentence(std::string_view token, std::string_view next) {
  std::size_t end = token.size();
  while (end > 0 && is_closer(token[end - 1])) --end;
  // Closing typographic quotes (U+201D, U+2019) are three bytes.
  while (end >= 3 && token.substr(end - 3, 2) == "\xE2\x80" &&
         (token[end - 1] == '\x9D' || token[end - 1] == '\x99')) {
    end -= 3;
  }
  if (end == 0) return false;
  const char terminal = token[end - 1];
  if (terminal != '.' && terminal != '!' && terminal != '?') return false;
  if (terminal == '.' && is_abbreviation(token.substr(0, end))) return false;
  std::size_t start = 0;
  while (start < next.size() && is_opener(next[start])) ++start;
  if (next.substr(start).starts_with("\xE2\x80\x9C")) start += 3;
  return is_upper_start(next.substr(start));
}

}  // namespace

bool is_abbreviation(std::string_view token) {
  if (!token.ends_with('.')) return false;
  std::string_view word = token.substr(0, token.size() - 1);
  while (!word.empty() && is_opener(word.front())) word.remove_prefix(1);
  if (word.size() == 1 && std::isupper(static_cast<unsigned char>(word.front()))) return true;
  const auto folded = text::to_lower(word);
  for (auto abbr : kAbbreviations) {
    if (folded == abbr) return true;
  }
  return false;
}

std::vector<std::string> split_sentences(std::string_view input) {
  const auto words = text::split_whitespace(input);
  std::vector<std::string> sentences;
  std::vector<std::string> current;
  for (std::size_t i = 0; i < words.size(); ++i) {
    current.push_back(words[i]);
    const bool last = i + 1 == words.size();
    if (last || ends_sentence(words[i], words[i + 1])) {
      sentences.push_back(text::join(current, " "));
      current.clear();
    }
  }
  return sentences;
}

std::vector<std::string> split_long_utterance(std::string_view input, std::size_t word_threshold) {
  if (word_threshold == 0) throw ValidationError("split threshold must be at least 1 word");
  const auto squashed = text::squash_whitespace(input);
  if (squashed.empty()) return {};
  if (text::word_count(squashed) <= word_threshold) return {squashed};
  std::vector<std::string> segments;
  std::string current;
  std::size_t current_words = 0;
  for (auto& sentence : split_sentences(squashed)) {
    const auto n = text::word_count(sentence);
    if (!current.empty() && current_words + n > word_threshold) {
      segments.push_back(std::move(current));
      current.clear();
      current_words = 0;
    }
    if (!current.empty()) current += ' ';
    current += sentence;
    current_words += n;
  }
  if (!current.empty()) segments.push_back(std::move(current));
  return segments;
}

}  // namespace aaechat::speech

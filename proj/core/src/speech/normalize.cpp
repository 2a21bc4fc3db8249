#include "aaechat/speech/normalize.hpp"

#include <array>
#include <cctype>

#include "aaechat/common/errors.hpp"

namespace aaechat::speech {
namespace {

constexpr std::array<std::string_view, 20> kOnes = {
    "zero",    "one",     "two",       "three",    "four",     "five",    "six",
    "seven",   "eight",   "nine",      "ten",      "eleven",   "twelve",  "thirteen",
    "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"};
constexpr std::array<std::string_view, 10> kTens = {"",      "",      "twenty",  "thirty", "forty",
                                                    "fifty", "sixty", "seventy", "eighty", "ninety"};

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string below_thousand(unsigned n) {
  std::string out;
  if (n >= 100) {
    out = std::string(kOnes[n / 100]) + " hundred";
    n %= 100;
    if (n == 0) return out;
    out += ' ';
  }
  if (n < 20) return out + std::string(kOnes[n]);
  out += kTens[n / 10];
  if (n % 10 != 0) out += "-" + std::string(kOnes[n % 10]);
  return out;
}

std::string digits_to_words(std::string_view digits) {
  std::string out;
  for (char c : digits) {
    if (!out.empty()) out += ' ';
    out += kOnes[static_cast<std::size_t>(c - '0')];
  }
  return out;
}

// A scanned numeric token: [$] int [. frac] [%].
struct NumberToken {
  std::size_t end = 0;  // one past the token
  bool currency = false;
  bool percent = false;
  std::string integer;  // digits only, commas removed
  std::string fraction;
  bool grouped = false;
};

// Scans digits with optional well-formed thousands separators.
std::size_t scan_integer(std::string_view s, std::size_t i, NumberToken& tok) {
  std::size_t start = i;
  while (i < s.size() && is_digit(s[i])) ++i;
  tok.integer.assign(s.substr(start, i - start));
  if (tok.integer.size() <= 3) {
    while (i + 3 < s.size() + 0 && s[i] == ',' && is_digit(s[i + 1]) && is_digit(s[i + 2]) &&
           is_digit(s[i + 3]) && (i + 4 >= s.size() || !is_digit(s[i + 4]))) {
      tok.integer.append(s.substr(i + 1, 3));
      tok.grouped = true;
      i += 4;
    }
  }
  return i;
}

std::string spell_integer(const std::string& digits) {
  if (digits.size() > 1 && digits.front() == '0') return digits_to_words(digits);
  return number_to_words(std::stoull(digits));
}

bool too_large(const std::string& digits) {
  std::size_t first = digits.find_first_not_of('0');
  if (first == std::string::npos) return false;
  std::string_view sig = std::string_view(digits).substr(first);
  return sig.size() > 10 || std::stoull(std::string(sig)) > kMaxSpelledNumber;
}

std::string currency_words(const NumberToken& tok) {
  const bool plain = tok.integer.empty() || tok.integer.front() != '0' || tok.integer.size() == 1;
  if (!plain) return digits_to_words(tok.integer) + " dollars";
  const std::uint64_t dollars = tok.integer.empty() ? 0 : std::stoull(tok.integer);
  if (tok.fraction.size() > 2) {
    return number_to_words(dollars) + " point " + digits_to_words(tok.fraction) + " dollars";
  }
  unsigned cents = 0;
  if (!tok.fraction.empty()) {
    cents = static_cast<unsigned>(std::stoul(tok.fraction));
    if (tok.fraction.size() == 1) cents *= 10;
  }
  std::string out;
  if (dollars > 0 || cents == 0) {
    out = number_to_words(dollars) + (dollars == 1 ? " dollar" : " dollars");
  }
  if (cents > 0) {
    if (!out.empty()) out += " and ";
    out += below_thousand(cents) + (cents == 1 ? " cent" : " cents");
  }
  return out;
}

}  // namespace

std::string number_to_words(std::uint64_t value) {
  if (value > kMaxSpelledNumber) throw ValidationError("number too large to spell: " + std::to_string(value));
  if (value == 0) return "zero";
  static constexpr std::array<std::pair<std::uint64_t, std::string_view>, 3> kScales = {
      {{1'000'000'000, "billion"}, {1'000'000, "million"}, {1'000, "thousand"}}};
  std::string out;
  for (const auto& [scale, name] : kScales) {
    if (value >= scale) {
      if (!out.empty()) out += ' ';
      out += below_thousand(static_cast<unsigned>(value / scale)) + " " + std::string(name);
      value %= scale;
    }
  }
  if (value > 0) {
    if (!out.empty()) out += ' ';
    out += below_thousand(static_cast<unsigned>(value));
  }
  return out;
}

std::string normalize_for_tts(std::string_view s, Diagnostics* diag) {
  std::string out;
  out.reserve(s.size() + 16);
  std::size_t i = 0;
  while (i < s.size()) {
    const bool dollar = s[i] == '$' && i + 1 < s.size() && is_digit(s[i + 1]);
    const bool starts_number = dollar || is_digit(s[i]);
    const bool boundary_before = i == 0 || !(is_alnum(s[i - 1]) || s[i - 1] == '.' || s[i - 1] == ',');
    if (!starts_number || !boundary_before) {
      // Copy an alphanumeric run in one go so digits glued to letters
      // ("A1", "mp3") are never treated as numbers.
      if (is_alnum(s[i])) {
        std::size_t j = i;
        while (j < s.size() && is_alnum(s[j])) ++j;
        out.append(s.substr(i, j - i));
        i = j;
      } else {
        out.push_back(s[i++]);
      }
      continue;
    }
    NumberToken tok;
    tok.currency = dollar;
    std::size_t j = scan_integer(s, dollar ? i + 1 : i, tok);
    if (j + 1 < s.size() && s[j] == '.' && is_digit(s[j + 1])) {
      std::size_t k = j + 1;
      while (k < s.size() && is_digit(s[k])) ++k;
      tok.fraction.assign(s.substr(j + 1, k - j - 1));
      j = k;
    }
    if (j < s.size() && s[j] == '%') {
      tok.percent = true;
      ++j;
    }
    // Anything glued on after the number makes it a form we don't read.
    std::size_t k = j;
    bool unknown = tok.currency && tok.percent;
    if (k < s.size() && (is_alnum(s[k]) || s[k] == '_')) unknown = true;
    if (k + 1 < s.size() && (s[k] == ':' || s[k] == '/' || s[k] == '.' || s[k] == ',') && is_digit(s[k + 1])) {
      unknown = true;
    }
    if (!unknown && too_large(tok.integer)) unknown = true;
    if (unknown) {
      while (k < s.size() && (is_alnum(s[k]) || ((s[k] == ':' || s[k] == '/' || s[k] == '.' || s[k] == ',' ||
                                                  s[k] == '%' || s[k] == '$') &&
                                                 k + 1 < s.size() && is_alnum(s[k + 1])))) {
        ++k;
      }
      const auto token = s.substr(i, k - i);
      warn(diag, "numeric form '" + std::string(token) + "' left unchanged");
      out.append(token);
      i = k;
      continue;
    }
    std::string words;
    if (tok.currency) {
      words = currency_words(tok);
    } else {
      words = spell_integer(tok.integer);
      if (!tok.fraction.empty()) words += " point " + digits_to_words(tok.fraction);
      if (tok.percent) words += " percent";
    }
    out += words;
    i = j;
  }
  return out;
}

}  // namespace aaechat::speech

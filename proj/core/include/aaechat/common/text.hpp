#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace aaechat::text {

std::string_view trim(std::string_view s);

/// ASCII case folding; bytes >= 0x80 are left untouched.
std::string to_lower(std::string_view s);

/// Trim, then fold. Used wherever labels are compared.
std::string fold_label(std::string_view s);

/// Splits on runs of ASCII whitespace; no empty tokens.
std::vector<std::string> split_whitespace(std::string_view s);

/// Collapses whitespace runs to single spaces and trims the ends.
std::string squash_whitespace(std::string_view s);

std::size_t word_count(std::string_view s);

bool starts_with_icase(std::string_view s, std::string_view prefix);

/// Case-insensitive (ASCII) substring test.
bool contains_icase(std::string_view haystack, std::string_view needle);

/// Longest prefix of at most `max_bytes` that does not split a UTF-8 sequence.
std::string_view utf8_prefix(std::string_view s, std::size_t max_bytes);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace aaechat::text

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace aaechat::csv {

using Row = std::vector<std::string>;

/// RFC 4180: quoted fields may hold commas, quotes ("") and newlines.
/// Throws ParseError on an unterminated quote.
std::vector<Row> parse(std::string_view content);

/// Quotes a field only when it contains a comma, quote, or line break.
std::string escape(std::string_view field);

std::string format_row(const Row& row);

}  // namespace aaechat::csv

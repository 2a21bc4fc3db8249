#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace aaechat {

// Line-delimited JSON helpers. Blank lines are ignored on read.

/// Calls `fn(line_number, line)` for every non-blank line.
void for_each_line(std::istream& in,
                   const std::function<void(std::size_t, const std::string&)>& fn);

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, const std::vector<nlohmann::json>& rows);

nlohmann::json read_json_file(const std::filesystem::path& path);
/// Pretty-prints with two-space indent and a trailing newline.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace aaechat

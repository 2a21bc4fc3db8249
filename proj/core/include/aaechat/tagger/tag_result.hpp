#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aaechat/common/diagnostics.hpp"
#include "aaechat/tagger/taxonomy.hpp"

namespace aaechat::tagger {

struct Change {
  std::string aave_phrase;
  std::string sae_phrase;
  /// Without any "NEW - " prefix.
  std::string feature_label;
  Category category = Category::other;
  /// The model proposed a feature outside the taxonomy ("NEW - <feature>").
  bool is_new = false;
  /// aave_phrase occurs (case-insensitively) in the tagged sentence.
  bool span_found = true;

  bool operator==(const Change&) const = default;
};

struct TagResult {
  std::string aave_sentence;
  std::string sae_translation;
  std::vector<Change> changes;

  std::size_t count(Category category) const;

  bool operator==(const TagResult&) const = default;
};

/// Extracts the first balanced JSON object from `raw`, skipping any prose or
/// markdown fences around it. Throws ParseError when there is none.
std::string extract_json_object(std::string_view raw);

/// Tolerant parser for the tagging model's output. Malformed change tuples
/// are skipped with a diagnostic; a missing object or required key throws
/// ParseError.
TagResult parse_tag_result(std::string_view raw, Diagnostics* diag = nullptr);

/// The tagging output schema: {"AAVE sentence", "SAE translation", "Changes"}.
nlohmann::json to_json(const TagResult& result);
std::string serialize_tag_result(const TagResult& result);

/// Re-evaluates span_found against `sentence`.
void mark_spans(TagResult& result);

}  // namespace aaechat::tagger

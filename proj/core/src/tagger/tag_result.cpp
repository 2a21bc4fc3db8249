#include "aaechat/tagger/tag_result.hpp"

#include "aaechat/common/errors.hpp"
#include "aaechat/common/text.hpp"

namespace aaechat::tagger {

using nlohmann::json;

namespace {

constexpr std::string_view kSentenceKey = "AAVE sentence";
constexpr std::string_view kTranslationKey = "SAE translation";
constexpr std::string_view kChangesKey = "Changes";
constexpr std::string_view kNewPrefix = "NEW - ";

// Returns one past the '}' closing the object opened at `open`, or npos.
std::size_t match_brace(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    char c = s[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

const json* find_key(const json& obj, std::string_view key) {
  const auto wanted = text::fold_label(key);
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (text::fold_label(it.key()) == wanted) return &it.value();
  }
  return nullptr;
}

std::string required_string(const json& obj, std::string_view key) {
  const json* v = find_key(obj, key);
  if (v == nullptr) throw ParseError("tag result lacks key \"" + std::string(key) + "\"");
  if (!v->is_string()) throw ParseError("tag result key \"" + std::string(key) + "\" is not a string");
  return v->get<std::string>();
}

}  // namespace

std::size_t TagResult::count(Category category) const {
  std::size_t n = 0;
  for (const auto& c : changes) n += c.category == category ? 1 : 0;
  return n;
}

std::string extract_json_object(std::string_view raw) {
  for (std::size_t open = raw.find('{'); open != std::string_view::npos; open = raw.find('{', open + 1)) {
    auto end = match_brace(raw, open);
    if (end == std::string_view::npos) break;
    auto candidate = raw.substr(open, end - open);
    if (json::accept(candidate)) return std::string(candidate);
  }
  throw ParseError("no JSON object found in tagger output");
}

void mark_spans(TagResult& result) {
  for (auto& c : result.changes) c.span_found = text::contains_icase(result.aave_sentence, c.aave_phrase);
}

TagResult parse_tag_result(std::string_view raw, Diagnostics* diag) {
  const json doc = json::parse(extract_json_object(raw));
  TagResult result;
  result.aave_sentence = required_string(doc, kSentenceKey);
  result.sae_translation = required_string(doc, kTranslationKey);
  const json* changes = find_key(doc, kChangesKey);
  if (changes == nullptr) throw ParseError("tag result lacks key \"Changes\"");
  if (!changes->is_array()) throw ParseError("\"Changes\" is not an array");
  std::size_t position = 0;
  for (const auto& tuple : *changes) {
    const auto where = "change " + std::to_string(position++);
    if (!tuple.is_array() || tuple.size() != 4) {
      warn(diag, where + ": expected [AAVE phrase, SAE phrase, feature, category]; skipped");
      continue;
    }
    bool all_strings = true;
    for (const auto& field : tuple) all_strings = all_strings && field.is_string();
    if (!all_strings) {
      warn(diag, where + ": non-string field; skipped");
      continue;
    }
    Change c;
    c.aave_phrase = tuple[0].get<std::string>();
    c.sae_phrase = tuple[1].get<std::string>();
    std::string label(text::trim(tuple[2].get<std::string>()));
    if (text::starts_with_icase(label, "NEW -") || text::starts_with_icase(label, "NEW-")) {
      c.is_new = true;
      label = std::string(text::trim(label.substr(label.find('-') + 1)));
    }
    c.feature_label = std::move(label);
    c.category = parse_category(tuple[3].get<std::string>(), diag);
    if (c.aave_phrase == c.sae_phrase) {
      warn(diag, where + ": AAVE and SAE phrases are identical; skipped");
      continue;
    }
    result.changes.push_back(std::move(c));
  }
  mark_spans(result);
  for (const auto& c : result.changes) {
    if (!c.span_found) warn(diag, "change phrase '" + c.aave_phrase + "' not found in sentence");
  }
  return result;
}

json to_json(const TagResult& result) {
  json changes = json::array();
  for (const auto& c : result.changes) {
    std::string label = c.is_new ? std::string(kNewPrefix) + c.feature_label : c.feature_label;
    changes.push_back({c.aave_phrase, c.sae_phrase, label, to_string(c.category)});
  }
  return {{std::string(kSentenceKey), result.aave_sentence},
          {std::string(kTranslationKey), result.sae_translation},
          {std::string(kChangesKey), changes}};
}

std::string serialize_tag_result(const TagResult& result) { return to_json(result).dump(); }

}  // namespace aaechat::tagger

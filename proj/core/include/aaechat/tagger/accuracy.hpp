#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aaechat/tagger/tag_result.hpp"

namespace aaechat::tagger {

struct GoldLabel {
  std::string span;
  std::string feature;
  Category category = Category::other;
};

struct GoldExample {
  std::string text;
  std::vector<GoldLabel> labels;
};

/// Reads `[{text, labels: [{span, feature, category}]}]`. Throws
/// ValidationError if a span does not occur in its text.
std::vector<GoldExample> gold_from_json(const nlohmann::json& doc);
nlohmann::json gold_to_json(const std::vector<GoldExample>& gold);

/// Lowercase, punctuation to spaces, whitespace squashed.
std::string normalize_feature_label(std::string_view label);

/// Lowercased whitespace tokens with edge punctuation (apostrophes kept)
/// stripped.
std::vector<std::string> span_tokens(std::string_view span);

/// A predicted change identifies a gold label when the normalized labels are
/// equal and the phrases share at least one token.
bool identifies(const Change& predicted, const GoldLabel& gold);

inline constexpr std::string_view kMatcherDescription =
    "gold label identified iff some predicted change has a normalized feature label equal to the "
    "gold feature (lowercase, punctuation removed, whitespace squashed) and an AAVE phrase sharing "
    ">= 1 token with the gold span";

struct CategoryTally {
  std::size_t total = 0;
  std::size_t identified = 0;
};

struct AccuracyReport {
  std::size_t total_labels = 0;
  std::size_t identified = 0;
  /// Identification rate: identified / total_labels (1.0 when there are none).
  double accuracy = 1.0;
  /// Predicted changes that identify no gold label.
  std::size_t false_positives = 0;
  std::size_t predicted_changes = 0;
  std::map<Category, CategoryTally> per_category;

  nlohmann::json to_json() const;
};

/// `predictions[i]` is the tagger output for `gold[i].text`. Throws
/// ValidationError on a length mismatch.
AccuracyReport evaluate_accuracy(const std::vector<GoldExample>& gold,
                                 const std::vector<TagResult>& predictions);

}  // namespace aaechat::tagger

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "aaechat/common/diagnostics.hpp"

namespace aaechat::tagger {

enum class Category { phonology, morphology, syntax, semantics, other };

inline constexpr Category kAllCategories[] = {Category::phonology, Category::morphology, Category::syntax,
                                              Category::semantics, Category::other};

std::string_view to_string(Category category);

/// Case-insensitive. "phonetics"/"phonetic"/"phonological" fold into
/// phonology, "lexical" into semantics, adjectival forms into their noun.
/// Anything unrecognized becomes `other` and is reported through `diag`.
Category parse_category(std::string_view name, Diagnostics* diag = nullptr);

struct FeatureEntry {
  std::string name;
  std::string description;
  /// Typical linguistic category of the feature. Informational only.
  Category category = Category::other;
};

class FeatureTaxonomy {
 public:
  /// Throws ValidationError on duplicate or blank names.
  explicit FeatureTaxonomy(std::vector<FeatureEntry> entries);

  const std::vector<FeatureEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const FeatureEntry* find(std::string_view name) const;

  /// Built-in list of common AAE features (more than 30 entries).
  static FeatureTaxonomy standard();

  static FeatureTaxonomy from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;

 private:
  std::vector<FeatureEntry> entries_;
};

/// Minimum entry count for a taxonomy used in tagging runs.
inline constexpr std::size_t kMinTaxonomyEntries = 30;

}  // namespace aaechat::tagger

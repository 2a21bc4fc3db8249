#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aaechat/tagger/tag_result.hpp"

namespace aaechat::tagger {

struct TaggedTurn {
  std::string chatbot_id;
  std::string turn_id;
  TagResult result;
};

struct FeatureRate {
  std::string chatbot_id;
  Category category = Category::other;
  std::size_t turns = 0;
  std::size_t changes = 0;
  /// changes / turns.
  double rate = 0.0;

  bool operator==(const FeatureRate&) const = default;
};

/// Mean changes per analyzed turn for each (chatbot, category). Every
/// category appears for every chatbot; rows are ordered by chatbot id, then
/// category. Turns with no changes must be included by the caller; a repeated
/// (chatbot, turn) pair throws ValidationError.
std::vector<FeatureRate> per_turn_feature_rates(const std::vector<TaggedTurn>& tagged);

struct StratumKey {
  std::string chatbot_id;
  std::string domain;
};

/// Seeded half-sample stratified by (chatbot, domain): floor(k/2) from each
/// stratum, topped up from odd strata so the total is floor(N/2). Returns
/// indices into `items` in increasing order.
std::vector<std::size_t> stratified_half_sample(const std::vector<StratumKey>& items, std::uint64_t seed);

}  // namespace aaechat::tagger

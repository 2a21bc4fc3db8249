#pragma once

#include <filesystem>
#include <mutex>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "aaechat/common/errors.hpp"

namespace aaechat::evalharness {

struct Rating {
  std::string evaluator_id;
  std::string dialogue_id;
  std::string chatbot_id;
  std::string metric;
  int score = 0;
  std::string timestamp;

  auto key() const { return std::tie(evaluator_id, dialogue_id, chatbot_id, metric); }
  bool operator==(const Rating&) const = default;
};

inline constexpr std::string_view kRatingsHeader = "evaluator_id,dialogue_id,chatbot_id,metric,score,timestamp";

/// Parses the ratings CSV (header required, columns in any order). Throws
/// ParseError naming the offending line.
std::vector<Rating> parse_ratings_csv(std::string_view content);
std::vector<Rating> read_ratings_csv(const std::filesystem::path& path);
std::string format_rating_row(const Rating& rating);

/// Field-level problems with a submitted rating, as (field, message) pairs.
/// Empty when valid. Checks presence, the 1..5 score range, and that the
/// metric exists and applies to the chatbot's modality.
std::vector<std::pair<std::string, std::string>> validate_rating_json(const nlohmann::json& body);
Rating rating_from_json(const nlohmann::json& body);
nlohmann::json to_json(const Rating& rating);

class DuplicateRatingError : public Error {
 public:
  using Error::Error;
};

/// Append-only CSV store. Every append goes through one mutex; a repeated
/// (evaluator, dialogue, chatbot, metric) key is rejected.
class RatingStore {
 public:
  explicit RatingStore(std::filesystem::path path);

  /// Throws DuplicateRatingError.
  void append(const Rating& rating);
  bool contains(const Rating& rating) const;
  std::vector<Rating> all() const;

 private:
  using Key = std::tuple<std::string, std::string, std::string, std::string>;
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::set<Key> keys_;
  std::vector<Rating> rows_;
};

}  // namespace aaechat::evalharness

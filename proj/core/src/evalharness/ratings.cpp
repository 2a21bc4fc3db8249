#include "aaechat/evalharness/ratings.hpp"

#include <charconv>
#include <fstream>
#include <map>

#include "aaechat/common/csv.hpp"
#include "aaechat/common/jsonl.hpp"
#include "aaechat/common/text.hpp"
#include "aaechat/evalharness/metrics.hpp"

namespace aaechat::evalharness {

using nlohmann::json;

namespace {

int parse_score(std::string_view s) {
  s = text::trim(s);
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("score '" + std::string(s) + "' is not an integer");
  return value;
}

}  // namespace

std::vector<Rating> parse_ratings_csv(std::string_view content) {
  auto rows = csv::parse(content);
  if (rows.empty()) throw ParseError("ratings CSV has no header");
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < rows[0].size(); ++i) column[text::fold_label(rows[0][i])] = i;
  for (const char* required : {"evaluator_id", "dialogue_id", "chatbot_id", "metric", "score"}) {
    if (!column.contains(required)) throw ParseError(std::string("ratings CSV lacks column ") + required);
  }
  std::vector<Rating> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto get = [&](const char* name) -> std::string {
      auto it = column.find(name);
      if (it == column.end()) return {};
      if (it->second >= row.size()) throw ParseError("ratings CSV row " + std::to_string(r + 1) + " is short");
      return row[it->second];
    };
    Rating rating;
    rating.evaluator_id = get("evaluator_id");
    rating.dialogue_id = get("dialogue_id");
    rating.chatbot_id = get("chatbot_id");
    rating.metric = get("metric");
    try {
      rating.score = parse_score(get("score"));
    } catch (const ParseError& e) {
      throw ParseError("ratings CSV row " + std::to_string(r + 1) + ": " + e.what());
    }
    rating.timestamp = get("timestamp");
    out.push_back(std::move(rating));
  }
  return out;
}

std::vector<Rating> read_ratings_csv(const std::filesystem::path& path) { return parse_ratings_csv(read_file(path)); }

std::string format_rating_row(const Rating& r) {
  return csv::format_row({r.evaluator_id, r.dialogue_id, r.chatbot_id, r.metric, std::to_string(r.score), r.timestamp});
}

std::vector<std::pair<std::string, std::string>> validate_rating_json(const json& body) {
  std::vector<std::pair<std::string, std::string>> errors;
  if (!body.is_object()) {
    errors.emplace_back("body", "must be a JSON object");
    return errors;
  }
  for (const char* field : {"evaluator_id", "dialogue_id", "chatbot_id", "metric"}) {
    if (!body.contains(field) || !body[field].is_string() || text::trim(body[field].get<std::string>()).empty()) {
      errors.emplace_back(field, "required non-empty string");
    }
  }
  if (!body.contains("score") || !body["score"].is_number_integer()) {
    errors.emplace_back("score", "required integer");
  } else {
    auto score = body["score"].get<long long>();
    if (score < 1 || score > 5) errors.emplace_back("score", "must be between 1 and 5");
  }
  if (body.contains("timestamp") && !body["timestamp"].is_string()) {
    errors.emplace_back("timestamp", "must be a string");
  }
  if (body.contains("metric") && body["metric"].is_string()) {
    const Metric* m = find_metric(body["metric"].get<std::string>());
    if (m == nullptr) {
      errors.emplace_back("metric", "unknown metric");
    } else if (m->reversed && text::fold_label(body["metric"].get<std::string>()) != text::fold_label(m->name)) {
      errors.emplace_back("metric", "submit '" + m->name + "' ratings, not the reversed report name");
    } else if (body.contains("chatbot_id") && body["chatbot_id"].is_string() &&
               !m->applies_to(infer_chatbot_modality(body["chatbot_id"].get<std::string>()))) {
      errors.emplace_back("metric", "does not apply to this chatbot's modality");
    }
  }
  return errors;
}

Rating rating_from_json(const json& body) {
  auto errors = validate_rating_json(body);
  if (!errors.empty()) throw ValidationError(errors.front().first + ": " + errors.front().second);
  Rating r;
  r.evaluator_id = body["evaluator_id"].get<std::string>();
  r.dialogue_id = body["dialogue_id"].get<std::string>();
  r.chatbot_id = body["chatbot_id"].get<std::string>();
  r.metric = find_metric(body["metric"].get<std::string>())->name;
  r.score = body["score"].get<int>();
  r.timestamp = body.value("timestamp", "");
  return r;
}

json to_json(const Rating& r) {
  return {{"evaluator_id", r.evaluator_id}, {"dialogue_id", r.dialogue_id}, {"chatbot_id", r.chatbot_id},
          {"metric", r.metric},             {"score", r.score},             {"timestamp", r.timestamp}};
}

RatingStore::RatingStore(std::filesystem::path path) : path_(std::move(path)) {
  if (std::filesystem::exists(path_)) {
    for (auto& r : read_ratings_csv(path_)) {
      keys_.insert({r.evaluator_id, r.dialogue_id, r.chatbot_id, r.metric});
      rows_.push_back(std::move(r));
    }
  } else {
    write_file(path_, std::string(kRatingsHeader) + "\n");
  }
}

void RatingStore::append(const Rating& rating) {
  std::lock_guard lock(mu_);
  Key key{rating.evaluator_id, rating.dialogue_id, rating.chatbot_id, rating.metric};
  if (keys_.contains(key)) {
    throw DuplicateRatingError("rating already recorded for " + rating.evaluator_id + "/" + rating.dialogue_id + "/" +
                               rating.chatbot_id + "/" + rating.metric);
  }
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot append to " + path_.string());
  out << format_rating_row(rating);
  out.flush();
  if (!out) throw IoError("append failed: " + path_.string());
  keys_.insert(std::move(key));
  rows_.push_back(rating);
}

bool RatingStore::contains(const Rating& rating) const {
  std::lock_guard lock(mu_);
  return keys_.contains({rating.evaluator_id, rating.dialogue_id, rating.chatbot_id, rating.metric});
}

std::vector<Rating> RatingStore::all() const {
  std::lock_guard lock(mu_);
  return rows_;
}

}  // namespace aaechat::evalharness

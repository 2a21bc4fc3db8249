#include "aaechat/tagger/accuracy.hpp"

#include <cctype>

#include "aaechat/common/errors.hpp"
#include "aaechat/common/text.hpp"

namespace aaechat::tagger {

using nlohmann::json;

std::vector<GoldExample> gold_from_json(const json& doc) {
  if (!doc.is_array()) throw ParseError("gold set must be a JSON array");
  std::vector<GoldExample> gold;
  for (const auto& item : doc) {
    GoldExample ex;
    ex.text = item.at("text").get<std::string>();
    for (const auto& label : item.at("labels")) {
      GoldLabel l{label.at("span").get<std::string>(), label.at("feature").get<std::string>(),
                  parse_category(label.at("category").get<std::string>())};
      if (!text::contains_icase(ex.text, l.span)) {
        throw ValidationError("gold span '" + l.span + "' does not occur in '" + ex.text + "'");
      }
      ex.labels.push_back(std::move(l));
    }
    gold.push_back(std::move(ex));
  }
  return gold;
}

json gold_to_json(const std::vector<GoldExample>& gold) {
  json out = json::array();
  for (const auto& ex : gold) {
    json labels = json::array();
    for (const auto& l : ex.labels) {
      labels.push_back({{"span", l.span}, {"feature", l.feature}, {"category", to_string(l.category)}});
    }
    out.push_back({{"text", ex.text}, {"labels", labels}});
  }
  return out;
}

std::string normalize_feature_label(std::string_view label) {
  std::string s;
  s.reserve(label.size());
  for (char c : label) {
    auto u = static_cast<unsigned char>(c);
    if (u < 0x80 && !std::isalnum(u)) {
      s.push_back(' ');
    } else {
      s.push_back(u < 0x80 ? static_cast<char>(std::tolower(u)) : c);
    }
  }
  return text::squash_whitespace(s);
}

std::vector<std::string> span_tokens(std::string_view span) {
  std::vector<std::string> out;
  for (auto& tok : text::split_whitespace(text::to_lower(span))) {
    auto keep = [](char c) {
      auto u = static_cast<unsigned char>(c);
      return u >= 0x80 || std::isalnum(u) || c == '\'';
    };
    std::size_t b = 0;
    std::size_t e = tok.size();
    while (b < e && !keep(tok[b])) ++b;
    while (e > b && !keep(tok[e - 1])) --e;
    if (e > b) out.push_back(tok.substr(b, e - b));
  }
  return out;
}

bool identifies(const Change& predicted, const GoldLabel& gold) {
  if (normalize_feature_label(predicted.feature_label) != normalize_feature_label(gold.feature)) return false;
  const auto a = span_tokens(predicted.aave_phrase);
  const auto b = span_tokens(gold.span);
  for (const auto& x : a) {
    for (const auto& y : b) {
      if (x == y) return true;
    }
  }
  return false;
}

json AccuracyReport::to_json() const {
  json categories = json::object();
  for (const auto& [cat, tally] : per_category) {
    categories[std::string(to_string(cat))] = {{"total", tally.total}, {"identified", tally.identified}};
  }
  return {{"identification_rate", accuracy},
          {"total_labels", total_labels},
          {"identified", identified},
          {"predicted_changes", predicted_changes},
          {"false_positives", false_positives},
          {"per_category", categories},
          {"matcher", kMatcherDescription}};
}

AccuracyReport evaluate_accuracy(const std::vector<GoldExample>& gold, const std::vector<TagResult>& predictions) {
  if (gold.size() != predictions.size()) {
    throw ValidationError("gold has " + std::to_string(gold.size()) + " texts but " +
                          std::to_string(predictions.size()) + " predictions were given");
  }
  AccuracyReport report;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto& changes = predictions[i].changes;
    std::vector<bool> used(changes.size(), false);
    for (const auto& label : gold[i].labels) {
      auto& tally = report.per_category[label.category];
      ++tally.total;
      ++report.total_labels;
      bool hit = false;
      for (std::size_t j = 0; j < changes.size(); ++j) {
        if (identifies(changes[j], label)) {
          hit = true;
          used[j] = true;
        }
      }
      if (hit) {
        ++tally.identified;
        ++report.identified;
      }
    }
    report.predicted_changes += changes.size();
    for (bool u : used) report.false_positives += u ? 0 : 1;
  }
  report.accuracy = report.total_labels == 0
                        ? 1.0
                        : static_cast<double>(report.identified) / static_cast<double>(report.total_labels);
  return report;
}

}  // namespace aaechat::tagger

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace aaechat::evalharness {

/// Which chatbot presentations a metric applies to.
enum class MetricModality { both, text_only, spoken_only };

/// How a chatbot is presented to raters.
enum class ChatbotModality { text, spoken };

/// attribute: Strongly Disagree..Strongly Agree. rate: Never..Always.
enum class MetricKind { attribute, rate };

std::string_view to_string(MetricModality m);
std::string_view to_string(ChatbotModality m);
std::string_view to_string(MetricKind k);
ChatbotModality chatbot_modality_from_string(std::string_view name);

struct Metric {
  /// Name raters see and the ratings store uses.
  std::string name;
  /// Name used in reports; differs only for reversed metrics.
  std::string report_name;
  /// Statement shown to raters. "{role}" is filled with the chatbot's role.
  std::string statement;
  MetricModality modality = MetricModality::both;
  MetricKind kind = MetricKind::attribute;
  bool reversed = false;

  bool applies_to(ChatbotModality m) const;
};

/// The 15 evaluation metrics: 9 shared, 3 text-only, 3 spoken-only.
const std::vector<Metric>& metric_registry();

/// Looks up by name or report name, case-insensitively.
const Metric* find_metric(std::string_view name, const std::vector<Metric>& metrics = metric_registry());

std::vector<Metric> metrics_for(ChatbotModality modality, const std::vector<Metric>& metrics = metric_registry());

/// The five scale labels, score 1 first.
const std::array<std::string_view, 5>& scale_labels(MetricKind kind);

/// Ids starting with "spoken" (e.g. "spoken:high") are spoken chatbots;
/// everything else is a text chatbot.
ChatbotModality infer_chatbot_modality(std::string_view chatbot_id);

nlohmann::json to_json(const Metric& metric);

}  // namespace aaechat::evalharness

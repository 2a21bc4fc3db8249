#include "aaechat/evalharness/metrics.hpp"

#include "aaechat/common/errors.hpp"
#include "aaechat/common/text.hpp"

namespace aaechat::evalharness {

std::string_view to_string(MetricModality m) {
  switch (m) {
    case MetricModality::both:
      return "both";
    case MetricModality::text_only:
      return "text_only";
    case MetricModality::spoken_only:
      return "spoken_only";
  }
  return "?";
}

std::string_view to_string(ChatbotModality m) { return m == ChatbotModality::text ? "text" : "spoken"; }

std::string_view to_string(MetricKind k) { return k == MetricKind::attribute ? "attribute" : "rate"; }

ChatbotModality chatbot_modality_from_string(std::string_view name) {
  const auto folded = text::fold_label(name);
  if (folded == "text") return ChatbotModality::text;
  if (folded == "spoken") return ChatbotModality::spoken;
  throw ValidationError("unknown modality: " + std::string(name));
}

bool Metric::applies_to(ChatbotModality m) const {
  switch (modality) {
    case MetricModality::both:
      return true;
    case MetricModality::text_only:
      return m == ChatbotModality::text;
    case MetricModality::spoken_only:
      return m == ChatbotModality::spoken;
  }
  return false;
}

const std::vector<Metric>& metric_registry() {
  using M = MetricModality;
  using K = MetricKind;
  static const std::vector<Metric> kRegistry = {
      {"Comprehension", "Comprehension", "I feel like this chatbot would understand me well", M::both, K::attribute},
      {"Warmth", "Warmth", "I find this chatbot to be caring and empathetic", M::both, K::attribute},
      {"Offensiveness", "Inoffensiveness", "I find this chatbot to be offensive", M::both, K::attribute, true},
      {"Trustworthiness", "Trustworthiness", "I find this chatbot to be trustworthy", M::both, K::attribute},
      {"Communication Ease", "Communication Ease", "I would feel comfortable talking to this chatbot", M::both,
       K::attribute},
      {"Similarity to Self", "Similarity to Self", "I feel that this chatbot is similar to me", M::both, K::attribute},
      {"Role Appropriateness", "Role Appropriateness", "I would like a {role} chatbot to speak to me like this",
       M::both, K::attribute},
      {"Engagement Preference", "Engagement Preference",
       "I would prefer talking to the AAE Chatbot instead of the Original Chatbot", M::both, K::attribute},
      {"Dialect Expression", "Dialect Expression", "This chatbot tries to speak in African American Vernacular English",
       M::both, K::rate},
      {"Text Fidelity", "Text Fidelity", "This chatbot preserves the meaning of the original turns", M::text_only,
       K::rate},
      {"Text Grammaticality", "Text Grammaticality",
       "This chatbot produces grammatically correct responses, either in AAE or SAE", M::text_only, K::rate},
      {"Text Persona Adherence", "Text Persona Adherence",
       "This chatbot sounds like a middle-aged African American woman, speaking AAE", M::text_only, K::attribute},
      {"Speech Naturalness", "Speech Naturalness", "This chatbot sounds natural and human-like", M::spoken_only,
       K::rate},
      {"Speech Clarity", "Speech Clarity", "This chatbot speaks in a clear and understandable manner", M::spoken_only,
       K::rate},
      {"Speech Persona Adherence", "Speech Persona Adherence",
       "This chatbot has a similar voice to a middle-aged African American woman", M::spoken_only, K::attribute},
  };
  return kRegistry;
}

const Metric* find_metric(std::string_view name, const std::vector<Metric>& metrics) {
  const auto key = text::fold_label(name);
  for (const auto& m : metrics) {
    if (text::fold_label(m.name) == key || text::fold_label(m.report_name) == key) return &m;
  }
  return nullptr;
}

std::vector<Metric> metrics_for(ChatbotModality modality, const std::vector<Metric>& metrics) {
  std::vector<Metric> out;
  for (const auto& m : metrics) {
    if (m.applies_to(modality)) out.push_back(m);
  }
  return out;
}

const std::array<std::string_view, 5>& scale_labels(MetricKind kind) {
  static constexpr std::array<std::string_view, 5> kAttribute = {
      "Strongly Disagree", "Slightly Disagree", "Neutral", "Slightly Agree", "Strongly Agree"};
  static constexpr std::array<std::string_view, 5> kRate = {"Never", "Rarely", "Sometimes", "Often", "Always"};
  return kind == MetricKind::attribute ? kAttribute : kRate;
}

ChatbotModality infer_chatbot_modality(std::string_view chatbot_id) {
  return text::starts_with_icase(chatbot_id, "spoken") ? ChatbotModality::spoken : ChatbotModality::text;
}

nlohmann::json to_json(const Metric& metric) {
  nlohmann::json labels = nlohmann::json::array();
  for (auto l : scale_labels(metric.kind)) labels.push_back(l);
  return {{"name", metric.name},
          {"report_name", metric.report_name},
          {"statement", metric.statement},
          {"modality", to_string(metric.modality)},
          {"kind", to_string(metric.kind)},
          {"reversed", metric.reversed},
          {"scale", labels}};
}

}  // namespace aaechat::evalharness

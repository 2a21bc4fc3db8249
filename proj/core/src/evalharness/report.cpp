#include "aaechat/evalharness/report.hpp"

#include <cstdio>

#include "aaechat/common/csv.hpp"

namespace aaechat::evalharness {

using nlohmann::json;

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10f", value);
  return buf;
}

ReportFiles export_report(const std::vector<Aggregate>& aggregates, const ReportOptions& options) {
  ReportFiles files;
  files.csv = std::string(kReportHeader) + "\n";
  json metrics = json::object();
  for (const auto& a : aggregates) {
    const bool baseline = options.baseline_ids.contains(a.chatbot_id);
    files.csv += csv::format_row({a.chatbot_id, a.metric, std::to_string(a.n), format_number(a.mean),
                                  format_number(a.ci95_half_width), a.single_rating ? "true" : "false",
                                  baseline ? "true" : "false", options.manifest_hash});
    auto& entry = metrics[a.metric];
    if (!entry.contains("chatbots")) {
      entry["chatbots"] = json::object();
      entry["baseline"] = json::object();
    }
    // Numbers go through the fixed formatter so the JSON is byte-stable.
    json point = {{"mean", std::stod(format_number(a.mean))},
                  {"ci95", std::stod(format_number(a.ci95_half_width))},
                  {"n", a.n}};
    entry[baseline ? "baseline" : "chatbots"][a.chatbot_id] = point;
  }
  files.plot_data = {{"manifest_hash", options.manifest_hash}, {"metrics", metrics}};
  return files;
}

}  // namespace aaechat::evalharness

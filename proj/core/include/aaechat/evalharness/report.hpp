#pragma once

#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aaechat/evalharness/aggregate.hpp"

namespace aaechat::evalharness {

inline constexpr std::string_view kReportHeader =
    "chatbot_id,metric,n,mean,ci95_half_width,single_rating,is_baseline,manifest_hash";

struct ReportFiles {
  std::string csv;
  nlohmann::json plot_data;
};

struct ReportOptions {
  /// Chatbots drawn as the baseline line (e.g. the SAE text chatbot).
  std::set<std::string> baseline_ids;
  std::string manifest_hash;
};

/// CSV of aggregate rows in the given order (aggregate() already sorts) and
/// plot data keyed by metric: {"manifest_hash", "metrics": {metric:
/// {"chatbots": {id: {mean, ci95, n}}, "baseline": {id: {...}}}}}. Baseline
/// chatbots go under "baseline" so charts can draw them as a reference line.
/// Fixed-precision numbers keep re-exports byte-identical.
ReportFiles export_report(const std::vector<Aggregate>& aggregates, const ReportOptions& options = {});

/// Values are printed with 10 decimals.
std::string format_number(double value);

}  // namespace aaechat::evalharness

#pragma once

#include <string>
#include <vector>

#include "aaechat/evalharness/metrics.hpp"
#include "aaechat/evalharness/ratings.hpp"

namespace aaechat::evalharness {

/// 6 - score. Throws ValidationError outside 1..5.
int reverse_score(int score);

enum class CiMethod { student_t, normal };

struct AggregateOptions {
  CiMethod method = CiMethod::student_t;
};

struct Aggregate {
  std::string chatbot_id;
  /// Report name (reversed metrics carry their reversed name).
  std::string metric;
  std::size_t n = 0;
  double mean = 0.0;
  double ci95_half_width = 0.0;
  /// n == 1: no spread estimate, half-width reported as 0.
  bool single_rating = false;
};

/// Two-sided 95% critical value: Student-t with `df` degrees of freedom, or
/// the normal 1.959964 when method is normal.
double critical_value_95(std::size_t df, CiMethod method);

/// Mean and 95% confidence half-width per (chatbot, metric) over individual
/// ratings, after reversing reversed metrics. Unknown metric names, and
/// metrics that do not apply to a chatbot's modality, throw ValidationError
/// listing every offender. Output is ordered by chatbot id, then metric
/// registry order.
std::vector<Aggregate> aggregate(const std::vector<Rating>& ratings, const std::vector<Metric>& metrics = metric_registry(),
                                 const AggregateOptions& options = {});

}  // namespace aaechat::evalharness

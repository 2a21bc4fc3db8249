#include "aaechat/evalharness/aggregate.hpp"

#include <cmath>
#include <map>
#include <set>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "aaechat/common/errors.hpp"

namespace aaechat::evalharness {

int reverse_score(int score) {
  if (score < 1 || score > 5) throw ValidationError("score " + std::to_string(score) + " outside 1..5");
  return 6 - score;
}

double critical_value_95(std::size_t df, CiMethod method) {
  if (method == CiMethod::normal) return boost::math::quantile(boost::math::normal_distribution<double>(), 0.975);
  if (df == 0) throw ValidationError("Student-t needs at least one degree of freedom");
  return boost::math::quantile(boost::math::students_t_distribution<double>(static_cast<double>(df)), 0.975);
}

std::vector<Aggregate> aggregate(const std::vector<Rating>& ratings, const std::vector<Metric>& metrics,
                                 const AggregateOptions& options) {
  std::set<std::string> unknown;
  std::set<std::string> misplaced;
  // chatbot -> metric position -> scores
  std::map<std::string, std::map<std::size_t, std::vector<int>>> groups;
  for (const auto& r : ratings) {
    const Metric* m = find_metric(r.metric, metrics);
    if (m == nullptr) {
      unknown.insert(r.metric);
      continue;
    }
    if (!m->applies_to(infer_chatbot_modality(r.chatbot_id))) {
      misplaced.insert(r.metric + " on " + r.chatbot_id);
      continue;
    }
    if (r.score < 1 || r.score > 5) {
      throw ValidationError("score " + std::to_string(r.score) + " outside 1..5 (" + r.evaluator_id + ", " +
                            r.dialogue_id + ", " + r.chatbot_id + ", " + r.metric + ")");
    }
    const auto position = static_cast<std::size_t>(m - metrics.data());
    groups[r.chatbot_id][position].push_back(m->reversed ? reverse_score(r.score) : r.score);
  }
  auto list = [](const std::set<std::string>& items) {
    std::string out;
    for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
    return out;
  };
  if (!unknown.empty()) throw ValidationError("unknown metrics: " + list(unknown));
  if (!misplaced.empty()) throw ValidationError("metrics rated for the wrong modality: " + list(misplaced));

  std::vector<Aggregate> out;
  for (const auto& [chatbot, by_metric] : groups) {
    for (const auto& [position, scores] : by_metric) {
      Aggregate a;
      a.chatbot_id = chatbot;
      a.metric = metrics[position].report_name;
      a.n = scores.size();
      double sum = 0.0;
      for (int s : scores) sum += s;
      a.mean = sum / static_cast<double>(a.n);
      if (a.n == 1) {
        a.single_rating = true;
      } else {
        double ss = 0.0;
        for (int s : scores) ss += (s - a.mean) * (s - a.mean);
        const double sd = std::sqrt(ss / static_cast<double>(a.n - 1));
        a.ci95_half_width = critical_value_95(a.n - 1, options.method) * sd / std::sqrt(static_cast<double>(a.n));
      }
      out.push_back(std::move(a));
    }
  }
  return out;
}

}  // namespace aaechat::evalharness

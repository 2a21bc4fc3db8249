#include "aaechat/evalharness/assignments.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "aaechat/common/errors.hpp"
#include "aaechat/common/random.hpp"

namespace aaechat::evalharness {

using nlohmann::json;

std::vector<Assignment> make_assignments(const std::vector<std::string>& dialogue_ids,
                                         const std::vector<std::string>& evaluator_ids,
                                         const AssignmentOptions& options, Diagnostics* diag) {
  if (evaluator_ids.empty()) throw ValidationError("at least one evaluator is required");
  const std::size_t d = dialogue_ids.size();
  const std::size_t e = evaluator_ids.size();
  std::size_t doubles = e >= 2 ? (d + 1) / 2 : 0;
  if (e == 1) warn(diag, "single evaluator: every dialogue gets one rating");
  if (options.max_load) {
    const std::size_t capacity = *options.max_load * e;
    if (capacity < d) {
      throw ValidationError("load cap " + std::to_string(*options.max_load) + " x " + std::to_string(e) +
                            " evaluators cannot cover " + std::to_string(d) + " dialogues");
    }
    if (d + doubles > capacity) {
      doubles = capacity - d;
      warn(diag, "load cap limits double coverage to " + std::to_string(doubles) + " of " + std::to_string(d) +
                     " dialogues");
    }
  }

  SeededRng rng(options.seed);
  std::vector<std::size_t> dialogue_order(d);
  std::iota(dialogue_order.begin(), dialogue_order.end(), std::size_t{0});
  rng.shuffle(dialogue_order);
  std::vector<std::size_t> evaluator_order(e);
  std::iota(evaluator_order.begin(), evaluator_order.end(), std::size_t{0});
  rng.shuffle(evaluator_order);

  // raters[k] lists the evaluator positions for dialogue k.
  std::vector<std::vector<std::size_t>> raters(d);
  std::size_t next = 0;
  for (std::size_t rank = 0; rank < d; ++rank) {
    const std::size_t k = dialogue_order[rank];
    const std::size_t wanted = rank < doubles ? 2 : 1;
    for (std::size_t r = 0; r < wanted; ++r) raters[k].push_back(evaluator_order[next++ % e]);
  }

  std::vector<Assignment> out;
  for (std::size_t k = 0; k < d; ++k) {
    for (auto ev : raters[k]) out.push_back({evaluator_ids[ev], dialogue_ids[k]});
  }
  return out;
}

std::vector<Task> expand_tasks(const std::vector<Assignment>& assignments, const std::vector<std::string>& chatbot_ids,
                               std::uint64_t seed) {
  std::map<std::string, std::vector<Task>> queues;
  for (const auto& a : assignments) {
    for (const auto& c : chatbot_ids) queues[a.evaluator_id].push_back({a.evaluator_id, a.dialogue_id, c});
  }
  std::vector<Task> out;
  std::uint64_t stream = 0;
  for (auto& [evaluator, queue] : queues) {
    SeededRng rng(seed + 0x9E3779B97F4A7C15ULL * ++stream);
    rng.shuffle(queue);
    out.insert(out.end(), queue.begin(), queue.end());
  }
  return out;
}

json tasks_to_json(const std::vector<Task>& tasks) {
  json out = json::array();
  for (const auto& t : tasks) {
    out.push_back({{"evaluator_id", t.evaluator_id}, {"dialogue_id", t.dialogue_id}, {"chatbot_id", t.chatbot_id}});
  }
  return out;
}

std::vector<Task> tasks_from_json(const json& doc) {
  if (!doc.is_array()) throw ParseError("task list must be a JSON array");
  std::vector<Task> out;
  for (const auto& t : doc) {
    out.push_back({t.at("evaluator_id").get<std::string>(), t.at("dialogue_id").get<std::string>(),
                   t.at("chatbot_id").get<std::string>()});
  }
  return out;
}

}  // namespace aaechat::evalharness

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aaechat/common/diagnostics.hpp"

namespace aaechat::evalharness {

struct Assignment {
  std::string evaluator_id;
  std::string dialogue_id;

  bool operator==(const Assignment&) const = default;
};

struct AssignmentOptions {
  std::uint64_t seed = 0;
  /// Optional cap on dialogues per evaluator.
  std::optional<std::size_t> max_load;
};

/// Every dialogue gets one evaluator; ceil(D/2) of them (seeded choice) get a
/// second, distinct one when there are at least two evaluators. Evaluators
/// are taken round-robin from a seeded order, so loads differ by at most
/// one. With a single evaluator everything is single-coverage and a warning
/// is emitted. A load cap that cannot cover every dialogue once throws
/// ValidationError; one that only limits double coverage shrinks it with a
/// warning.
std::vector<Assignment> make_assignments(const std::vector<std::string>& dialogue_ids,
                                         const std::vector<std::string>& evaluator_ids,
                                         const AssignmentOptions& options = {}, Diagnostics* diag = nullptr);

/// One evaluation task: a dialogue shown through a particular chatbot.
struct Task {
  std::string evaluator_id;
  std::string dialogue_id;
  std::string chatbot_id;

  bool operator==(const Task&) const = default;
};

/// Expands assignments over the study's chatbot variants and orders each
/// evaluator's queue with a seeded shuffle.
std::vector<Task> expand_tasks(const std::vector<Assignment>& assignments, const std::vector<std::string>& chatbot_ids,
                               std::uint64_t seed);

nlohmann::json tasks_to_json(const std::vector<Task>& tasks);
std::vector<Task> tasks_from_json(const nlohmann::json& doc);

}  // namespace aaechat::evalharness

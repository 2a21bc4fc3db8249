#include "aaechat/tagger/rates.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "aaechat/common/errors.hpp"
#include "aaechat/common/random.hpp"

namespace aaechat::tagger {

std::vector<FeatureRate> per_turn_feature_rates(const std::vector<TaggedTurn>& tagged) {
  struct Counts {
    std::set<std::string> turns;
    std::map<Category, std::size_t> changes;
  };
  std::map<std::string, Counts> by_chatbot;
  for (const auto& t : tagged) {
    auto& counts = by_chatbot[t.chatbot_id];
    if (!counts.turns.insert(t.turn_id).second) {
      throw ValidationError("turn '" + t.turn_id + "' of chatbot '" + t.chatbot_id + "' listed twice");
    }
    for (const auto& c : t.result.changes) ++counts.changes[c.category];
  }
  std::vector<FeatureRate> out;
  for (const auto& [chatbot, counts] : by_chatbot) {
    for (auto cat : kAllCategories) {
      FeatureRate r;
      r.chatbot_id = chatbot;
      r.category = cat;
      r.turns = counts.turns.size();
      auto it = counts.changes.find(cat);
      r.changes = it == counts.changes.end() ? 0 : it->second;
      r.rate = static_cast<double>(r.changes) / static_cast<double>(r.turns);
      out.push_back(r);
    }
  }
  return out;
}

std::vector<std::size_t> stratified_half_sample(const std::vector<StratumKey>& items, std::uint64_t seed) {
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < items.size(); ++i) {
    strata[{items[i].chatbot_id, items[i].domain}].push_back(i);
  }
  SeededRng rng(seed);
  std::vector<std::size_t> chosen;
  std::vector<std::vector<std::size_t>*> leftovers;
  for (auto& [key, members] : strata) {
    rng.shuffle(members);
    const std::size_t take = members.size() / 2;
    chosen.insert(chosen.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(take));
    if (members.size() % 2 == 1) leftovers.push_back(&members);
  }
  const std::size_t target = items.size() / 2;
  rng.shuffle(leftovers);
  for (auto* members : leftovers) {
    if (chosen.size() >= target) break;
    chosen.push_back((*members)[members->size() / 2]);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace aaechat::tagger

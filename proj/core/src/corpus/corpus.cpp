#include "aaechat/corpus/corpus.hpp"

#include <fstream>
#include <set>

#include "aaechat/common/errors.hpp"
#include "aaechat/common/jsonl.hpp"
#include "aaechat/common/random.hpp"
#include "aaechat/common/text.hpp"

namespace aaechat::corpus {

using nlohmann::json;

std::string_view to_string(Side side) {
  switch (side) {
    case Side::user:
      return "user";
    case Side::chatbot:
      return "chatbot";
    case Side::unassigned:
      break;
  }
  return "unassigned";
}

Side side_from_string(std::string_view name) {
  auto folded = text::fold_label(name);
  if (folded == "user") return Side::user;
  if (folded == "chatbot") return Side::chatbot;
  throw ParseError("unknown side: " + std::string(name));
}

std::optional<int> Dialogue::last_chatbot_turn() const {
  for (auto it = turns.rbegin(); it != turns.rend(); ++it) {
    if (it->side == Side::chatbot) return it->index;
  }
  return std::nullopt;
}

std::size_t Dialogue::chatbot_turn_count() const {
  std::size_t n = 0;
  for (const auto& t : turns) n += t.side == Side::chatbot ? 1 : 0;
  return n;
}

DomainSpec::DomainSpec(std::string name, std::vector<std::string> roles)
    : name_(std::move(name)), roles_(std::move(roles)) {
  if (text::trim(name_).empty()) throw ValidationError("domain name must not be blank");
  if (roles_.empty()) throw ValidationError("domain '" + name_ + "' has no roles");
  for (const auto& r : roles_) {
    if (text::trim(r).empty()) throw ValidationError("domain '" + name_ + "' has a blank role");
  }
}

std::optional<std::string> DomainSpec::match(std::string_view label) const {
  const auto folded = text::fold_label(label);
  for (const auto& role : roles_) {
    if (text::fold_label(role) == folded) return role;
  }
  return std::nullopt;
}

std::vector<DomainSpec> default_domains() {
  return {
      DomainSpec("Customer Assistance", {"Customer Service Representative", "Receptionist"}),
      DomainSpec("Commerce", {"Clerk", "Salesperson"}),
      DomainSpec("Healthcare", {"Doctor"}),
      DomainSpec("Education", {"Teacher", "Professor"}),
      DomainSpec("Social Companionship", {"Friend"}),
  };
}

void validate_domains(const std::vector<DomainSpec>& specs) {
  std::set<std::string> names;
  for (const auto& s : specs) {
    if (!names.insert(text::fold_label(s.name())).second) {
      throw ValidationError("duplicate domain name: " + s.name());
    }
  }
}

std::vector<DomainSpec> domains_from_json(const json& doc) {
  if (!doc.is_array()) throw ParseError("domain list must be a JSON array");
  std::vector<DomainSpec> specs;
  for (const auto& entry : doc) {
    if (!entry.contains("name") || !entry.contains("roles")) {
      throw ParseError("domain entry needs 'name' and 'roles'");
    }
    specs.emplace_back(entry.at("name").get<std::string>(),
                       entry.at("roles").get<std::vector<std::string>>());
  }
  validate_domains(specs);
  return specs;
}

json domains_to_json(const std::vector<DomainSpec>& specs) {
  json out = json::array();
  for (const auto& s : specs) out.push_back({{"name", s.name()}, {"roles", s.roles()}});
  return out;
}

Dialogue dialogue_from_json(const json& record) {
  if (!record.is_object()) throw ParseError("record is not an object");
  if (!record.contains("id") || !record["id"].is_string()) throw ParseError("missing string 'id'");
  Dialogue d;
  d.id = record["id"].get<std::string>();
  if (!record.contains("speakers") || !record["speakers"].is_array()) {
    throw ParseError("record '" + d.id + "' missing 'speakers'");
  }
  if (!record.contains("utterances") || !record["utterances"].is_array()) {
    throw ParseError("record '" + d.id + "' missing 'utterances'");
  }
  const auto& speakers = record["speakers"];
  const auto& utterances = record["utterances"];
  if (speakers.size() != utterances.size()) {
    throw ParseError("record '" + d.id + "': " + std::to_string(speakers.size()) + " speakers for " +
                     std::to_string(utterances.size()) + " utterances");
  }
  if (utterances.empty()) throw ParseError("record '" + d.id + "' has no utterances");
  const json* sides = nullptr;
  if (record.contains("sides")) {
    sides = &record["sides"];
    if (!sides->is_array() || sides->size() != utterances.size()) {
      throw ParseError("record '" + d.id + "': 'sides' does not align with utterances");
    }
  }
  for (std::size_t i = 0; i < utterances.size(); ++i) {
    if (!speakers[i].is_string() || !utterances[i].is_string()) {
      throw ParseError("record '" + d.id + "': non-string speaker or utterance at " + std::to_string(i));
    }
    Turn t;
    t.index = static_cast<int>(i);
    t.speaker_label = speakers[i].get<std::string>();
    t.text = utterances[i].get<std::string>();
    if (text::trim(t.text).empty()) {
      throw ParseError("record '" + d.id + "': empty utterance at " + std::to_string(i));
    }
    if (sides != nullptr) t.side = side_from_string((*sides)[i].get<std::string>());
    d.turns.push_back(std::move(t));
  }
  if (record.contains("domain")) d.domain = record["domain"].get<std::string>();
  if (record.contains("chatbot_role")) d.chatbot_role = record["chatbot_role"].get<std::string>();
  return d;
}

json dialogue_to_json(const Dialogue& dialogue) {
  json speakers = json::array();
  json utterances = json::array();
  json sides = json::array();
  bool any_side = false;
  for (const auto& t : dialogue.turns) {
    speakers.push_back(t.speaker_label);
    utterances.push_back(t.text);
    sides.push_back(to_string(t.side));
    any_side = any_side || t.side != Side::unassigned;
  }
  json out = {{"id", dialogue.id}, {"speakers", speakers}, {"utterances", utterances}};
  if (!dialogue.domain.empty()) out["domain"] = dialogue.domain;
  if (!dialogue.chatbot_role.empty()) out["chatbot_role"] = dialogue.chatbot_role;
  if (any_side) out["sides"] = sides;
  return out;
}

ParseResult parse_dialogue_corpus(std::istream& in, Diagnostics* diag) {
  if (!in) throw IoError("corpus stream is not readable");
  ParseResult result;
  for_each_line(in, [&](std::size_t number, const std::string& line) {
    try {
      result.dialogues.push_back(dialogue_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      ++result.skipped;
      warn(diag, "corpus line " + std::to_string(number) + ": invalid JSON: " + e.what());
    } catch (const ParseError& e) {
      ++result.skipped;
      warn(diag, "corpus line " + std::to_string(number) + ": " + e.what());
    }
  });
  return result;
}

ParseResult parse_dialogue_corpus_file(const std::string& path, Diagnostics* diag) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus " + path);
  return parse_dialogue_corpus(in, diag);
}

std::vector<Dialogue> filter_by_roles(const std::vector<Dialogue>& dialogues, const DomainSpec& spec,
                                      Diagnostics* diag) {
  std::vector<Dialogue> out;
  for (const auto& d : dialogues) {
    // Earliest role in the spec's order wins, independent of turn order.
    std::optional<std::string> matched;
    std::set<std::string> seen;
    for (const auto& role : spec.roles()) {
      for (const auto& t : d.turns) {
        if (text::fold_label(t.speaker_label) == text::fold_label(role)) {
          seen.insert(role);
          if (!matched) matched = role;
        }
      }
    }
    if (!matched) continue;
    if (seen.size() > 1) {
      warn(diag, "dialogue '" + d.id + "' matches " + std::to_string(seen.size()) + " roles of " +
                     spec.name() + "; using '" + *matched + "'");
    }
    Dialogue tagged = d;
    tagged.domain = spec.name();
    tagged.chatbot_role = *matched;
    const auto role_key = text::fold_label(*matched);
    for (auto& t : tagged.turns) {
      t.side = text::fold_label(t.speaker_label) == role_key ? Side::chatbot : Side::user;
    }
    out.push_back(std::move(tagged));
  }
  return out;
}

namespace {

bool eligible(const Dialogue& d, std::size_t turn_count) {
  if (d.turns.size() < turn_count) return false;
  bool has_sides = false;
  bool has_chatbot = false;
  for (std::size_t i = 0; i < turn_count; ++i) {
    has_sides = has_sides || d.turns[i].side != Side::unassigned;
    has_chatbot = has_chatbot || d.turns[i].side == Side::chatbot;
  }
  return !has_sides || has_chatbot;
}

}  // namespace

std::vector<Dialogue> sample_for_domain(const std::vector<Dialogue>& dialogues,
                                        const SampleOptions& options, Diagnostics* diag) {
  if (options.n == 0) return {};
  if (options.turn_count == 0) throw ValidationError("turn_count must be at least 1");
  std::vector<const Dialogue*> pool;
  for (const auto& d : dialogues) {
    if (eligible(d, options.turn_count)) pool.push_back(&d);
  }
  if (pool.size() < options.n) {
    std::string domain = dialogues.empty() ? std::string("(empty)") : dialogues.front().domain;
    warn(diag, "domain '" + domain + "': only " + std::to_string(pool.size()) +
                   " eligible dialogues for a sample of " + std::to_string(options.n));
  }
  SeededRng rng(options.seed);
  std::vector<Dialogue> out;
  for (std::size_t i : rng.sample_indices(pool.size(), options.n)) {
    Dialogue d = *pool[i];
    d.turns.resize(options.turn_count);
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<Dialogue> sample_domains(const std::vector<Dialogue>& corpus,
                                     const std::vector<DomainSpec>& specs,
                                     const SampleOptions& options, Diagnostics* diag) {
  validate_domains(specs);
  std::set<std::string> taken;
  std::vector<Dialogue> out;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    std::vector<Dialogue> candidates;
    for (auto& d : filter_by_roles(corpus, specs[k], diag)) {
      if (!taken.contains(d.id)) candidates.push_back(std::move(d));
    }
    SampleOptions per_domain = options;
    per_domain.seed = options.seed + 0x9E3779B97F4A7C15ULL * (k + 1);
    for (auto& d : sample_for_domain(candidates, per_domain, diag)) {
      taken.insert(d.id);
      out.push_back(std::move(d));
    }
  }
  return out;
}

}  // namespace aaechat::corpus

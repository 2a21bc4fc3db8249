#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aaechat/common/diagnostics.hpp"

namespace aaechat::corpus {

enum class Side { unassigned, user, chatbot };

std::string_view to_string(Side side);
Side side_from_string(std::string_view name);

struct Turn {
  int index = 0;
  std::string speaker_label;
  Side side = Side::unassigned;
  std::string text;

  bool operator==(const Turn&) const = default;
};

struct Dialogue {
  std::string id;
  std::string domain;
  std::string chatbot_role;
  std::vector<Turn> turns;

  /// Index of the last chatbot turn, if any. Translation targets are chatbot
  /// turns; this marks the final one.
  std::optional<int> last_chatbot_turn() const;
  std::size_t chatbot_turn_count() const;

  bool operator==(const Dialogue&) const = default;
};

/// A chatbot application domain and the corpus speaker roles that stand for it.
class DomainSpec {
 public:
  /// Throws ValidationError if `roles` is empty or `name` is blank.
  DomainSpec(std::string name, std::vector<std::string> roles);

  const std::string& name() const { return name_; }
  /// Ordered; earlier roles win when a dialogue matches several.
  const std::vector<std::string>& roles() const { return roles_; }

  /// Returns the first role in `roles()` equal to `label` after trimming and
  /// case folding.
  std::optional<std::string> match(std::string_view label) const;

 private:
  std::string name_;
  std::vector<std::string> roles_;
};

/// The five application domains and their roles.
std::vector<DomainSpec> default_domains();

/// Throws ValidationError when two specs share a name.
void validate_domains(const std::vector<DomainSpec>& specs);

std::vector<DomainSpec> domains_from_json(const nlohmann::json& doc);
nlohmann::json domains_to_json(const std::vector<DomainSpec>& specs);

struct ParseResult {
  std::vector<Dialogue> dialogues;
  std::size_t skipped = 0;
};

/// Reads one `{id, speakers, utterances}` record per line. Malformed records
/// are skipped, counted, and reported through `diag`. Sides stay unassigned
/// unless the record already carries them.
ParseResult parse_dialogue_corpus(std::istream& in, Diagnostics* diag = nullptr);
ParseResult parse_dialogue_corpus_file(const std::string& path, Diagnostics* diag = nullptr);

/// Parses a single record; throws ParseError when malformed.
Dialogue dialogue_from_json(const nlohmann::json& record);
/// Inverse of dialogue_from_json. Domain, role, and sides are written only
/// when set.
nlohmann::json dialogue_to_json(const Dialogue& dialogue);

/// Dialogues that contain a speaker label in `spec.roles()`, tagged with the
/// domain and chatbot role, and with every turn's side assigned.
std::vector<Dialogue> filter_by_roles(const std::vector<Dialogue>& dialogues,
                                      const DomainSpec& spec, Diagnostics* diag = nullptr);

struct SampleOptions {
  std::size_t n = 20;
  std::size_t turn_count = 10;
  std::uint64_t seed = 0;
};

/// Seeded uniform sampling without replacement. Dialogues shorter than
/// `turn_count` are excluded; selected ones are truncated to their first
/// `turn_count` turns and returned in input order.
std::vector<Dialogue> sample_for_domain(const std::vector<Dialogue>& dialogues,
                                        const SampleOptions& options,
                                        Diagnostics* diag = nullptr);

/// Filters and samples every domain in order. A dialogue chosen for an earlier
/// domain is not eligible for later ones, so no id appears twice. Each domain
/// draws from its own generator seeded from (seed, domain position).
std::vector<Dialogue> sample_domains(const std::vector<Dialogue>& corpus,
                                     const std::vector<DomainSpec>& specs,
                                     const SampleOptions& options,
                                     Diagnostics* diag = nullptr);

}  // namespace aaechat::corpus

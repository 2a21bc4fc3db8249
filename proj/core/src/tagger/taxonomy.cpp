#include "aaechat/tagger/taxonomy.hpp"

#include <set>

#include "aaechat/common/errors.hpp"
#include "aaechat/common/text.hpp"

namespace aaechat::tagger {

std::string_view to_string(Category category) {
  switch (category) {
    case Category::phonology:
      return "phonology";
    case Category::morphology:
      return "morphology";
    case Category::syntax:
      return "syntax";
    case Category::semantics:
      return "semantics";
    case Category::other:
      return "other";
  }
  return "other";
}

Category parse_category(std::string_view name, Diagnostics* diag) {
  std::string folded = text::fold_label(name);
  while (!folded.empty() && (folded.back() == '.' || folded.back() == ',')) folded.pop_back();
  static const std::pair<std::string_view, Category> kAliases[] = {
      {"phonology", Category::phonology},   {"phonological", Category::phonology},
      {"phonetics", Category::phonology},   {"phonetic", Category::phonology},
      {"morphology", Category::morphology}, {"morphological", Category::morphology},
      {"syntax", Category::syntax},         {"syntactic", Category::syntax},
      {"semantics", Category::semantics},   {"semantic", Category::semantics},
      {"lexical", Category::semantics},     {"other", Category::other},
  };
  for (const auto& [alias, category] : kAliases) {
    if (folded == alias) return category;
  }
  warn(diag, "unknown linguistic category '" + std::string(name) + "' mapped to other");
  return Category::other;
}

FeatureTaxonomy::FeatureTaxonomy(std::vector<FeatureEntry> entries) : entries_(std::move(entries)) {
  std::set<std::string> seen;
  for (const auto& e : entries_) {
    if (text::trim(e.name).empty()) throw ValidationError("taxonomy entry with blank name");
    if (!seen.insert(text::fold_label(e.name)).second) {
      throw ValidationError("duplicate taxonomy entry: " + e.name);
    }
  }
}

const FeatureEntry* FeatureTaxonomy::find(std::string_view name) const {
  const auto key = text::fold_label(name);
  for (const auto& e : entries_) {
    if (text::fold_label(e.name) == key) return &e;
  }
  return nullptr;
}

FeatureTaxonomy FeatureTaxonomy::standard() {
  using C = Category;
  return FeatureTaxonomy({
      {"Me Replacing I", "\"Me\" used instead of \"I\" (e.g., \"Me and him went\").", C::morphology},
      {"Reflexive Pronoun", "Nonstandard reflexive forms (e.g., \"hisself\" instead of \"himself\").",
       C::morphology},
      {"Invariant \"was\"", "\"Was\" used with plural or second-person subjects (e.g., \"They was here\").",
       C::morphology},
      {"Invariant Present Tense",
       "Third-person singular -s absent on present-tense verbs (e.g., \"he say\").", C::morphology},
      {"Go-based Future Tense", "\"Gon\" or \"gonna\" marking future (e.g., \"you gon laugh\").", C::syntax},
      {"Omission of \"be\"", "Copula or auxiliary \"be\" left out (e.g., \"she nice\", \"you gon laugh\").",
       C::syntax},
      {"Habitual \"be\"", "Uninflected \"be\" marking a recurring action (e.g., \"she be working late\").",
       C::syntax},
      {"Unmarked Adverbs", "Adjective form used as an adverb (e.g., \"real good\", \"read it real careful\").",
       C::morphology},
      {"Inflectional Ending \"ing\"", "Final -ing pronounced and spelled -in' (e.g., \"runnin'\").",
       C::phonology},
      {"Plural Marker s", "Plural -s absent, usually after a quantifier (e.g., \"three dollar\").",
       C::morphology},
      {"Phonological Reduction", "Reduced or contracted pronunciation (e.g., \"lemme\", \"dolluh\", \"kinda\").",
       C::phonology},
      {"Multiple Negation", "Two or more negative markers in one clause (e.g., \"I don't want nothing\").",
       C::syntax},
      {"Ain't as Negator", "\"Ain't\" for isn't, aren't, hasn't, or didn't (e.g., \"He ain't here\").",
       C::syntax},
      {"Stressed BIN", "Stressed \"been\" marking a state begun long ago (e.g., \"I BIN knew that\").",
       C::syntax},
      {"Completive \"done\"", "\"Done\" marking a completed action (e.g., \"She done finished\").", C::syntax},
      {"Finna", "\"Finna\" marking immediate future (e.g., \"I'm finna leave\").", C::syntax},
      {"Existential \"it\"", "\"It\" in place of existential \"there\" (e.g., \"It's a man at the door\").",
       C::syntax},
      {"Existential \"they\"", "\"They\" in place of existential \"there\" (e.g., \"They got a store there\").",
       C::syntax},
      {"Possessive s Absence", "Possessive -'s absent (e.g., \"my mama house\").", C::morphology},
      {"Consonant Cluster Reduction",
       "Final consonant cluster simplified (e.g., \"han'\" for \"hand\", \"tes'\" for \"test\").",
       C::phonology},
      {"TH-Stopping", "\"Th\" realized as d or t (e.g., \"dat\", \"dem\", \"wit\").", C::phonology},
      {"TH-Fronting", "\"Th\" realized as f or v (e.g., \"mouf\", \"bruvver\").", C::phonology},
      {"R-Lessness", "Post-vocalic r dropped (e.g., \"fo'\" for \"for\", \"sho\" for \"sure\").",
       C::phonology},
      {"Final Consonant Deletion", "Word-final consonant dropped (e.g., \"jus'\" for \"just\").", C::phonology},
      {"Vowel Shift", "Vowel quality changed in spelling (e.g., \"thang\", \"git\", \"tahm\").", C::phonology},
      {"Metathesis", "Adjacent sounds swapped (e.g., \"aks\" for \"ask\").", C::phonology},
      {"Demonstrative \"them\"", "\"Them\" used as a demonstrative (e.g., \"them shoes\").", C::morphology},
      {"Second Person Plural \"y'all\"", "\"Y'all\" as the plural second-person pronoun.", C::morphology},
      {"Associative Plural \"and them\"", "\"And them\" meaning a person and their group (e.g., \"Mama and them\").",
       C::morphology},
      {"Indignant \"come\"", "\"Come\" expressing indignation (e.g., \"Don't come telling me that\").",
       C::syntax},
      {"Intensive \"steady\"", "\"Steady\" marking intense, persistent action (e.g., \"He steady talking\").",
       C::syntax},
      {"Preterite \"had\"", "\"Had\" plus a past form for simple past (e.g., \"I had went there\").", C::syntax},
      {"Nonstandard Past Form", "Past or participle form swapped (e.g., \"I seen it\", \"he done went\").",
       C::morphology},
      {"Double Modals", "Two modal verbs in sequence (e.g., \"might could\").", C::syntax},
      {"Question Inversion Absence", "Direct question without subject-auxiliary inversion (e.g., \"What part you stuck on?\").",
       C::syntax},
      {"Embedded Inversion", "Inversion inside an embedded question (e.g., \"I asked him could he go\").",
       C::syntax},
      {"Relative Pronoun Omission", "Subject relative pronoun left out (e.g., \"It's a man lives here\").",
       C::syntax},
      {"Quotative \"talkin' bout\"", "\"Talkin' bout\" introducing what someone meant or said.", C::syntax},
      {"AAE Lexical Item", "Vocabulary specific to AAE (e.g., \"saditty\", \"ashy\", \"peep\").", C::semantics},
      {"Semantic Shift", "Common word with an AAE-specific meaning (e.g., \"trippin\" for overreacting).",
       C::semantics},
  });
}

FeatureTaxonomy FeatureTaxonomy::from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) throw ParseError("taxonomy must be a JSON array");
  std::vector<FeatureEntry> entries;
  for (const auto& item : doc) {
    FeatureEntry e;
    e.name = item.at("name").get<std::string>();
    e.description = item.value("description", "");
    e.category = parse_category(item.value("category", "other"));
    entries.push_back(std::move(e));
  }
  return FeatureTaxonomy(std::move(entries));
}

nlohmann::json FeatureTaxonomy::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : entries_) {
    out.push_back({{"name", e.name}, {"description", e.description}, {"category", to_string(e.category)}});
  }
  return out;
}

}  // namespace aaechat::tagger

#include "manifest.hpp"

#include <cstdlib>
#include <set>
#include <type_traits>

#include "aaechat/common/errors.hpp"
#include "aaechat/common/hashing.hpp"
#include "aaechat/common/jsonl.hpp"
#include "aaechat/common/text.hpp"

namespace aaechat::cli {
namespace {

using nlohmann::json;

std::string env_or(const std::string& name, const std::string& fallback = {}) {
  if (name.empty()) return fallback;
  const char* v = std::getenv(name.c_str());
  return v ? std::string(v) : fallback;
}

class Reader {
 public:
  explicit Reader(fs::path base) : base_(std::move(base)) {}

  void fail(std::string msg) { errors_.push_back(std::move(msg)); }

  void check_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) {
      fail(std::string(where) + ": expected an object");
      return;
    }
    for (const auto& [key, value] : obj.items()) {
      bool known = false;
      for (auto a : allowed) known = known || key == a;
      if (!known) fail(std::string(where) + ": unknown key '" + key + "'");
    }
  }

  std::string str(const json& obj, const char* key, std::string fallback = {}) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_string()) {
      fail(std::string(key) + ": expected a string");
      return fallback;
    }
    return obj[key].get<std::string>();
  }

  template <typename T>
  T number(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer() || (std::is_unsigned_v<T> && obj[key].get<long long>() < 0)) {
      fail(std::string(key) + ": expected a non-negative integer");
      return fallback;
    }
    return obj[key].get<T>();
  }

  fs::path path(const json& obj, const char* key) {
    auto s = str(obj, key);
    if (s.empty()) return {};
    fs::path p(s);
    return p.is_absolute() ? p : (base_ / p).lexically_normal();
  }

  std::vector<std::string> strings(const json& obj, const char* key) {
    std::vector<std::string> out;
    if (!obj.contains(key)) return out;
    if (!obj[key].is_array()) {
      fail(std::string(key) + ": expected an array of strings");
      return out;
    }
    for (const auto& v : obj[key]) {
      if (v.is_string()) {
        out.push_back(v.get<std::string>());
      } else {
        fail(std::string(key) + ": expected an array of strings");
      }
    }
    return out;
  }

  template <typename F>
  void guard(F&& f) {
    try {
      f();
    } catch (const Error& e) {
      fail(e.what());
    } catch (const json::exception& e) {
      fail(e.what());
    }
  }

  void finish() const {
    if (errors_.empty()) return;
    throw ValidationError("invalid manifest:\n  " + text::join(errors_, "\n  "));
  }

 private:
  fs::path base_;
  std::vector<std::string> errors_;
};

ProviderEntry read_provider(Reader& r, const json& p, std::string id) {
  ProviderEntry e;
  e.id = std::move(id);
  const auto env = llm::ProviderConfig::from_env();
  e.config.model_id = r.str(p, "model_id", env.model_id);
  e.config.api_base = r.str(p, "api_base", env.api_base);
  e.config.api_key = env_or(r.str(p, "api_key_env", "LLM_API_KEY"));
  if (p.contains("options")) e.config.options = p["options"];
  e.transcript = r.path(p, "transcript");
  if (e.config.model_id.empty()) r.fail(e.id + ": model_id missing");
  return e;
}

}  // namespace

json Seeds::to_json() const { return {{"sample", sample}, {"tag_sample", tag_sample}, {"assign", assign}}; }

std::string manifest_hash(const json& doc) { return sha256_hex(doc.dump()); }

RunManifest RunManifest::from_json(const json& doc, const fs::path& base_dir) {
  RunManifest m;
  m.base_dir = base_dir;
  m.hash = manifest_hash(doc);
  Reader r(base_dir);
  r.check_keys(doc, "manifest",
               {"corpus", "domains", "sampling", "levels", "history", "providers", "tagger", "mode", "tts", "speakers",
                "seeds", "output_dir", "study"});
  if (!doc.is_object()) r.finish();

  m.corpus = r.path(doc, "corpus");
  if (doc.contains("domains")) r.guard([&] { m.domains = corpus::domains_from_json(doc["domains"]); });

  if (doc.contains("sampling")) {
    const auto& s = doc["sampling"];
    r.check_keys(s, "sampling", {"per_domain", "turn_count"});
    m.per_domain = r.number<std::size_t>(s, "per_domain", m.per_domain);
    m.turn_count = r.number<std::size_t>(s, "turn_count", m.turn_count);
  }
  if (doc.contains("levels")) {
    m.levels.clear();
    for (const auto& name : r.strings(doc, "levels")) {
      r.guard([&] { m.levels.push_back(dialect::level_from_string(name)); });
    }
  }
  if (auto h = r.str(doc, "history", "translated"); h == "original") {
    m.history = dialect::HistorySource::original;
  } else if (h != "translated") {
    r.fail("history: expected 'translated' or 'original'");
  }

  if (doc.contains("providers")) {
    if (!doc["providers"].is_array()) r.fail("providers: expected an array");
    std::set<std::string> seen;
    for (const auto& p : doc["providers"]) {
      r.check_keys(p, "providers[]", {"id", "model_id", "api_base", "api_key_env", "options", "transcript"});
      if (!p.is_object()) continue;
      auto e = read_provider(r, p, r.str(p, "id"));
      if (e.id.empty() || e.id.find(':') != std::string::npos) r.fail("providers[]: id must be non-empty without ':'");
      if (!seen.insert(e.id).second) r.fail("providers: duplicate id '" + e.id + "'");
      m.providers.push_back(std::move(e));
    }
  }
  if (doc.contains("tagger")) {
    const auto& t = doc["tagger"];
    r.check_keys(t, "tagger", {"model_id", "api_base", "api_key_env", "options", "transcript", "taxonomy"});
    if (t.is_object()) m.tagger = read_provider(r, t, "tagger");
    if (auto p = r.path(t, "taxonomy"); !p.empty()) m.taxonomy = p;
  }
  if (doc.contains("mode")) {
    const auto& md = doc["mode"];
    r.check_keys(md, "mode", {"llm", "tts"});
    r.guard([&] { m.llm_mode = llm::mode_from_string(r.str(md, "llm", "replay")); });
    r.guard([&] { m.tts_mode = speech::tts_mode_from_string(r.str(md, "tts", "stub")); });
  }
  m.tts = speech::TtsConfig::from_env();
  if (doc.contains("tts")) {
    const auto& t = doc["tts"];
    r.check_keys(t, "tts",
                 {"api_base", "api_key_env", "transcript", "stub_sample_rate", "stub_ms_per_word", "pause_ms",
                  "split_threshold"});
    m.tts.api_base = r.str(t, "api_base", m.tts.api_base);
    if (t.contains("api_key_env")) m.tts.api_key = env_or(r.str(t, "api_key_env"));
    m.tts_transcript = r.path(t, "transcript");
    m.tts.stub_sample_rate = r.number<int>(t, "stub_sample_rate", m.tts.stub_sample_rate);
    m.tts.stub_ms_per_word = r.number<int>(t, "stub_ms_per_word", m.tts.stub_ms_per_word);
    m.pause_ms = r.number<int>(t, "pause_ms", m.pause_ms);
    m.split_threshold = r.number<std::size_t>(t, "split_threshold", m.split_threshold);
    if (m.split_threshold == 0) r.fail("tts.split_threshold must be at least 1");
  }
  if (doc.contains("speakers")) {
    for (const auto& s : doc["speakers"]) {
      r.check_keys(s, "speakers[]", {"id", "reference_audio", "reference_transcript", "role"});
      if (!s.is_object()) continue;
      speech::SpeakerRef ref;
      ref.id = r.str(s, "id");
      ref.reference_audio = r.path(s, "reference_audio");
      ref.reference_transcript = r.str(s, "reference_transcript");
      r.guard([&] { ref.role = speech::speaker_role_from_string(r.str(s, "role")); });
      m.speakers.push_back(std::move(ref));
    }
    r.guard([&] { speech::validate_speaker_set(m.speakers); });
  }
  if (doc.contains("seeds")) {
    const auto& s = doc["seeds"];
    r.check_keys(s, "seeds", {"sample", "tag_sample", "assign"});
    m.seeds.sample = r.number<std::uint64_t>(s, "sample", 0);
    m.seeds.tag_sample = r.number<std::uint64_t>(s, "tag_sample", 0);
    m.seeds.assign = r.number<std::uint64_t>(s, "assign", 0);
  }
  m.output_dir = r.path(doc, "output_dir");
  if (m.output_dir.empty()) m.output_dir = base_dir / "out";
  if (doc.contains("study")) {
    const auto& s = doc["study"];
    r.check_keys(s, "study", {"evaluators", "chatbots", "baseline", "max_load", "evaluator_token_env"});
    m.study.evaluators = r.strings(s, "evaluators");
    m.study.chatbots = r.strings(s, "chatbots");
    m.study.baseline = r.strings(s, "baseline");
    if (s.contains("max_load")) m.study.max_load = r.number<std::size_t>(s, "max_load", 0);
    m.study.evaluator_token = env_or(r.str(s, "evaluator_token_env"));
  }
  r.finish();
  return m;
}

RunManifest RunManifest::load(const fs::path& path) {
  json doc;
  try {
    doc = read_json_file(path);
  } catch (const json::exception& e) {
    throw ValidationError("manifest " + path.string() + ": " + e.what());
  }
  auto base = fs::absolute(path).parent_path().lexically_normal();
  auto m = from_json(doc, base);
  m.path = path;
  m.validate();
  return m;
}

const ProviderEntry& RunManifest::provider(std::string_view id) const {
  if (providers.empty()) throw ValidationError("manifest lists no providers");
  if (id.empty()) return providers.front();
  for (const auto& p : providers) {
    if (p.id == id) return p;
  }
  throw ValidationError("unknown provider '" + std::string(id) + "'");
}

const speech::SpeakerRef& RunManifest::speaker(speech::SpeakerRole role) const {
  for (const auto& s : speakers) {
    if (s.role == role) return s;
  }
  throw ValidationError("manifest has no speaker for role " + std::string(speech::to_string(role)));
}

void RunManifest::validate() const {
  std::vector<std::string> missing;
  auto need = [&](const fs::path& p, const std::string& what) {
    if (!p.empty() && !fs::exists(p)) missing.push_back(what + " not found: " + p.string());
  };
  need(corpus, "corpus");
  if (taxonomy) need(*taxonomy, "taxonomy");
  for (const auto& s : speakers) need(s.reference_audio, "reference audio for " + s.id);
  if (llm_mode == llm::Mode::replay) {
    for (const auto& p : providers) {
      if (p.transcript.empty()) missing.push_back("provider " + p.id + " has no transcript for replay");
      need(p.transcript, "transcript for provider " + p.id);
    }
    if (tagger) need(tagger->transcript, "tagger transcript");
  }
  if (tts_mode == speech::TtsMode::replay) need(tts_transcript, "tts transcript");
  if (!missing.empty()) throw ValidationError("invalid manifest:\n  " + text::join(missing, "\n  "));
}

std::string text_chatbot_id(std::string_view provider, dialect::DialectLevel level) {
  return std::string(provider) + ":" + text::to_lower(dialect::to_string(level));
}

std::string spoken_chatbot_id(dialect::DialectLevel level) {
  return "spoken:" + text::to_lower(dialect::to_string(level));
}

std::string slug(std::string_view id) {
  std::string out(id);
  for (auto& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                    c == '_' || c == '-';
    if (!ok) c = '_';
  }
  if (out.empty() || out.front() == '.') out.insert(out.begin(), '_');
  return out;
}

}  // namespace aaechat::cli

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <csignal>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "aaechat/common/csv.hpp"
#include "aaechat/common/errors.hpp"
#include "aaechat/common/jsonl.hpp"
#include "aaechat/common/text.hpp"
#include "aaechat/corpus/corpus.hpp"
#include "aaechat/dialect/dialect.hpp"
#include "aaechat/evalharness/aggregate.hpp"
#include "aaechat/evalharness/assignments.hpp"
#include "aaechat/evalharness/report.hpp"
#include "aaechat/speech/assemble.hpp"
#include "aaechat/speech/normalize.hpp"
#include "aaechat/speech/sentences.hpp"
#include "aaechat/speech/tts.hpp"
#include "aaechat/speech/wav.hpp"
#include "aaechat/tagger/accuracy.hpp"
#include "aaechat/tagger/rates.hpp"
#include "aaechat/tagger/tagger.hpp"
#include "cli.hpp"
#include "corpus_io.hpp"
#include "manifest.hpp"
#include "provenance.hpp"
#include "serve.hpp"

namespace aaechat::cli {
namespace {

using nlohmann::json;

struct Context {
  const CliEnv& env;
  std::ostream& out;
  std::ostream& err;
  Diagnostics diag;

  std::unique_ptr<llm::HttpTransport> transport(std::string_view purpose) const {
    return env.transport ? env.transport(purpose) : llm::make_http_transport();
  }
};

template <typename F>
void parallel_for(std::size_t n, unsigned jobs, F&& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  for (unsigned t = 0; t < std::min<std::size_t>(jobs, n); ++t) {
    threads.emplace_back([&] {
      for (auto i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : threads) t.join();
}

RunManifest require_manifest(const std::string& path) {
  if (path.empty()) throw ValidationError("--manifest is required");
  return RunManifest::load(path);
}

fs::path output_root(const RunManifest& m, const std::string& override_dir) {
  return override_dir.empty() ? m.output_dir : fs::path(override_dir);
}

Provenance base_provenance(std::string subcommand, const RunManifest* m, const fs::path& root) {
  Provenance p;
  p.subcommand = std::move(subcommand);
  p.output_root = root;
  if (m) {
    p.manifest_hash = m->hash;
    p.manifest_dir = m->base_dir;
  }
  return p;
}

std::shared_ptr<llm::Transcript> open_transcript(const fs::path& path, bool replay, bool record) {
  if (!replay && !record) return nullptr;
  if (path.empty()) throw ValidationError("record and replay modes need a transcript path");
  return std::make_shared<llm::Transcript>(llm::Transcript::open(path, record));
}

llm::ChatClient make_chat_client(Context& ctx, llm::Mode mode, const llm::ProviderConfig& config,
                                 const fs::path& transcript_path) {
  auto transcript = open_transcript(transcript_path, mode == llm::Mode::replay, mode == llm::Mode::record);
  auto transport = mode == llm::Mode::replay ? nullptr : ctx.transport("llm");
  return llm::ChatClient(mode, config, std::move(transcript), std::move(transport));
}

tagger::FeatureTaxonomy load_taxonomy(const RunManifest& m, Diagnostics* diag) {
  auto taxonomy = m.taxonomy ? tagger::FeatureTaxonomy::from_json(read_json_file(*m.taxonomy))
                             : tagger::FeatureTaxonomy::standard();
  if (taxonomy.size() < tagger::kMinTaxonomyEntries) {
    warn(diag, "taxonomy has " + std::to_string(taxonomy.size()) + " entries; at least " +
                   std::to_string(tagger::kMinTaxonomyEntries) + " expected");
  }
  return taxonomy;
}

// ingest ------------------------------------------------------------------

struct IngestArgs {
  std::string manifest, corpus, out, output_dir;
  std::optional<std::uint64_t> seed;
};

int cmd_ingest(Context& ctx, const IngestArgs& a) {
  auto m = require_manifest(a.manifest);
  const auto root = output_root(m, a.output_dir);
  const fs::path corpus_path = a.corpus.empty() ? m.corpus : fs::path(a.corpus);
  if (corpus_path.empty()) throw ValidationError("no corpus given (manifest 'corpus' or --corpus)");
  const fs::path out = a.out.empty() ? root / "sampled.jsonl" : fs::path(a.out);

  auto parsed = corpus::parse_dialogue_corpus_file(corpus_path.string(), &ctx.diag);
  corpus::SampleOptions opts{m.per_domain, m.turn_count, a.seed.value_or(m.seeds.sample)};
  auto sampled = corpus::sample_domains(parsed.dialogues, m.domains, opts, &ctx.diag);

  std::vector<json> rows;
  for (const auto& d : sampled) rows.push_back(record_to_json(d, {}, m.hash));
  write_jsonl(out, rows);

  auto prov = base_provenance("ingest", &m, root);
  prov.seeds = {{"sample", opts.seed}};
  prov.inputs = {corpus_path};
  write_provenance(out, false, prov);
  ctx.out << "sampled " << sampled.size() << " dialogues from " << parsed.dialogues.size() << " records ("
          << parsed.skipped << " malformed) -> " << out.string() << "\n";
  return 0;
}

// translate ---------------------------------------------------------------

struct TranslateArgs {
  std::string manifest, in, out_dir, output_dir, mode, history;
  std::vector<std::string> levels, providers;
  unsigned jobs = 1;
};

int cmd_translate(Context& ctx, const TranslateArgs& a) {
  auto m = require_manifest(a.manifest);
  const auto root = output_root(m, a.output_dir);
  const fs::path in = a.in.empty() ? root / "sampled.jsonl" : fs::path(a.in);
  const fs::path out_dir = a.out_dir.empty() ? root / "translated" : fs::path(a.out_dir);
  const auto mode = a.mode.empty() ? m.llm_mode : llm::mode_from_string(a.mode);
  auto history = m.history;
  if (!a.history.empty()) {
    if (a.history == "translated") {
      history = dialect::HistorySource::translated;
    } else if (a.history == "original") {
      history = dialect::HistorySource::original;
    } else {
      throw ValidationError("--history must be 'translated' or 'original'");
    }
  }
  std::vector<dialect::DialectLevel> levels;
  for (const auto& l : a.levels) levels.push_back(dialect::level_from_string(l));
  if (levels.empty()) levels = m.levels;
  std::vector<const ProviderEntry*> providers;
  for (const auto& p : a.providers) providers.push_back(&m.provider(p));
  if (providers.empty()) {
    for (const auto& p : m.providers) providers.push_back(&p);
  }
  if (providers.empty()) throw ValidationError("manifest lists no providers");

  const auto records = read_records(in);
  std::size_t failures = 0;
  for (const auto* provider : providers) {
    auto client = make_chat_client(ctx, mode, provider->config, provider->transcript);
    for (auto level : levels) {
      std::vector<corpus::Dialogue> translated(records.size());
      std::vector<std::string> errors(records.size());
      parallel_for(records.size(), a.jobs, [&](std::size_t i) {
        try {
          translated[i] = dialect::translate_dialogue(records[i].dialogue, level, client, {history}, &ctx.diag);
        } catch (const Error& e) {
          errors[i] = e.what();
        }
      });
      const auto chatbot = text_chatbot_id(provider->id, level);
      std::size_t failed_here = 0;
      for (const auto& e : errors) {
        if (e.empty()) continue;
        ctx.err << "error: " << chatbot << ": " << e << "\n";
        ++failed_here;
      }
      if (failed_here > 0) {
        failures += failed_here;
        continue;
      }
      std::vector<json> rows;
      for (const auto& d : translated) {
        rows.push_back(record_to_json(d, {std::string(dialect::to_string(level)), provider->id}, m.hash));
      }
      const auto out = out_dir / (slug(provider->id) + "_" + text::to_lower(dialect::to_string(level)) + ".jsonl");
      write_jsonl(out, rows);
      auto prov = base_provenance("translate", &m, root);
      prov.mode = {{"llm", llm::to_string(mode)},
                   {"history", history == dialect::HistorySource::translated ? "translated" : "original"}};
      prov.inputs = {in};
      if (mode == llm::Mode::replay) prov.inputs.push_back(provider->transcript);
      write_provenance(out, false, prov);
      ctx.out << chatbot << ": translated " << rows.size() << " dialogues -> " << out.string() << "\n";
    }
  }
  return failures == 0 ? 0 : 1;
}

// tag ---------------------------------------------------------------------

struct TagArgs {
  std::string manifest, out, rates, output_dir, mode;
  std::vector<std::string> inputs;
  bool all = false;
  bool include_sae = false;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
};

std::vector<fs::path> default_translated_inputs(const fs::path& root) {
  std::vector<fs::path> files;
  const auto dir = root / "translated";
  if (!fs::is_directory(dir)) return files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

int cmd_tag(Context& ctx, const TagArgs& a) {
  auto m = require_manifest(a.manifest);
  if (!m.tagger) throw ValidationError("manifest has no tagger section");
  const auto root = output_root(m, a.output_dir);
  std::vector<fs::path> inputs(a.inputs.begin(), a.inputs.end());
  if (inputs.empty()) inputs = default_translated_inputs(root);
  if (inputs.empty()) throw ValidationError("no translated corpora to tag");
  const fs::path out = a.out.empty() ? root / "tags" / "tags.json" : fs::path(a.out);
  const fs::path rates_out = a.rates.empty() ? out.parent_path() / "feature_rates.csv" : fs::path(a.rates);
  const auto mode = a.mode.empty() ? m.llm_mode : llm::mode_from_string(a.mode);
  const auto seed = a.seed.value_or(m.seeds.tag_sample);

  struct Item {
    std::string chatbot_id, domain, dialogue_id, text;
    int turn_index = 0;
  };
  std::vector<Item> items;
  for (const auto& path : inputs) {
    for (const auto& r : read_records(path)) {
      if (r.dialect_level.empty() || r.provider_id.empty()) {
        throw ValidationError(path.string() + ": records lack dialect_level/provider_id");
      }
      const auto level = dialect::level_from_string(r.dialect_level);
      if (level == dialect::DialectLevel::sae && !a.include_sae) continue;
      for (const auto& t : r.dialogue.turns) {
        if (t.side != corpus::Side::chatbot) continue;
        items.push_back({text_chatbot_id(r.provider_id, level), r.dialogue.domain, r.dialogue.id, t.text, t.index});
      }
    }
  }
  std::vector<std::size_t> selected;
  if (a.all) {
    for (std::size_t i = 0; i < items.size(); ++i) selected.push_back(i);
  } else {
    std::vector<tagger::StratumKey> keys;
    for (const auto& it : items) keys.push_back({it.chatbot_id, it.domain});
    selected = tagger::stratified_half_sample(keys, seed);
  }

  const auto taxonomy = load_taxonomy(m, &ctx.diag);
  auto client = make_chat_client(ctx, mode, m.tagger->config, m.tagger->transcript);
  std::vector<tagger::TagResult> results(selected.size());
  std::vector<std::string> errors(selected.size());
  parallel_for(selected.size(), a.jobs, [&](std::size_t k) {
    const auto& it = items[selected[k]];
    Diagnostics local;
    try {
      results[k] = tagger::tag_response(it.text, taxonomy, client, &local);
    } catch (const Error& e) {
      errors[k] = e.what();
    }
    for (const auto& msg : local.messages()) {
      ctx.diag.warn(it.dialogue_id + " " + it.chatbot_id + " turn " + std::to_string(it.turn_index) + ": " + msg);
    }
  });
  std::size_t failures = 0;
  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (errors[k].empty()) continue;
    const auto& it = items[selected[k]];
    ctx.err << "error: " << it.dialogue_id << " " << it.chatbot_id << " turn " << it.turn_index << ": " << errors[k]
            << "\n";
    ++failures;
  }
  if (failures > 0) return 1;

  json tags = json::array();
  std::vector<tagger::TaggedTurn> tagged;
  for (std::size_t k = 0; k < selected.size(); ++k) {
    const auto& it = items[selected[k]];
    auto obj = tagger::to_json(results[k]);
    obj["dialogue_id"] = it.dialogue_id;
    obj["chatbot_id"] = it.chatbot_id;
    obj["turn_index"] = it.turn_index;
    obj["domain"] = it.domain;
    obj["manifest_hash"] = m.hash;
    tags.push_back(std::move(obj));
    tagged.push_back({it.chatbot_id, it.dialogue_id + "#" + std::to_string(it.turn_index), results[k]});
  }
  write_json_file(out, tags);

  std::string csv = "chatbot_id,category,turns,changes,rate,manifest_hash\n";
  for (const auto& r : tagger::per_turn_feature_rates(tagged)) {
    csv += csv::format_row({r.chatbot_id, std::string(tagger::to_string(r.category)), std::to_string(r.turns),
                            std::to_string(r.changes), evalharness::format_number(r.rate), m.hash});
  }
  write_file(rates_out, csv);

  auto prov = base_provenance("tag", &m, root);
  prov.seeds = {{"tag_sample", a.all ? json(nullptr) : json(seed)}};
  prov.mode = {{"llm", llm::to_string(mode)}, {"sample", a.all ? "all" : "stratified-half"}};
  prov.inputs = inputs;
  if (mode == llm::Mode::replay) prov.inputs.push_back(m.tagger->transcript);
  if (m.taxonomy) prov.inputs.push_back(*m.taxonomy);
  write_provenance(out, false, prov);
  write_provenance(rates_out, false, prov);
  ctx.out << "tagged " << selected.size() << " of " << items.size() << " chatbot turns -> " << out.string() << "\n";
  return 0;
}

// tag-eval ----------------------------------------------------------------

struct TagEvalArgs {
  std::string manifest, gold, predictions, out, output_dir, mode;
};

int cmd_tag_eval(Context& ctx, const TagEvalArgs& a) {
  if (a.gold.empty()) throw ValidationError("--gold is required");
  std::optional<RunManifest> m;
  if (!a.manifest.empty()) m = RunManifest::load(a.manifest);
  const auto gold = tagger::gold_from_json(read_json_file(a.gold));

  std::vector<tagger::TagResult> predictions;
  json tagger_info = nullptr;
  fs::path out = a.out;
  std::vector<fs::path> inputs = {a.gold};
  std::string mode_name = "predictions";
  if (!a.predictions.empty()) {
    const auto doc = read_json_file(a.predictions);
    if (!doc.is_array()) throw ValidationError("--predictions must be a JSON array of tagging results");
    for (const auto& entry : doc) predictions.push_back(tagger::parse_tag_result(entry.dump(), &ctx.diag));
    inputs.push_back(a.predictions);
  } else {
    if (!m) throw ValidationError("either --predictions or --manifest (to run the tagger) is required");
    if (!m->tagger) throw ValidationError("manifest has no tagger section");
    const auto mode = a.mode.empty() ? m->llm_mode : llm::mode_from_string(a.mode);
    mode_name = std::string(llm::to_string(mode));
    const auto& provider = *m->tagger;
    auto client = make_chat_client(ctx, mode, provider.config, provider.transcript);
    const auto taxonomy = load_taxonomy(*m, &ctx.diag);
    for (const auto& g : gold) predictions.push_back(tagger::tag_response(g.text, taxonomy, client, &ctx.diag));
    tagger_info = {{"model_id", provider.config.model_id}};
    if (mode == llm::Mode::replay) inputs.push_back(provider.transcript);
  }
  if (out.empty()) {
    if (!m) throw ValidationError("--out is required without --manifest");
    out = output_root(*m, a.output_dir) / "tags" / "tag_eval.json";
  }
  const auto report = tagger::evaluate_accuracy(gold, predictions);
  auto doc = report.to_json();
  doc["matcher"] = std::string(tagger::kMatcherDescription);
  doc["tagger"] = tagger_info;
  doc["manifest_hash"] = m ? m->hash : "";
  write_json_file(out, doc);

  auto prov = base_provenance("tag-eval", m ? &*m : nullptr, m ? output_root(*m, a.output_dir) : fs::path());
  prov.mode = {{"llm", mode_name}};
  prov.inputs = inputs;
  write_provenance(out, false, prov);
  ctx.out << "identification rate " << evalharness::format_number(report.accuracy).substr(0, 5) << " ("
          << report.identified << "/" << report.total_labels << " gold labels, " << report.false_positives
          << " unmatched predictions)\nmatcher: " << tagger::kMatcherDescription << "\n";
  return 0;
}

// synthesize --------------------------------------------------------------

struct SynthesizeArgs {
  std::string manifest, in, out, output_dir, mode, voice = "aa", chatbot;
  unsigned jobs = 1;
};

std::string segment_file(int turn, int segment) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "t%03d_s%02d.wav", turn, segment);
  return buf;
}

int cmd_synthesize(Context& ctx, const SynthesizeArgs& a) {
  auto m = require_manifest(a.manifest);
  if (a.in.empty()) throw ValidationError("--in is required");
  if (a.voice != "aa" && a.voice != "sa") throw ValidationError("--voice must be 'aa' or 'sa'");
  const auto root = output_root(m, a.output_dir);
  const auto records = read_records(a.in);
  if (records.empty()) throw ValidationError(a.in + ": no dialogues");
  const auto level_name = records.front().dialect_level;
  for (const auto& r : records) {
    if (r.dialect_level != level_name) throw ValidationError(a.in + ": mixed dialect levels");
  }
  const auto level = level_name.empty() ? dialect::DialectLevel::sae : dialect::level_from_string(level_name);
  const bool sa_voice = a.voice == "sa";
  if (sa_voice && level != dialect::DialectLevel::sae) {
    warn(&ctx.diag, "SA voice used with " + level_name + " text");
  }
  const auto chatbot_id = !a.chatbot.empty() ? a.chatbot : sa_voice ? "spoken:sa" : spoken_chatbot_id(level);
  const fs::path out_dir = a.out.empty() ? root / "segments" / slug(chatbot_id) : fs::path(a.out);
  const auto mode = a.mode.empty() ? m.tts_mode : speech::tts_mode_from_string(a.mode);

  const auto& user_ref = m.speaker(speech::SpeakerRole::user_sa);
  const auto& bot_ref = m.speaker(sa_voice ? speech::SpeakerRole::chatbot_sa : speech::SpeakerRole::chatbot_aa);
  if (mode != speech::TtsMode::stub) {
    speech::validate_speaker_ref(user_ref);
    speech::validate_speaker_ref(bot_ref);
  }
  auto transcript =
      open_transcript(m.tts_transcript, mode == speech::TtsMode::replay, mode == speech::TtsMode::record);
  auto transport =
      mode == speech::TtsMode::live || mode == speech::TtsMode::record ? ctx.transport("tts") : nullptr;
  speech::TtsClient tts(mode, m.tts, std::move(transcript), std::move(transport));

  std::vector<std::string> errors(records.size());
  parallel_for(records.size(), a.jobs, [&](std::size_t i) {
    const auto& d = records[i].dialogue;
    try {
      const auto dir = out_dir / slug(d.id);
      json index = json::array();
      int rate = 0;
      for (const auto& t : d.turns) {
        const auto& ref = t.side == corpus::Side::chatbot ? bot_ref : user_ref;
        Diagnostics local;
        const auto normalized = speech::normalize_for_tts(t.text, &local);
        for (const auto& msg : local.messages()) ctx.diag.warn(d.id + " turn " + std::to_string(t.index) + ": " + msg);
        const auto parts = speech::split_long_utterance(normalized, m.split_threshold);
        for (std::size_t k = 0; k < parts.size(); ++k) {
          auto seg = tts.synthesize(parts[k], ref, t.index, static_cast<int>(k));
          rate = seg.sample_rate;
          const auto file = segment_file(t.index, static_cast<int>(k));
          speech::write_wav(dir / file, speech::PcmAudio{seg.samples, seg.sample_rate, "manifest_hash=" + m.hash});
          index.push_back({{"turn_index", t.index},
                           {"segment_index", k},
                           {"speaker_id", ref.id},
                           {"text", parts[k]},
                           {"file", file},
                           {"samples", seg.samples.size()}});
        }
      }
      write_json_file(dir / "segments.json", {{"dialogue_id", d.id},
                                              {"chatbot_id", chatbot_id},
                                              {"sample_rate", rate},
                                              {"manifest_hash", m.hash},
                                              {"segments", index}});
    } catch (const Error& e) {
      errors[i] = d.id + ": " + e.what();
    }
  });
  std::size_t failures = 0;
  for (const auto& e : errors) {
    if (e.empty()) continue;
    ctx.err << "error: " << e << "\n";
    ++failures;
  }
  if (failures > 0) return 1;

  std::vector<json> rows;
  for (const auto& r : records) {
    auto row = record_to_json(r.dialogue, {r.dialect_level, r.provider_id}, m.hash);
    row["chatbot_id"] = chatbot_id;
    rows.push_back(std::move(row));
  }
  write_jsonl(out_dir / "dialogues.jsonl", rows);
  auto prov = base_provenance("synthesize", &m, root);
  prov.mode = {{"tts", speech::to_string(mode)}, {"voice", a.voice}};
  prov.inputs = {a.in};
  if (mode == speech::TtsMode::replay) prov.inputs.push_back(m.tts_transcript);
  if (mode != speech::TtsMode::stub) prov.inputs.insert(prov.inputs.end(), {user_ref.reference_audio, bot_ref.reference_audio});
  write_provenance(out_dir, true, prov);
  ctx.out << chatbot_id << ": synthesized " << records.size() << " dialogues -> " << out_dir.string() << "\n";
  return 0;
}

// assemble ----------------------------------------------------------------

struct AssembleArgs {
  std::string manifest, segments, out, output_dir;
  std::optional<int> pause_ms;
  unsigned jobs = 1;
};

int cmd_assemble(Context& ctx, const AssembleArgs& a) {
  auto m = require_manifest(a.manifest);
  if (a.segments.empty()) throw ValidationError("--segments is required");
  const auto root = output_root(m, a.output_dir);
  const fs::path seg_dir = a.segments;
  const auto rows = read_jsonl(seg_dir / "dialogues.jsonl");
  if (rows.empty()) throw ValidationError(seg_dir.string() + ": no dialogues");
  const auto chatbot_id = rows.front().value("chatbot_id", "");
  if (chatbot_id.empty()) throw ValidationError(seg_dir.string() + ": dialogues lack chatbot_id");
  const fs::path out_dir = a.out.empty() ? root / "audio" / slug(chatbot_id) : fs::path(a.out);
  const int pause_ms = a.pause_ms.value_or(m.pause_ms);

  std::vector<CorpusRecord> records;
  for (const auto& row : rows) records.push_back(record_from_json(row));
  std::vector<json> entries(records.size());
  std::vector<std::string> errors(records.size());
  parallel_for(records.size(), a.jobs, [&](std::size_t i) {
    const auto& d = records[i].dialogue;
    try {
      const auto dir = seg_dir / slug(d.id);
      const auto index = read_json_file(dir / "segments.json");
      std::vector<speech::AudioSegment> segments;
      for (const auto& s : index.at("segments")) {
        auto pcm = speech::read_wav(dir / s.at("file").get<std::string>());
        speech::AudioSegment seg;
        seg.samples = std::move(pcm.samples);
        seg.sample_rate = pcm.sample_rate;
        seg.turn_index = s.at("turn_index").get<int>();
        seg.segment_index = s.at("segment_index").get<int>();
        seg.text = s.at("text").get<std::string>();
        seg.speaker_id = s.at("speaker_id").get<std::string>();
        segments.push_back(std::move(seg));
      }
      const auto audio = speech::assemble(d, segments, pause_ms);
      const auto stem = slug(d.id);
      speech::write_wav(out_dir / (stem + ".wav"), audio.to_pcm("manifest_hash=" + m.hash));
      write_json_file(out_dir / (stem + ".timeline.json"), {{"dialogue_id", d.id},
                                                            {"chatbot_id", chatbot_id},
                                                            {"sample_rate", audio.sample_rate},
                                                            {"pause_ms", audio.pause_ms},
                                                            {"total_samples", audio.samples.size()},
                                                            {"total_duration_s", audio.total_duration()},
                                                            {"manifest_hash", m.hash},
                                                            {"timeline", speech::timeline_to_json(audio)}});
      entries[i] = {{"dialogue_id", d.id},
                    {"audio", stem + ".wav"},
                    {"timeline", stem + ".timeline.json"},
                    {"total_duration_s", audio.total_duration()}};
    } catch (const std::exception& e) {
      errors[i] = d.id + ": " + e.what();
    }
  });
  std::size_t failures = 0;
  for (const auto& e : errors) {
    if (e.empty()) continue;
    ctx.err << "error: " << e << "\n";
    ++failures;
  }
  if (failures > 0) return 1;

  write_jsonl(out_dir / "dialogues.jsonl", rows);
  write_json_file(out_dir / "index.json", {{"chatbot_id", chatbot_id},
                                           {"pause_ms", pause_ms},
                                           {"manifest_hash", m.hash},
                                           {"dialogues", entries}});
  auto prov = base_provenance("assemble", &m, root);
  prov.mode = {{"pause_ms", pause_ms}};
  prov.inputs = {seg_dir};
  write_provenance(out_dir, true, prov);
  ctx.out << chatbot_id << ": assembled " << records.size() << " dialogues -> " << out_dir.string() << "\n";
  return 0;
}

// eval-assign -------------------------------------------------------------

struct AssignArgs {
  std::string manifest, dialogues, out, output_dir;
  std::vector<std::string> evaluators, chatbots;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_load;
};

int cmd_eval_assign(Context& ctx, const AssignArgs& a) {
  auto m = require_manifest(a.manifest);
  const auto root = output_root(m, a.output_dir);
  const fs::path dialogues = a.dialogues.empty() ? root / "sampled.jsonl" : fs::path(a.dialogues);
  const fs::path out = a.out.empty() ? root / "study" / "tasks.json" : fs::path(a.out);
  const auto evaluators = a.evaluators.empty() ? m.study.evaluators : a.evaluators;
  const auto chatbots = a.chatbots.empty() ? m.study.chatbots : a.chatbots;
  if (evaluators.empty()) throw ValidationError("no evaluators (manifest study.evaluators or --evaluator)");
  if (chatbots.empty()) throw ValidationError("no chatbots (manifest study.chatbots or --chatbot)");
  const auto seed = a.seed.value_or(m.seeds.assign);

  std::vector<std::string> ids;
  for (const auto& r : read_records(dialogues)) ids.push_back(r.dialogue.id);
  evalharness::AssignmentOptions opts{seed, a.max_load ? a.max_load : m.study.max_load};
  const auto assignments = evalharness::make_assignments(ids, evaluators, opts, &ctx.diag);
  const auto tasks = evalharness::expand_tasks(assignments, chatbots, seed);

  json as = json::array();
  for (const auto& x : assignments) as.push_back({{"evaluator_id", x.evaluator_id}, {"dialogue_id", x.dialogue_id}});
  write_json_file(out, {{"manifest_hash", m.hash},
                        {"seed", seed},
                        {"evaluators", evaluators},
                        {"chatbots", chatbots},
                        {"assignments", as},
                        {"tasks", evalharness::tasks_to_json(tasks)}});
  auto prov = base_provenance("eval-assign", &m, root);
  prov.seeds = {{"assign", seed}};
  prov.inputs = {dialogues};
  write_provenance(out, false, prov);

  std::map<std::string, std::size_t> load;
  for (const auto& x : assignments) ++load[x.evaluator_id];
  ctx.out << assignments.size() << " assignments, " << tasks.size() << " tasks -> " << out.string() << "\n";
  for (const auto& [e, n] : load) ctx.out << "  " << e << ": " << n << " dialogues\n";
  return 0;
}

// eval-aggregate ----------------------------------------------------------

struct AggregateArgs {
  std::string manifest, ratings, out, plot, output_dir, ci = "t";
  std::vector<std::string> baseline;
};

int cmd_eval_aggregate(Context& ctx, const AggregateArgs& a) {
  if (a.ratings.empty()) throw ValidationError("--ratings is required");
  std::optional<RunManifest> m;
  if (!a.manifest.empty()) m = RunManifest::load(a.manifest);
  const auto root = m ? output_root(*m, a.output_dir) : fs::path();
  fs::path out = a.out;
  if (out.empty()) {
    if (!m) throw ValidationError("--out is required without --manifest");
    out = root / "report" / "report.csv";
  }
  const fs::path plot = a.plot.empty() ? out.parent_path() / (out.stem().string() + ".plot.json") : fs::path(a.plot);
  evalharness::AggregateOptions opts;
  if (a.ci == "t") {
    opts.method = evalharness::CiMethod::student_t;
  } else if (a.ci == "normal") {
    opts.method = evalharness::CiMethod::normal;
  } else {
    throw ValidationError("--ci must be 't' or 'normal'");
  }
  evalharness::ReportOptions ropts;
  const auto& baseline = !a.baseline.empty() || !m ? a.baseline : m->study.baseline;
  ropts.baseline_ids = {baseline.begin(), baseline.end()};
  ropts.manifest_hash = m ? m->hash : "";

  const auto ratings = evalharness::read_ratings_csv(a.ratings);
  const auto aggregates = evalharness::aggregate(ratings, evalharness::metric_registry(), opts);
  const auto files = evalharness::export_report(aggregates, ropts);
  write_file(out, files.csv);
  write_json_file(plot, files.plot_data);

  auto prov = base_provenance("eval-aggregate", m ? &*m : nullptr, root);
  prov.mode = {{"ci", a.ci}};
  prov.inputs = {a.ratings};
  write_provenance(out, false, prov);
  write_provenance(plot, false, prov);
  ctx.out << "aggregated " << ratings.size() << " ratings into " << aggregates.size() << " rows -> " << out.string()
          << "\n";
  return 0;
}

// serve -------------------------------------------------------------------

struct ServeArgs {
  std::string manifest, host = "127.0.0.1", tasks, ratings, output_dir;
  int port = 8080;
};

RaterServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

int cmd_serve(Context& ctx, const ServeArgs& a) {
  auto m = require_manifest(a.manifest);
  const auto root = output_root(m, a.output_dir);
  ServeConfig cfg;
  cfg.data_root = root;
  cfg.tasks = a.tasks.empty() ? root / "study" / "tasks.json" : fs::path(a.tasks);
  cfg.ratings = a.ratings.empty() ? root / "study" / "ratings.csv" : fs::path(a.ratings);
  cfg.evaluator_token = m.study.evaluator_token;
  cfg.manifest_hash = m.hash;
  RaterServer server(cfg, &ctx.diag);

  auto prov = base_provenance("serve", &m, root);
  prov.inputs = {cfg.tasks};
  write_provenance(cfg.ratings, false, prov);
  for (const auto& msg : ctx.diag.messages()) ctx.err << "warning: " << msg << "\n";

  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  ctx.out << "serving " << server.chatbot_count() << " chatbots on http://" << a.host << ":" << a.port << "\n"
          << std::flush;
  const bool ok = server.listen(a.host, a.port);
  g_server = nullptr;
  if (!ok) {
    ctx.err << "error: cannot listen on " << a.host << ":" << a.port << "\n";
    return 1;
  }
  return 0;
}

void add_manifest_options(CLI::App* sub, std::string& manifest, std::string& output_dir) {
  sub->add_option("-m,--manifest", manifest, "Run manifest (JSON)");
  sub->add_option("--output-dir", output_dir, "Override the manifest's output directory");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, const CliEnv& env) {
  std::ostream& out = env.out ? *env.out : std::cout;
  std::ostream& err = env.err ? *env.err : std::cerr;

  CLI::App app{"Build and evaluate AAE text and spoken chatbots from a dialogue corpus.", "aaechat"};
  app.require_subcommand(1);
  app.fallthrough(false);

  IngestArgs ingest;
  auto* s_ingest = app.add_subcommand("ingest", "Sample role-matched dialogues per domain from a corpus");
  add_manifest_options(s_ingest, ingest.manifest, ingest.output_dir);
  s_ingest->add_option("--corpus", ingest.corpus, "Corpus JSONL (overrides the manifest)");
  s_ingest->add_option("--seed", ingest.seed, "Sampling seed (overrides the manifest)");
  s_ingest->add_option("-o,--out", ingest.out, "Output JSONL [<output>/sampled.jsonl]");

  TranslateArgs translate;
  auto* s_translate = app.add_subcommand("translate", "Rewrite chatbot turns at the requested dialect levels");
  add_manifest_options(s_translate, translate.manifest, translate.output_dir);
  s_translate->add_option("--level", translate.levels, "SAE, Low, Medium or High; repeatable [manifest levels]");
  s_translate->add_option("--provider", translate.providers, "Provider id; repeatable [all providers]");
  s_translate->add_option("--mode", translate.mode, "live, record or replay [manifest]");
  s_translate->add_option("--history", translate.history, "translated or original [manifest]");
  s_translate->add_option("--in", translate.in, "Sampled corpus [<output>/sampled.jsonl]");
  s_translate->add_option("--out-dir", translate.out_dir, "Output directory [<output>/translated]");
  s_translate->add_option("-j,--jobs", translate.jobs, "Dialogues translated in parallel")->check(CLI::PositiveNumber);

  TagArgs tag;
  auto* s_tag = app.add_subcommand("tag", "Tag AAE features in translated chatbot turns");
  add_manifest_options(s_tag, tag.manifest, tag.output_dir);
  s_tag->add_option("--in", tag.inputs, "Translated corpora; repeatable [<output>/translated/*.jsonl]");
  s_tag->add_option("-o,--out", tag.out, "Tagging output [<output>/tags/tags.json]");
  s_tag->add_option("--rates", tag.rates, "Feature-rate CSV [next to --out]");
  s_tag->add_option("--mode", tag.mode, "live, record or replay [manifest]");
  s_tag->add_option("--seed", tag.seed, "Half-sample seed (overrides the manifest)");
  s_tag->add_flag("--all", tag.all, "Tag every chatbot turn instead of a stratified half");
  s_tag->add_flag("--include-sae", tag.include_sae, "Also tag SAE baseline corpora");
  s_tag->add_option("-j,--jobs", tag.jobs, "Turns tagged in parallel")->check(CLI::PositiveNumber);

  TagEvalArgs tag_eval;
  auto* s_tag_eval = app.add_subcommand("tag-eval", "Score tagger output against a gold set");
  add_manifest_options(s_tag_eval, tag_eval.manifest, tag_eval.output_dir);
  s_tag_eval->add_option("--gold", tag_eval.gold, "Gold set JSON")->required();
  s_tag_eval->add_option("--predictions", tag_eval.predictions, "Tagging results aligned with the gold set");
  s_tag_eval->add_option("--mode", tag_eval.mode, "live, record or replay when running the tagger [manifest]");
  s_tag_eval->add_option("-o,--out", tag_eval.out, "Report JSON [<output>/tags/tag_eval.json]");

  SynthesizeArgs synth;
  auto* s_synth = app.add_subcommand("synthesize", "Normalize, split and synthesize every turn of a corpus");
  add_manifest_options(s_synth, synth.manifest, synth.output_dir);
  s_synth->add_option("--in", synth.in, "Translated corpus")->required();
  s_synth->add_option("--voice", synth.voice, "Chatbot voice: aa or sa [aa]");
  s_synth->add_option("--chatbot", synth.chatbot, "Chatbot id [spoken:<level>, or spoken:sa]");
  s_synth->add_option("--mode", synth.mode, "live, record, replay or stub [manifest]");
  s_synth->add_option("-o,--out", synth.out, "Segment directory [<output>/segments/<chatbot>]");
  s_synth->add_option("-j,--jobs", synth.jobs, "Dialogues synthesized in parallel")->check(CLI::PositiveNumber);

  AssembleArgs assemble;
  auto* s_assemble = app.add_subcommand("assemble", "Concatenate segments into dialogue WAVs with timelines");
  add_manifest_options(s_assemble, assemble.manifest, assemble.output_dir);
  s_assemble->add_option("--segments", assemble.segments, "Directory written by synthesize")->required();
  s_assemble->add_option("--pause-ms", assemble.pause_ms, "Silence between turns [manifest, 500]");
  s_assemble->add_option("-o,--out", assemble.out, "Audio directory [<output>/audio/<chatbot>]");
  s_assemble->add_option("-j,--jobs", assemble.jobs, "Dialogues assembled in parallel")->check(CLI::PositiveNumber);

  AssignArgs assign;
  auto* s_assign = app.add_subcommand("eval-assign", "Assign dialogues to evaluators and order their tasks");
  add_manifest_options(s_assign, assign.manifest, assign.output_dir);
  s_assign->add_option("--dialogues", assign.dialogues, "Sampled corpus [<output>/sampled.jsonl]");
  s_assign->add_option("--evaluator", assign.evaluators, "Evaluator id; repeatable [manifest]");
  s_assign->add_option("--chatbot", assign.chatbots, "Chatbot id; repeatable [manifest]");
  s_assign->add_option("--seed", assign.seed, "Assignment seed (overrides the manifest)");
  s_assign->add_option("--max-load", assign.max_load, "Cap on dialogues per evaluator");
  s_assign->add_option("-o,--out", assign.out, "Study file [<output>/study/tasks.json]");

  AggregateArgs agg;
  auto* s_agg = app.add_subcommand("eval-aggregate", "Aggregate Likert ratings into means and 95% CIs");
  add_manifest_options(s_agg, agg.manifest, agg.output_dir);
  s_agg->add_option("--ratings", agg.ratings, "Ratings CSV")->required();
  s_agg->add_option("-o,--out", agg.out, "Report CSV [<output>/report/report.csv]");
  s_agg->add_option("--plot", agg.plot, "Plot-data JSON [<out stem>.plot.json]");
  s_agg->add_option("--ci", agg.ci, "t or normal [t]");
  s_agg->add_option("--baseline", agg.baseline, "Baseline chatbot id; repeatable [manifest]");

  ServeArgs serve;
  auto* s_serve = app.add_subcommand("serve", "Serve dialogues, audio and the ratings API to the rater UI");
  add_manifest_options(s_serve, serve.manifest, serve.output_dir);
  s_serve->add_option("--host", serve.host, "Bind address [127.0.0.1]");
  s_serve->add_option("--port", serve.port, "Port [8080]");
  s_serve->add_option("--tasks", serve.tasks, "Study file [<output>/study/tasks.json]");
  s_serve->add_option("--ratings", serve.ratings, "Ratings store [<output>/study/ratings.csv]");

  if (args.empty()) {
    err << app.help();
    return 2;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  Context ctx{env, out, err, {}};
  int status = 1;
  try {
    if (*s_ingest) status = cmd_ingest(ctx, ingest);
    if (*s_translate) status = cmd_translate(ctx, translate);
    if (*s_tag) status = cmd_tag(ctx, tag);
    if (*s_tag_eval) status = cmd_tag_eval(ctx, tag_eval);
    if (*s_synth) status = cmd_synthesize(ctx, synth);
    if (*s_assemble) status = cmd_assemble(ctx, assemble);
    if (*s_assign) status = cmd_eval_assign(ctx, assign);
    if (*s_agg) status = cmd_eval_aggregate(ctx, agg);
    if (*s_serve) status = cmd_serve(ctx, serve);
  } catch (const std::exception& e) {
    for (const auto& msg : ctx.diag.messages()) err << "warning: " << msg << "\n";
    err << "error: " << e.what() << "\n";
    return 1;
  }
  if (!*s_serve) {
    for (const auto& msg : ctx.diag.messages()) err << "warning: " << msg << "\n";
  }
  return status;
}

}  // namespace aaechat::cli

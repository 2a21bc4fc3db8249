#include "corpus_io.hpp"

#include <fstream>

#include "aaechat/common/errors.hpp"
#include "aaechat/common/jsonl.hpp"

namespace aaechat::cli {

nlohmann::json record_to_json(const corpus::Dialogue& d, const RecordExtras& extras, const std::string& manifest_hash) {
  auto row = corpus::dialogue_to_json(d);
  if (!extras.dialect_level.empty()) row["dialect_level"] = extras.dialect_level;
  if (!extras.provider_id.empty()) row["provider_id"] = extras.provider_id;
  row["manifest_hash"] = manifest_hash;
  return row;
}

CorpusRecord record_from_json(const nlohmann::json& row) {
  CorpusRecord r;
  r.dialogue = corpus::dialogue_from_json(row);
  r.dialect_level = row.value("dialect_level", "");
  r.provider_id = row.value("provider_id", "");
  return r;
}

std::vector<CorpusRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<CorpusRecord> out;
  for_each_line(in, [&](std::size_t line, const std::string& text) {
    try {
      out.push_back(record_from_json(nlohmann::json::parse(text)));
    } catch (const std::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(line) + ": " + e.what());
    }
  });
  return out;
}

}  // namespace aaechat::cli

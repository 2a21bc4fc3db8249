#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aaechat/corpus/corpus.hpp"

namespace aaechat::cli {

/// A corpus record plus the fields later pipeline stages add.
struct CorpusRecord {
  corpus::Dialogue dialogue;
  std::string dialect_level;
  std::string provider_id;
};

struct RecordExtras {
  std::string dialect_level;
  std::string provider_id;
};

/// Corpus record JSON with dialect_level/provider_id (when set) and the
/// manifest hash.
nlohmann::json record_to_json(const corpus::Dialogue& d, const RecordExtras& extras, const std::string& manifest_hash);
CorpusRecord record_from_json(const nlohmann::json& row);

/// Strict reader for pipeline-produced corpora: any malformed line throws
/// ParseError naming the line.
std::vector<CorpusRecord> read_records(const std::filesystem::path& path);

}  // namespace aaechat::cli

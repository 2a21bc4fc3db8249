#pragma once

#include <filesystem>

namespace aaechat::fixturegen {

/// Writes the pipeline fixture set into `dir`:
///   corpus.jsonl             synthetic corpus
///   manifest.json            run manifest used by the end-to-end tests
///   voices/*.wav             reference clips (short tones)
///   transcripts/*.jsonl      recorded translation and tagging replies
///   ratings.csv              synthetic ratings for the study in the manifest
/// `gold` is the tagging gold set; its sentences are recorded too so tag-eval
/// can replay. Existing transcripts in `dir` are replaced.
void write_pipeline_fixtures(const std::filesystem::path& dir, const std::filesystem::path& gold);

}  // namespace aaechat::fixturegen

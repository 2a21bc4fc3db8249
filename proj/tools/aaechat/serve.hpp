#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "aaechat/common/diagnostics.hpp"

namespace aaechat::cli {

struct ServeConfig {
  /// Pipeline output directory: translated/*.jsonl for text chatbots and
  /// audio/<chatbot>/ for spoken ones.
  std::filesystem::path data_root;
  /// Study file written by eval-assign.
  std::filesystem::path tasks;
  /// Append-only ratings CSV; created when missing.
  std::filesystem::path ratings;
  /// When set, requests must carry it in X-Evaluator-Token or ?token=.
  std::string evaluator_token;
  std::string manifest_hash;
  /// Optional directory of static files served at /.
  std::filesystem::path static_dir;
};

/// HTTP backend for the rater UI.
///
///   GET  /api/metrics?modality=text|spoken
///   GET  /api/assignments/{evaluator_id}
///   GET  /api/dialogues/{id}?chatbot={chatbot_id}
///   GET  /api/audio/{id}?chatbot={chatbot_id}     WAV, Link header to the timeline
///   GET  /api/timeline/{id}?chatbot={chatbot_id}
///   POST /api/ratings                              one rating object or an array
///
/// Corpora and audio are loaded once and never written; only the ratings
/// store changes.
class RaterServer {
 public:
  /// Loads the study; throws ValidationError when tasks reference unknown
  /// chatbots or dialogues.
  explicit RaterServer(ServeConfig config, Diagnostics* diag = nullptr);
  ~RaterServer();

  /// Blocks until stop().
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it; follow with listen_after_bind().
  int bind_to_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

  std::size_t chatbot_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace aaechat::cli

#pragma once

#include <filesystem>
#include <string>

namespace aaechat::testing {

struct PipelineRun {
  /// First non-zero exit status, or 0.
  int exit_code = 0;
  std::string failed_step;
  std::string log;
  /// Requests that reached a transport; replay and stub runs must make none.
  int network_calls = 0;
  double seconds = 0.0;
};

/// ingest, translate, tag, synthesize (AA high and SA baseline voices),
/// assemble, eval-assign and eval-aggregate over the pipeline fixture, all in
/// replay/stub mode, writing into `out`.
PipelineRun run_fixture_pipeline(const std::filesystem::path& out);

}  // namespace aaechat::testing

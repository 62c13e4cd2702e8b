#pragma once

#include <stdexcept>
#include <string>

namespace spivc::cli {

// A stage-tagged failure: the driver prints "error: pipeline/<stage>: msg"
// and exits nonzero, so scripts can tell which stage aborted.
struct PipelineError : std::runtime_error {
  std::string stage;
  PipelineError(std::string stage_, const std::string& msg)
      : std::runtime_error(msg), stage(std::move(stage_)) {}
};

// Runs the manifest end to end and writes report.json plus all stage
// outputs into out_dir. Returns the process exit code: 0 when every
// threshold embedded in the manifest holds, 3 when one fails (the report
// is still written).
int run_pipeline(const std::string& manifest_path, std::string out_dir);

}  // namespace spivc::cli

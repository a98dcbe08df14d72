#pragma once

#include <string>
#include <vector>

#include "monotone/config.hpp"
#include "monotone/report_io.hpp"

namespace monotone {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;    // malformed config, domain or solver errors
inline constexpr int kExitFailure = 2;  // identity or monotonicity failure beyond tolerance

const char* version_string();

struct RunOutcome {
  int exit_code = kExitOk;
  std::string task;
  std::string message;
  std::vector<std::string> files;  // report, table, manifest and saved fields, in write order
  Json report;
};

/// Executes the single task of `cfg`. Every setting is read and validated before
/// the task starts; unknown keys are rejected. Writes <dir>/<name>.json, .csv and
/// .manifest.json. Errors are returned as exit code 1 with the message.
RunOutcome run(const Config& cfg);

/// Parses `path`, applies "key=value" overrides and runs.
RunOutcome run_file(const std::string& path, const std::vector<std::string>& overrides = {});

}  // namespace monotone

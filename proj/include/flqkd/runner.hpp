#pragma once

#include <exception>
#include <string>
#include <vector>

#include <json.hpp>

#include "flqkd/config.hpp"
#include "flqkd/monitor.hpp"
#include "flqkd/report.hpp"

namespace flqkd {

inline constexpr double kActiveVsOptimumMaxRelDiff = 0.25;
inline constexpr double kPassiveOverOptimumMin = 0.7;

struct RunOutput {
  Table table;
  nlohmann::ordered_json meta;
  std::vector<std::string> warnings;
  std::vector<DetectionEvent> events;
};

/// Runs one configured job in-process. Throws flqkd::Error subclasses.
RunOutput execute(const RunConfig& cfg);

/// Writes the data file (or stdout when cfg.out is empty), the metadata
/// sidecar `<out>.meta.json` and, for monitor-sim, the event dump.
void write_outputs(const RunConfig& cfg, const RunOutput& out);

/// 2 for configuration problems, 3 for numeric-invariant violations, 1 otherwise.
int exit_code_for(const std::exception& e);

/// Full command-line entry point.
int cli_main(int argc, char** argv);

}  // namespace flqkd

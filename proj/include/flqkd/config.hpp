#pragma once

// Run configuration: a flat text format of `key = value` lines with dotted
// keys ("params.G_B = 1e4"). '#' starts a comment.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flqkd/keyrate.hpp"
#include "flqkd/terminals.hpp"

namespace flqkd {

enum class RunMode { keyrate_sweep, fe_sweep, holevo_sweep, point, monitor_sim };
enum class OutputFormat { csv, jsonl };

const char* to_string(RunMode m);
const char* to_string(OutputFormat f);
RunMode parse_mode(const std::string& s);

struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  int points = 0;
  bool log_scale = false;
};

struct RunConfig {
  RunMode mode = RunMode::point;
  SystemParams params;
  double f_E = 0.01;
  GridSpec grid;
  OptimizerSettings optimizer;
  std::optional<double> point_N_S;  // fixed brightness for `point`; optimized if unset
  std::optional<double> point_R;
  double monitor_duration = 1e-3;   // s
  std::string out;                  // empty: stdout
  std::string events_out;           // monitor-sim event dump, empty: none
  OutputFormat format = OutputFormat::csv;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

/// Defaults for a mode, including its natural sweep grid.
RunConfig default_config(RunMode mode);

/// Applies one `key = value` assignment. Throws ConfigError on unknown keys
/// or unparsable values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Applies every line of a config file's text.
void apply_config_text(RunConfig& cfg, const std::string& text);

/// "key=value" as given on the command line.
void apply_override(RunConfig& cfg, const std::string& assignment);

/// Checks cross-field constraints (SystemParams invariants, grid sanity).
/// Returns soft warnings.
std::vector<std::string> validate(const RunConfig& cfg);

/// Complete resolved configuration; re-applying it to default_config(mode)
/// reproduces cfg. Output paths and thread count are left out.
std::string to_config_text(const RunConfig& cfg);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double x);

}  // namespace flqkd

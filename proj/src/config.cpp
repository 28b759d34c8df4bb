#include "flqkd/config.hpp"

#include <charconv>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "flqkd/errors.hpp"

namespace flqkd {

namespace {

struct ParamField {
  const char* key;
  double SystemParams::*member;
};

constexpr ParamField kParamFields[] = {
    {"W", &SystemParams::W},
    {"R", &SystemParams::R},
    {"L", &SystemParams::L_km},
    {"fiber_loss", &SystemParams::fiber_loss_db_per_km},
    {"n", &SystemParams::n},
    {"N_A", &SystemParams::N_A},
    {"kappa_A", &SystemParams::kappa_A},
    {"kappa_B", &SystemParams::kappa_B},
    {"G_B", &SystemParams::G_B},
    {"N_B", &SystemParams::N_B},
    {"eta", &SystemParams::eta},
    {"N_LO", &SystemParams::N_LO},
    {"G_R", &SystemParams::G_R},
    {"kappa_I", &SystemParams::kappa_I},
    {"beta", &SystemParams::beta},
    {"eta_I", &SystemParams::eta_I},
    {"eta_A_mon", &SystemParams::eta_A_mon},
    {"eta_B_mon", &SystemParams::eta_B_mon},
    {"T_g", &SystemParams::T_g},
    {"T_s", &SystemParams::T_s},
    {"T_R", &SystemParams::T_R},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  if (!v.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last || v.empty()) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  return x;
}

long long parse_int(const std::string& key, const std::string& v) {
  const double x = parse_double(key, v);
  if (x != static_cast<double>(static_cast<long long>(x))) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
  return static_cast<long long>(x);
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError(key + ": expected an unsigned integer, got '" + v + "'");
  }
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

unsigned default_threads() {
  if (const char* env = std::getenv("FLQKD_THREADS")) {
    try {
      const auto n = parse_u64("FLQKD_THREADS", env);
      if (n > 0) return static_cast<unsigned>(n);
    } catch (const ConfigError&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

const char* to_string(RunMode m) {
  switch (m) {
    case RunMode::keyrate_sweep: return "keyrate-sweep";
    case RunMode::fe_sweep: return "fe-sweep";
    case RunMode::holevo_sweep: return "holevo-sweep";
    case RunMode::point: return "point";
    case RunMode::monitor_sim: return "monitor-sim";
  }
  return "unknown";
}

const char* to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "jsonl"; }

RunMode parse_mode(const std::string& s) {
  for (RunMode m : {RunMode::keyrate_sweep, RunMode::fe_sweep, RunMode::holevo_sweep,
                    RunMode::point, RunMode::monitor_sim}) {
    if (s == to_string(m)) return m;
  }
  throw ConfigError("mode: unknown mode '" + s + "'");
}

RunConfig default_config(RunMode mode) {
  RunConfig cfg;
  cfg.mode = mode;
  cfg.threads = default_threads();
  switch (mode) {
    case RunMode::keyrate_sweep: cfg.grid = {10.0, 200.0, 20, true}; break;
    case RunMode::fe_sweep: cfg.grid = {0.0, 0.1, 11, false}; break;
    case RunMode::holevo_sweep: cfg.grid = {1e-4, 1.0, 41, true}; break;
    case RunMode::point:
    case RunMode::monitor_sim: cfg.grid = {0.0, 0.0, 0, false}; break;
  }
  if (mode == RunMode::monitor_sim) cfg.params = cfg.params.with_signal_brightness(0.043);
  return cfg;
}

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string v = trim(raw_value);
  if (key.rfind("params.", 0) == 0) {
    const std::string field = key.substr(7);
    for (const auto& f : kParamFields) {
      if (field == f.key) {
        cfg.params.*f.member = parse_double(key, v);
        return;
      }
    }
    if (field == "kappa_S") {
      if (v == "none" || v.empty()) cfg.params.kappa_S_override.reset();
      else cfg.params.kappa_S_override = parse_double(key, v);
      return;
    }
    if (field == "N_S") {
      cfg.params = cfg.params.with_signal_brightness(parse_double(key, v));
      return;
    }
    throw ConfigError("unknown parameter '" + key + "'");
  }
  if (key == "mode") cfg.mode = parse_mode(v);
  else if (key == "f_E") cfg.f_E = parse_double(key, v);
  else if (key == "grid.start") cfg.grid.start = parse_double(key, v);
  else if (key == "grid.stop") cfg.grid.stop = parse_double(key, v);
  else if (key == "grid.points") cfg.grid.points = static_cast<int>(parse_int(key, v));
  else if (key == "grid.scale") {
    if (v == "log") cfg.grid.log_scale = true;
    else if (v == "lin") cfg.grid.log_scale = false;
    else throw ConfigError("grid.scale: expected lin or log");
  } else if (key == "optimizer.ns_min") cfg.optimizer.ns_min = parse_double(key, v);
  else if (key == "optimizer.ns_max") cfg.optimizer.ns_max = parse_double(key, v);
  else if (key == "optimizer.ns_points") cfg.optimizer.ns_points = static_cast<int>(parse_int(key, v));
  else if (key == "optimizer.rel_tol") cfg.optimizer.rel_tol = parse_double(key, v);
  else if (key == "optimizer.R_set") cfg.optimizer.rates = parse_list(key, v);
  else if (key == "optimizer.R_max") cfg.optimizer.R_max = parse_double(key, v);
  else if (key == "optimizer.pr_e_max") cfg.optimizer.pr_e_max = parse_double(key, v);
  else if (key == "fold_leak") cfg.optimizer.fold_leak = parse_bool(key, v);
  else if (key == "point.N_S") {
    if (v == "none") cfg.point_N_S.reset();
    else cfg.point_N_S = parse_double(key, v);
  } else if (key == "point.R") {
    if (v == "none") cfg.point_R.reset();
    else cfg.point_R = parse_double(key, v);
  } else if (key == "monitor.duration") cfg.monitor_duration = parse_double(key, v);
  else if (key == "seed") cfg.seed = parse_u64(key, v);
  else if (key == "threads") {
    const auto n = parse_u64(key, v);
    if (n == 0) throw ConfigError("threads: must be >= 1");
    cfg.threads = static_cast<unsigned>(n);
  } else if (key == "format") {
    if (v == "csv") cfg.format = OutputFormat::csv;
    else if (v == "jsonl") cfg.format = OutputFormat::jsonl;
    else throw ConfigError("format: expected csv or jsonl");
  } else if (key == "out") cfg.out = v;
  else if (key == "events") cfg.events_out = v;
  else throw ConfigError("unknown key '" + key + "'");
}

void apply_config_text(RunConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + assignment + "'");
  apply_setting(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

std::vector<std::string> validate(const RunConfig& cfg) {
  std::vector<std::string> warnings = validate(cfg.params);
  if (!(cfg.f_E >= 0.0 && cfg.f_E <= 1.0)) throw InvalidParameter("f_E", "must lie in [0, 1]");
  const bool sweep = cfg.mode == RunMode::keyrate_sweep || cfg.mode == RunMode::fe_sweep ||
                     cfg.mode == RunMode::holevo_sweep;
  if (sweep) {
    if (cfg.grid.points < 2) throw InvalidParameter("grid.points", "sweeps need >= 2 points");
    if (!(cfg.grid.stop >= cfg.grid.start)) throw InvalidParameter("grid.stop", "must be >= grid.start");
    if (cfg.grid.log_scale && !(cfg.grid.start > 0.0)) {
      throw InvalidParameter("grid.start", "log grid needs a positive start");
    }
  }
  if (cfg.mode == RunMode::fe_sweep && !(cfg.grid.start >= 0.0 && cfg.grid.stop <= 1.0)) {
    throw InvalidParameter("grid", "f_E grid must lie in [0, 1]");
  }
  if (cfg.mode == RunMode::keyrate_sweep && !(cfg.grid.start > 0.0 || cfg.params.fiber_loss_db_per_km > 0.0)) {
    throw InvalidParameter("grid.start", "distance grid must start above 0 km");
  }
  const auto& o = cfg.optimizer;
  if (o.ns_points < 2) throw InvalidParameter("optimizer.ns_points", "must be >= 2");
  if (!(o.ns_min > 0.0 && o.ns_max > o.ns_min)) {
    throw InvalidParameter("optimizer.ns_min", "need 0 < ns_min < ns_max");
  }
  if (!(o.rel_tol > 0.0)) throw InvalidParameter("optimizer.rel_tol", "must be > 0");
  if (!(o.pr_e_max > 0.0 && o.pr_e_max <= 0.5)) {
    throw InvalidParameter("optimizer.pr_e_max", "must lie in (0, 0.5]");
  }
  for (double r : o.rates) {
    if (!(r > 0.0)) throw InvalidParameter("optimizer.R_set", "rates must be > 0");
  }
  if (cfg.point_N_S && !(*cfg.point_N_S >= 0.0)) throw InvalidParameter("point.N_S", "must be >= 0");
  if (cfg.point_R && !(*cfg.point_R > 0.0 && *cfg.point_R <= cfg.params.W)) {
    throw InvalidParameter("point.R", "must satisfy 0 < R <= W");
  }
  if (cfg.point_N_S.has_value() != cfg.point_R.has_value()) {
    throw InvalidParameter("point.N_S", "point.N_S and point.R must be given together");
  }
  if (!(cfg.monitor_duration > 0.0)) throw InvalidParameter("monitor.duration", "must be > 0");
  return warnings;
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw NumericInvariantError("format_double failed");
  return std::string(buf, ptr);
}

std::string to_config_text(const RunConfig& cfg) {
  std::ostringstream os;
  os << "mode = " << to_string(cfg.mode) << '\n';
  for (const auto& f : kParamFields) {
    os << "params." << f.key << " = " << format_double(cfg.params.*f.member) << '\n';
  }
  os << "params.kappa_S = "
     << (cfg.params.kappa_S_override ? format_double(*cfg.params.kappa_S_override) : "none") << '\n';
  os << "f_E = " << format_double(cfg.f_E) << '\n';
  os << "grid.start = " << format_double(cfg.grid.start) << '\n';
  os << "grid.stop = " << format_double(cfg.grid.stop) << '\n';
  os << "grid.points = " << cfg.grid.points << '\n';
  os << "grid.scale = " << (cfg.grid.log_scale ? "log" : "lin") << '\n';
  os << "optimizer.ns_min = " << format_double(cfg.optimizer.ns_min) << '\n';
  os << "optimizer.ns_max = " << format_double(cfg.optimizer.ns_max) << '\n';
  os << "optimizer.ns_points = " << cfg.optimizer.ns_points << '\n';
  os << "optimizer.rel_tol = " << format_double(cfg.optimizer.rel_tol) << '\n';
  os << "optimizer.R_set = ";
  for (std::size_t i = 0; i < cfg.optimizer.rates.size(); ++i) {
    os << (i ? "," : "") << format_double(cfg.optimizer.rates[i]);
  }
  os << '\n';
  os << "optimizer.R_max = " << format_double(cfg.optimizer.R_max) << '\n';
  os << "optimizer.pr_e_max = " << format_double(cfg.optimizer.pr_e_max) << '\n';
  os << "fold_leak = " << (cfg.optimizer.fold_leak ? "true" : "false") << '\n';
  os << "point.N_S = " << (cfg.point_N_S ? format_double(*cfg.point_N_S) : "none") << '\n';
  os << "point.R = " << (cfg.point_R ? format_double(*cfg.point_R) : "none") << '\n';
  os << "monitor.duration = " << format_double(cfg.monitor_duration) << '\n';
  os << "seed = " << cfg.seed << '\n';
  os << "format = " << to_string(cfg.format) << '\n';
  return os.str();
}

}  // namespace flqkd

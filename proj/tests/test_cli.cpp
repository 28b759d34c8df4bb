#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "flqkd/config.hpp"
#include "flqkd/errors.hpp"
#include "flqkd/runner.hpp"

using namespace flqkd;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "flqkd_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "flqkd");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) rows.push_back(split(line, ','));
  return rows;
}

}  // namespace

TEST_CASE("config text parsing") {
  RunConfig cfg = default_config(RunMode::point);
  apply_config_text(cfg,
                    "# comment\n"
                    "params.L = 75   # trailing comment\n"
                    "\n"
                    "f_E = 0.05\n"
                    "optimizer.R_set = 1e9, 5e9\n"
                    "params.kappa_S = none\n");
  CHECK(cfg.params.L_km == 75.0);
  CHECK(cfg.f_E == 0.05);
  CHECK(cfg.optimizer.rates == std::vector<double>{1e9, 5e9});
  CHECK_FALSE(cfg.params.kappa_S_override.has_value());
  apply_override(cfg, "params.kappa_S=0.2");
  CHECK(*cfg.params.kappa_S_override == 0.2);
  CHECK_THROWS_AS(apply_override(cfg, "params.bogus=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "f_E=abc"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "f_E"), ConfigError);
  CHECK_THROWS_AS(apply_config_text(cfg, "grid.scale = cubic\n"), ConfigError);
}

TEST_CASE("config dump round-trips") {
  RunConfig cfg = default_config(RunMode::keyrate_sweep);
  apply_override(cfg, "params.G_B=2e4");
  apply_override(cfg, "params.N_B=3e4");
  apply_override(cfg, "f_E=0.1");
  apply_override(cfg, "grid.points=3");
  apply_override(cfg, "optimizer.R_set=2e9,1e10");
  RunConfig again = default_config(RunMode::point);
  apply_config_text(again, to_config_text(cfg));
  CHECK(to_config_text(again) == to_config_text(cfg));
  CHECK(again.mode == RunMode::keyrate_sweep);
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("exit codes") {
  CHECK(run({"point", "--set", "params.nope=1"}) == 2);
  CHECK(run({"point", "--set", "params.G_B=0.5"}) == 2);
  CHECK(run({"no-such-mode"}) == 2);
  CHECK(run({"point", "--config", scratch("missing.cfg").string()}) == 2);
  CHECK(exit_code_for(NumericInvariantError("x")) == 3);
  CHECK(exit_code_for(DegenerateReceiver("x")) == 3);
  CHECK(exit_code_for(std::runtime_error("x")) == 1);
}

TEST_CASE("keyrate sweep output and metadata") {
  const fs::path out = scratch("sweep.csv");
  REQUIRE(run({"keyrate-sweep", "--set", "grid.start=25", "--set", "grid.stop=100", "--set",
               "grid.points=3", "--out", out.string()}) == 0);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 4);
  const std::vector<std::string> head = {
      "L_km",        "kappa_S",   "N_S_opt",           "R_opt",       "pr_e",
      "I_AB_bps",    "chi_ub_bps", "skr_lb_bps",       "ppb_tx",      "ppb_rx",
      "eff_per_use", "eff_per_mode", "pirandola_bound", "f_E",        "chi_exact_per_bit",
      "chi_asym_per_bit", "leak_ratio", "status"};
  CHECK(rows[0] == head);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    REQUIRE(rows[r].size() == head.size());
    for (std::size_t c = 0; c + 1 < head.size(); ++c) CHECK(std::isfinite(std::stod(rows[r][c])));
  }
  const auto meta = nlohmann::json::parse(slurp(out.string() + ".meta.json"));
  CHECK(meta["mode"] == "keyrate-sweep");
  CHECK(meta["bound_method"] == "exact_symplectic");
  CHECK(meta["rows"] == 3);
  CHECK(meta.contains("wall_time_s"));
  CHECK(meta["thresholds"].contains("pr_e_max"));

  // Rerunning from the dumped configuration reproduces the data exactly.
  const fs::path cfg = scratch("sweep.cfg");
  std::ofstream(cfg) << meta["config_text"].get<std::string>();
  const fs::path out2 = scratch("sweep2.csv");
  REQUIRE(run({"keyrate-sweep", "--config", cfg.string(), "--out", out2.string()}) == 0);
  CHECK(slurp(out) == slurp(out2));
}

TEST_CASE("jsonl output") {
  const fs::path out = scratch("holevo.jsonl");
  REQUIRE(run({"holevo-sweep", "--format", "jsonl", "--set", "grid.points=5", "--out",
               out.string()}) == 0);
  std::ifstream in(out);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const auto row = nlohmann::json::parse(line);
    CHECK(row["optimum_per_mode"].get<double>() >= row["passive_per_mode"].get<double>());
    ++n;
  }
  CHECK(n == 5);
}

TEST_CASE("monitor-sim is reproducible") {
  const fs::path a = scratch("mon_a.csv"), b = scratch("mon_b.csv");
  const fs::path ea = scratch("ev_a.txt"), eb = scratch("ev_b.txt");
  for (const auto& [out, ev] : {std::pair{a, ea}, std::pair{b, eb}}) {
    REQUIRE(run({"monitor-sim", "--seed", "5", "--set", "monitor.duration=2e-5", "--out",
                 out.string(), "--events", ev.string()}) == 0);
  }
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(ea) == slurp(eb));
  CHECK_FALSE(slurp(ea).empty());
  const auto rows = read_csv(a);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][0] == "expected");
  CHECK(rows[2][0] == "simulated");
}

TEST_CASE("installed binary") {
  const fs::path out = scratch("bin_point.csv");
  const std::string ok = std::string("\"") + FLQKD_CLI_PATH + "\" point --out \"" + out.string() +
                         "\" 2>/dev/null";
  CHECK(std::system(ok.c_str()) == 0);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 2);
  CHECK(std::stod(rows[1][7]) > 1e9);
  const std::string bad = std::string("\"") + FLQKD_CLI_PATH + "\" point --set f_E=2 2>/dev/null";
  const int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == 2);
}

#include "flqkd/runner.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "flqkd/errors.hpp"
#include "flqkd/keyrate.hpp"
#include "flqkd/version.hpp"

namespace flqkd {

namespace {

const std::vector<std::string> kKeyrateColumns = {
    "L_km",        "kappa_S",      "N_S_opt",         "R_opt",
    "pr_e",        "I_AB_bps",     "chi_ub_bps",      "skr_lb_bps",
    "ppb_tx",      "ppb_rx",       "eff_per_use",     "eff_per_mode",
    "pirandola_bound", "f_E",      "chi_exact_per_bit", "chi_asym_per_bit",
    "leak_ratio",  "status"};

std::vector<Cell> keyrate_cells(const OperatingPoint& op) {
  return {op.L_km,         op.kappa_S,      op.N_S,          op.R,
          op.pr_e,         op.I_AB,         op.chi_ub,       op.skr_lb,
          op.ppb_tx,       op.ppb_rx,       op.eff_per_use,  op.eff_per_mode,
          op.pirandola_bound, op.f_E,       op.chi_exact_per_bit, op.chi_asym_per_bit,
          op.leak_ratio,   std::string(to_string(op.status))};
}

void note_point(const OperatingPoint& op, std::vector<std::string>& warnings) {
  if (op.leak_regime_warning) {
    warnings.push_back("L=" + format_double(op.L_km) + " f_E=" + format_double(op.f_E) +
                       ": monitor click probability above 0.1, leak ratio is rough");
  }
}

nlohmann::ordered_json params_json(const SystemParams& p) {
  nlohmann::ordered_json j;
  j["W"] = p.W;
  j["R"] = p.R;
  j["L"] = p.L_km;
  j["fiber_loss"] = p.fiber_loss_db_per_km;
  j["kappa_S"] = p.kappa_S();
  j["kappa_S_override"] = p.kappa_S_override ? nlohmann::ordered_json(*p.kappa_S_override)
                                             : nlohmann::ordered_json(nullptr);
  j["n"] = p.n;
  j["N_A"] = p.N_A;
  j["N_ASE"] = kNAse;
  j["kappa_A"] = p.kappa_A;
  j["kappa_B"] = p.kappa_B;
  j["G_B"] = p.G_B;
  j["N_B"] = p.N_B;
  j["eta"] = p.eta;
  j["N_LO"] = p.N_LO;
  j["G_R"] = p.G_R;
  j["kappa_I"] = p.kappa_I;
  j["beta"] = p.beta;
  j["eta_I"] = p.eta_I;
  j["eta_A_mon"] = p.eta_A_mon;
  j["eta_B_mon"] = p.eta_B_mon;
  j["T_g"] = p.T_g;
  j["T_s"] = p.T_s;
  j["T_R"] = p.T_R;
  return j;
}

Table run_keyrate(const RunConfig& cfg, std::vector<std::string>& warnings) {
  Table t;
  t.columns = kKeyrateColumns;
  const auto grid = make_grid(cfg.grid.start, cfg.grid.stop, cfg.grid.points, cfg.grid.log_scale);
  const auto rows = cfg.mode == RunMode::keyrate_sweep
                        ? distance_sweep(cfg.params, cfg.f_E, grid, cfg.optimizer, cfg.threads)
                        : fe_sweep(cfg.params, grid, cfg.optimizer, cfg.threads);
  for (const auto& r : rows) {
    note_point(r.point, warnings);
    t.add_row(keyrate_cells(r.point));
  }
  return t;
}

Table run_point(const RunConfig& cfg, std::vector<std::string>& warnings) {
  Table t;
  t.columns = kKeyrateColumns;
  OperatingPoint op;
  if (cfg.point_N_S) {
    op = skr_lower_bound(cfg.params, cfg.f_E, *cfg.point_N_S, *cfg.point_R, cfg.optimizer.fold_leak);
    if (op.pr_e > cfg.optimizer.pr_e_max) op.status = PointStatus::infeasible;
  } else {
    op = optimize_operating_point(cfg.params, cfg.f_E, cfg.optimizer);
  }
  note_point(op, warnings);
  t.add_row(keyrate_cells(op));
  return t;
}

Table run_holevo(const RunConfig& cfg) {
  Table t;
  t.columns = {"N_S",          "M",           "optimum_per_mode", "passive_per_mode",
               "active_per_mode", "C_E_per_mode", "asymptotic_per_mode", "optimum_capped",
               "passive_capped", "active_capped"};
  const auto grid = make_grid(cfg.grid.start, cfg.grid.stop, cfg.grid.points, cfg.grid.log_scale);
  const double M = cfg.params.modes_per_bit();
  for (const auto& r : holevo_sweep(cfg.params, cfg.f_E, grid, cfg.threads)) {
    t.add_row({r.N_S, M, r.optimum, r.passive, r.active, r.capacity, r.asymptotic,
               r.optimum_capped, r.passive_capped, r.active_capped});
  }
  return t;
}

Table run_monitor(const RunConfig& cfg, RunOutput& out) {
  Table t;
  t.columns = {"source",  "duration_s", "S_I",          "S_A",  "S_B",          "C_IA",
               "C_IA_shifted", "C_IB",  "C_IB_shifted", "f_E_hat", "f_E_hat_se",
               "n_I",     "n_A",        "n_B",          "c_IA", "c_IA_shifted", "c_IB",
               "c_IB_shifted"};
  const Singles s = expected_singles(cfg.params, cfg.f_E);
  out.warnings.insert(out.warnings.end(), s.warnings.begin(), s.warnings.end());
  const MonitorRates e = expected_rates(cfg.params, cfg.f_E);
  const double T = cfg.monitor_duration;
  t.add_row({std::string("expected"), T, e.S_I, e.S_A, e.S_B, e.C_IA, e.C_IA_shifted, e.C_IB,
             e.C_IB_shifted, e.f_E_hat, 0.0, e.S_I * T, e.S_A * T, e.S_B * T, e.C_IA * T,
             e.C_IA_shifted * T, e.C_IB * T, e.C_IB_shifted * T});
  SimulationResult sim = simulate_events(cfg.params, cfg.f_E, T, cfg.seed, !cfg.events_out.empty());
  const MonitorRates& m = sim.rates;
  auto ll = [](std::uint64_t v) { return static_cast<long long>(v); };
  t.add_row({std::string("simulated"), T, m.S_I, m.S_A, m.S_B, m.C_IA, m.C_IA_shifted, m.C_IB,
             m.C_IB_shifted, m.f_E_hat, sim.f_E_hat_se, ll(sim.n_I), ll(sim.n_A), ll(sim.n_B),
             ll(sim.c_IA), ll(sim.c_IA_shifted), ll(sim.c_IB), ll(sim.c_IB_shifted)});
  out.events = std::move(sim.events);
  return t;
}

}  // namespace

RunOutput execute(const RunConfig& cfg) {
  RunOutput out;
  out.warnings = validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  switch (cfg.mode) {
    case RunMode::keyrate_sweep:
    case RunMode::fe_sweep: out.table = run_keyrate(cfg, out.warnings); break;
    case RunMode::point: out.table = run_point(cfg, out.warnings); break;
    case RunMode::holevo_sweep: out.table = run_holevo(cfg); break;
    case RunMode::monitor_sim: out.table = run_monitor(cfg, out); break;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  auto& m = out.meta;
  m["engine"] = "flqkd";
  m["version"] = kVersion;
  m["mode"] = to_string(cfg.mode);
  m["format"] = to_string(cfg.format);
  m["params"] = params_json(cfg.params);
  m["f_E"] = cfg.f_E;
  m["bound_method"] = to_string(BoundMethod::exact_symplectic);
  m["active_covariance"] = "derived";
  m["fold_leak"] = cfg.optimizer.fold_leak;
  m["thresholds"] = {{"pr_e_max", cfg.optimizer.pr_e_max},
                     {"R_max", cfg.optimizer.R_max},
                     {"active_vs_optimum_max_rel_diff", kActiveVsOptimumMaxRelDiff},
                     {"passive_over_optimum_min", kPassiveOverOptimumMin},
                     {"monotonic_slack", 1e-9}};
  m["seed"] = cfg.seed;
  m["threads"] = cfg.threads;
  m["rows"] = out.table.rows.size();
  m["warnings"] = out.warnings;
  m["wall_time_s"] = wall;
  m["config_text"] = to_config_text(cfg);
  return out;
}

void write_outputs(const RunConfig& cfg, const RunOutput& out) {
  auto emit = [&](std::ostream& os) {
    if (cfg.format == OutputFormat::csv) write_csv(os, out.table);
    else write_jsonl(os, out.table);
  };
  if (cfg.out.empty()) {
    emit(std::cout);
  } else {
    std::ofstream data(cfg.out, std::ios::binary);
    if (!data) throw ConfigError("out: cannot open '" + cfg.out + "'");
    emit(data);
    std::ofstream meta(cfg.out + ".meta.json", std::ios::binary);
    if (!meta) throw ConfigError("out: cannot open metadata sidecar");
    meta << out.meta.dump(2) << '\n';
  }
  if (!cfg.events_out.empty()) {
    std::ofstream ev(cfg.events_out, std::ios::binary);
    if (!ev) throw ConfigError("events: cannot open '" + cfg.events_out + "'");
    write_events(ev, out.events);
  }
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidParameter*>(&e) ||
      dynamic_cast<const InfeasibleSource*>(&e) || dynamic_cast<const RegimeViolation*>(&e) ||
      dynamic_cast<const InfeasibleAttack*>(&e) || dynamic_cast<const DomainError*>(&e)) {
    return 2;
  }
  if (dynamic_cast<const NumericInvariantError*>(&e) || dynamic_cast<const InvalidCovariance*>(&e) ||
      dynamic_cast<const DegenerateReceiver*>(&e) || dynamic_cast<const UndefinedBaseline*>(&e)) {
    return 3;
  }
  return 1;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Floodlight QKD key-rate and security-bound engine"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  struct Flags {
    std::string config;
    std::vector<std::string> sets;
    std::string out;
    std::string format;
    std::string events;
    std::uint64_t seed = 0;
    unsigned threads = 0;
  } flags;

  const std::pair<RunMode, const char*> modes[] = {
      {RunMode::keyrate_sweep, "Optimized key rate versus distance"},
      {RunMode::fe_sweep, "Optimized key rate versus injection fraction"},
      {RunMode::holevo_sweep, "Per-mode Holevo bounds versus brightness"},
      {RunMode::point, "Single operating point"},
      {RunMode::monitor_sim, "Monitor rates, analytic and simulated"}};
  for (const auto& [mode, help] : modes) {
    CLI::App* sub = app.add_subcommand(to_string(mode), help);
    sub->add_option("--config", flags.config, "Config file of key = value lines");
    sub->add_option("--set", flags.sets, "Override, key=value (repeatable)");
    sub->add_option("--out", flags.out, "Data file; metadata goes to <out>.meta.json");
    sub->add_option("--format", flags.format, "csv or jsonl");
    sub->add_option("--seed", flags.seed, "RNG seed");
    sub->add_option("--threads", flags.threads, "Worker threads (default $FLQKD_THREADS)");
    if (mode == RunMode::monitor_sim) sub->add_option("--events", flags.events, "Event dump path");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const RunMode mode = parse_mode(app.get_subcommands().front()->get_name());
    RunConfig cfg = default_config(mode);
    if (!flags.config.empty()) {
      std::ifstream in(flags.config);
      if (!in) throw ConfigError("config: cannot read '" + flags.config + "'");
      std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      apply_config_text(cfg, text);
      cfg.mode = mode;
    }
    for (const auto& s : flags.sets) apply_override(cfg, s);
    cfg.mode = mode;
    if (!flags.out.empty()) cfg.out = flags.out;
    if (!flags.format.empty()) apply_setting(cfg, "format", flags.format);
    if (!flags.events.empty()) cfg.events_out = flags.events;
    if (app.get_subcommands().front()->count("--seed")) cfg.seed = flags.seed;
    if (app.get_subcommands().front()->count("--threads")) {
      if (flags.threads == 0) throw ConfigError("threads: must be >= 1");
      cfg.threads = flags.threads;
    }

    const RunOutput out = execute(cfg);
    for (const auto& w : out.warnings) std::cerr << "warning: " << w << '\n';
    write_outputs(cfg, out);
    return 0;
  } catch (const InvalidParameter& e) {
    std::cerr << "error: invalid parameter " << e.field() << ": " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace flqkd

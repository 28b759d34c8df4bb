#pragma once

#include <string>
#include <vector>

#include "flqkd/adversary.hpp"
#include "flqkd/terminals.hpp"

namespace flqkd {

enum class PointStatus { ok, zero_rate, infeasible };

const char* to_string(PointStatus s);

struct OperatingPoint {
  double L_km = 0.0;
  double kappa_S = 0.0;
  double f_E = 0.0;
  double N_S = 0.0;
  double R = 0.0;
  double M = 0.0;
  double pr_e = 0.5;
  double I_AB = 0.0;               // bits/s
  double I_AB_per_bit = 0.0;
  double chi_ub = 0.0;             // bits/s, the value subtracted from beta I_AB
  double chi_exact_per_bit = 0.0;  // capped, before any monitor-leak folding
  double chi_asym_per_bit = 0.0;
  bool chi_capped = false;
  double skr_lb = 0.0;             // bits/s
  double ppb_tx = 0.0;
  double ppb_rx = 0.0;
  double eff_per_use = 0.0;
  double eff_per_mode = 0.0;
  double pirandola_bound = 0.0;
  double leak_ratio = 1.0;
  bool leak_regime_warning = false;
  PointStatus status = PointStatus::ok;
};

/// -log2(1 - kappa_S), bits per mode.
double pirandola_bound(double kappa_S);

/// Evaluates the key-rate lower bound at a fixed (N_S, R) under the optimum
/// attack. With fold_leak the per-bit chi is scaled by the monitor-leak ratio.
OperatingPoint skr_lower_bound(const SystemParams& p, double f_E, double N_S, double R,
                               bool fold_leak = false);

/// 1-2-5 series from 1 Mbps to 10 Gbps.
std::vector<double> default_rate_set();

struct OptimizerSettings {
  double ns_min = 1e-4;
  double ns_max = 0.5;
  int ns_points = 60;
  double rel_tol = 1e-4;  // golden-section stop, relative in N_S
  std::vector<double> rates = default_rate_set();
  double R_max = 1e10;
  double pr_e_max = 0.1;
  bool fold_leak = false;
};

/// Maximizes skr_lb over N_S (log grid then golden-section) for every allowed
/// R, subject to Pr(e) <= pr_e_max.
OperatingPoint optimize_operating_point(const SystemParams& p, double f_E,
                                        const OptimizerSettings& s = {});

struct SweepRow {
  double x;  // independent variable
  OperatingPoint point;
};

std::vector<SweepRow> distance_sweep(const SystemParams& p, double f_E,
                                     const std::vector<double>& L_grid,
                                     const OptimizerSettings& s = {}, unsigned threads = 1);

std::vector<SweepRow> fe_sweep(const SystemParams& p, const std::vector<double>& fE_grid,
                               const OptimizerSettings& s = {}, unsigned threads = 1);

/// Per-mode Holevo quantities at one brightness. The optimum/passive/active
/// entries are uncapped per-mode values; the *_capped flags record whether
/// M times the value exceeds one bit.
struct HolevoRow {
  double N_S;
  double optimum;
  double passive;
  double active;
  double capacity;  // entanglement-assisted
  double asymptotic;
  bool optimum_capped;
  bool passive_capped;
  bool active_capped;
};

HolevoRow holevo_row(const SystemParams& p, double f_E, double N_S);

std::vector<HolevoRow> holevo_sweep(const SystemParams& p, double f_E,
                                    const std::vector<double>& NS_grid, unsigned threads = 1);

/// `points` values from start to stop, linear or logarithmic, endpoints exact.
std::vector<double> make_grid(double start, double stop, int points, bool log_scale);

}  // namespace flqkd

#include "flqkd/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flqkd/errors.hpp"
#include "flqkd/parallel.hpp"
#include "flqkd/receiver.hpp"

namespace flqkd {

namespace {

OperatingPoint evaluate(const SystemParams& base, double f_E, double N_S, double R, bool fold_leak,
                        bool full) {
  SystemParams p = base;
  p.R = R;
  OperatingPoint op;
  op.L_km = p.L_km;
  op.kappa_S = p.kappa_S();
  op.f_E = f_E;
  op.N_S = N_S;
  op.R = R;
  op.M = p.modes_per_bit();

  const InfoRates info = info_rates(p, f_E, N_S);
  op.pr_e = info.pr_e;
  op.I_AB = info.I_AB;
  op.I_AB_per_bit = info.I_AB_per_bit;

  const HolevoBound chi = holevo_optimum_ub(p, f_E, N_S);
  op.chi_exact_per_bit = chi.per_bit;
  op.chi_capped = chi.capped;
  double chi_per_bit = chi.per_bit;
  if (fold_leak || full) {
    const LeakRatio leak = monitor_leak_ratio(p, f_E, N_S);
    op.leak_ratio = leak.ratio;
    op.leak_regime_warning = leak.regime_warning;
    if (fold_leak) chi_per_bit = std::min(1.0, chi_per_bit * leak.ratio);
  }
  if (full) op.chi_asym_per_bit = holevo_asymptotic_ub(p, f_E, N_S).per_bit;
  op.chi_ub = R * chi_per_bit;

  op.skr_lb = std::max(0.0, p.beta * op.I_AB - op.chi_ub);
  op.ppb_tx = N_S * op.M;
  op.ppb_rx = op.kappa_S * N_S * op.M;
  op.eff_per_use = op.skr_lb / R;
  op.eff_per_mode = op.skr_lb / p.W;
  op.pirandola_bound = pirandola_bound(op.kappa_S);
  op.status = op.skr_lb > 0.0 ? PointStatus::ok : PointStatus::zero_rate;
  return op;
}

struct Candidate {
  double N_S = 0.0;
  double skr = -1.0;
  bool found = false;
};

// Best feasible N_S for one rate.
Candidate optimize_at_rate(const SystemParams& p, double f_E, double R, const OptimizerSettings& s) {
  Candidate best;
  auto score = [&](double ns) {
    const OperatingPoint op = evaluate(p, f_E, ns, R, s.fold_leak, false);
    if (op.pr_e > s.pr_e_max) return -1.0 - op.pr_e;
    if (!best.found || op.skr_lb > best.skr) {
      best.found = true;
      best.skr = op.skr_lb;
      best.N_S = ns;
    }
    return op.skr_lb;
  };

  const std::vector<double> grid = make_grid(s.ns_min, s.ns_max, s.ns_points, true);
  std::size_t arg = 0;
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = score(grid[i]);
    if (v > top) {
      top = v;
      arg = i;
    }
  }
  if (!best.found) return best;

  double a = std::log(grid[arg == 0 ? 0 : arg - 1]);
  double b = std::log(grid[std::min(arg + 1, grid.size() - 1)]);
  constexpr double r = 0.6180339887498949;
  const double stop = std::log1p(s.rel_tol);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = score(std::exp(c)), fd = score(std::exp(d));
  while (b - a > stop) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = score(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = score(std::exp(d));
    }
  }
  return best;
}

}  // namespace

const char* to_string(PointStatus s) {
  switch (s) {
    case PointStatus::ok: return "ok";
    case PointStatus::zero_rate: return "zero_rate";
    case PointStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

double pirandola_bound(double kappa_S) {
  if (!(kappa_S >= 0.0 && kappa_S < 1.0)) throw DomainError("pirandola_bound: kappa_S outside [0, 1)");
  return -std::log2(1.0 - kappa_S);
}

OperatingPoint skr_lower_bound(const SystemParams& p, double f_E, double N_S, double R,
                               bool fold_leak) {
  if (!(R > 0.0 && R <= p.W)) throw InvalidParameter("R", "must satisfy 0 < R <= W");
  return evaluate(p, f_E, N_S, R, fold_leak, true);
}

std::vector<double> default_rate_set() {
  std::vector<double> out;
  for (double decade = 1e6; decade < 1e10; decade *= 10.0) {
    for (double m : {1.0, 2.0, 5.0}) out.push_back(m * decade);
  }
  out.push_back(1e10);
  return out;
}

OperatingPoint optimize_operating_point(const SystemParams& p, double f_E,
                                        const OptimizerSettings& s) {
  if (s.ns_points < 2) throw InvalidParameter("optimizer.ns_points", "must be >= 2");
  if (!(s.ns_min > 0.0 && s.ns_max > s.ns_min)) {
    throw InvalidParameter("optimizer.ns_min", "need 0 < ns_min < ns_max");
  }
  bool any = false;
  double best_R = 0.0;
  Candidate best;
  for (double R : s.rates) {
    if (!(R > 0.0) || R > s.R_max || R > p.W) continue;
    const Candidate c = optimize_at_rate(p, f_E, R, s);
    if (c.found && (!any || c.skr > best.skr)) {
      any = true;
      best = c;
      best_R = R;
    }
  }
  if (!any) {
    double R = 0.0;
    for (double r : s.rates) {
      if (r > 0.0 && r <= s.R_max && r <= p.W) R = std::max(R, r);
    }
    if (R == 0.0) throw InvalidParameter("optimizer.R_set", "no admissible rate");
    SystemParams q = p;
    q.R = R;
    OperatingPoint op;
    op.L_km = p.L_km;
    op.kappa_S = p.kappa_S();
    op.f_E = f_E;
    op.R = R;
    op.M = q.modes_per_bit();
    op.pirandola_bound = pirandola_bound(op.kappa_S);
    op.status = PointStatus::infeasible;
    return op;
  }
  return evaluate(p, f_E, best.N_S, best_R, s.fold_leak, true);
}

std::vector<SweepRow> distance_sweep(const SystemParams& p, double f_E,
                                     const std::vector<double>& L_grid, const OptimizerSettings& s,
                                     unsigned threads) {
  if (!std::is_sorted(L_grid.begin(), L_grid.end())) {
    throw InvalidParameter("grid", "distance grid must be ascending");
  }
  return parallel_map(L_grid.size(), threads, [&](std::size_t i) {
    SystemParams q = p;
    q.L_km = L_grid[i];
    q.kappa_S_override.reset();
    validate(q);
    return SweepRow{L_grid[i], optimize_operating_point(q, f_E, s)};
  });
}

std::vector<SweepRow> fe_sweep(const SystemParams& p, const std::vector<double>& fE_grid,
                               const OptimizerSettings& s, unsigned threads) {
  if (!std::is_sorted(fE_grid.begin(), fE_grid.end())) {
    throw InvalidParameter("grid", "f_E grid must be ascending");
  }
  return parallel_map(fE_grid.size(), threads, [&](std::size_t i) {
    return SweepRow{fE_grid[i], optimize_operating_point(p, fE_grid[i], s)};
  });
}

HolevoRow holevo_row(const SystemParams& p, double f_E, double N_S) {
  const HolevoBound opt = holevo_optimum_ub(p, f_E, N_S);
  const HolevoBound pas = passive_ub(p, N_S);
  const HolevoBound act = holevo_active_ub(p, f_E, N_S);
  HolevoRow row{};
  row.N_S = N_S;
  row.optimum = opt.per_mode_raw;
  row.passive = pas.per_mode_raw;
  row.active = act.per_mode_raw;
  row.capacity = entanglement_assisted_capacity(p, f_E, N_S);
  row.asymptotic = holevo_asymptotic_ub(p, f_E, N_S).per_mode_raw;
  row.optimum_capped = opt.capped;
  row.passive_capped = pas.capped;
  row.active_capped = act.capped;
  return row;
}

std::vector<HolevoRow> holevo_sweep(const SystemParams& p, double f_E,
                                    const std::vector<double>& NS_grid, unsigned threads) {
  if (!std::is_sorted(NS_grid.begin(), NS_grid.end())) {
    throw InvalidParameter("grid", "N_S grid must be ascending");
  }
  return parallel_map(NS_grid.size(), threads,
                      [&](std::size_t i) { return holevo_row(p, f_E, NS_grid[i]); });
}

std::vector<double> make_grid(double start, double stop, int points, bool log_scale) {
  if (points < 2) throw InvalidParameter("grid.points", "must be >= 2");
  if (log_scale && !(start > 0.0 && stop > 0.0)) {
    throw InvalidParameter("grid.start", "log grid needs positive endpoints");
  }
  std::vector<double> out(points);
  const double a = log_scale ? std::log10(start) : start;
  const double b = log_scale ? std::log10(stop) : stop;
  for (int i = 0; i < points; ++i) {
    const double t = a + (b - a) * i / (points - 1);
    out[i] = log_scale ? std::pow(10.0, t) : t;
  }
  out.front() = start;
  out.back() = stop;
  return out;
}

}  // namespace flqkd

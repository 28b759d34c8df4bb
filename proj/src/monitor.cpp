#include "flqkd/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include "flqkd/adversary.hpp"
#include "flqkd/errors.hpp"

namespace flqkd {

namespace {

void check_fE(double f_E) {
  if (!(f_E >= 0.0 && f_E <= 1.0)) throw InvalidParameter("f_E", "must lie in [0, 1]");
}

void check_regime(const SystemParams& p) {
  if (p.W * p.T_s < 100.0) throw RegimeViolation("W*T_s < 100: shifted gate sees true pairs");
  if (p.T_s < 10.0 * p.T_g) throw RegimeViolation("T_s < 10*T_g: aligned and shifted gates overlap");
}

double eta_of(const SystemParams& p, MonitorPair pair) {
  return pair == MonitorPair::IA ? p.eta_A_mon : p.eta_B_mon;
}

// Both inputs sorted; a window pair advances monotonically, so this is linear.
std::uint64_t count_coincidences(const std::vector<double>& idler, const std::vector<double>& other,
                                 double offset, double gate) {
  const double half = gate / 2.0;
  std::uint64_t c = 0;
  std::size_t lo = 0, hi = 0;
  for (double t : idler) {
    const double centre = t + offset;
    while (lo < other.size() && other[lo] < centre - half) ++lo;
    if (hi < lo) hi = lo;
    while (hi < other.size() && other[hi] <= centre + half) ++hi;
    c += hi - lo;
  }
  return c;
}

}  // namespace

Singles expected_singles(const SystemParams& p, double f_E) {
  check_fE(f_E);
  const SourceDerived src = derive_source(p);
  Singles s{};
  s.S_I = p.eta_I * src.N_SPDC * p.W;
  s.S_A = p.eta_A_mon * p.kappa_A * p.N_A * p.W;
  s.S_B = p.eta_B_mon * p.kappa_B * src.kappa_S * src.N_S * p.W;
  for (auto [name, rate] : {std::pair{"S_I", s.S_I}, {"S_A", s.S_A}, {"S_B", s.S_B}}) {
    if (rate * p.T_g > 0.1) {
      std::ostringstream msg;
      msg << name << "*T_g = " << rate * p.T_g << " > 0.1: multi-photon gates not negligible";
      s.warnings.push_back(msg.str());
    }
  }
  return s;
}

double pair_correlation_sq(const SystemParams& p, MonitorPair pair, double f_E) {
  check_fE(f_E);
  const SourceDerived src = derive_source(p);
  if (pair == MonitorPair::IA) {
    return std::norm(phase_sensitive_correlation(idler_tap_covariance(src, p), 0, 1));
  }
  // (S, I) marginal, S through Eve's optimum channel, then Bob's tap.
  const WignerCov si = source_covariance(src, p).marginal({0, 1});
  const AttackParams a = optimum_attack(f_E, src.kappa_S, src.N_S);
  Eigen::Matrix2d x;
  x << a.u0_mag + a.v0_mag, 0.0, 0.0, a.u0_mag - a.v0_mag;
  const Eigen::Matrix2d a_s = si.block(0, 0);
  const Eigen::Matrix2d moved = x * a_s * x.transpose();
  // Isotropic noise bringing the received brightness to kappa_S N_S.
  const double y = std::max(0.0, (src.kappa_S * src.N_S + 0.5 - moved.trace()) / 2.0);
  const WignerCov attacked = apply_channel(si, 0, x, y * Eigen::Matrix2d::Identity());
  const WignerCov tapped = apply_loss(attacked, 0, p.kappa_B);
  return std::norm(phase_sensitive_correlation(tapped, 1, 0));
}

double expected_coincidence_excess(const SystemParams& p, MonitorPair pair, double f_E) {
  check_regime(p);
  return p.eta_I * eta_of(p, pair) * p.W * pair_correlation_sq(p, pair, f_E);
}

MonitorRates expected_rates(const SystemParams& p, double f_E) {
  const Singles s = expected_singles(p, f_E);
  MonitorRates r;
  r.S_I = s.S_I;
  r.S_A = s.S_A;
  r.S_B = s.S_B;
  r.C_IA_shifted = s.S_I * s.S_A * p.T_g;
  r.C_IB_shifted = s.S_I * s.S_B * p.T_g;
  r.C_IA = r.C_IA_shifted + expected_coincidence_excess(p, MonitorPair::IA, f_E);
  r.C_IB = r.C_IB_shifted + expected_coincidence_excess(p, MonitorPair::IB, f_E);
  r.f_E_hat = estimate_fE(r);
  return r;
}

double estimate_fE(const MonitorRates& r) {
  const double ia = r.C_IA - r.C_IA_shifted;
  if (!(ia > 0.0)) throw UndefinedBaseline("no IA coincidence excess: monitoring impossible");
  if (!(r.S_A > 0.0) || !(r.S_B > 0.0)) throw UndefinedBaseline("tap singles rate is zero");
  return 1.0 - ((r.C_IB - r.C_IB_shifted) / r.S_B) / (ia / r.S_A);
}

SimulationResult simulate_events(const SystemParams& p, double f_E, double duration,
                                 std::uint64_t seed, bool keep_events) {
  check_regime(p);
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw InvalidParameter("duration", "must be > 0");
  }
  const SourceDerived src = derive_source(p);
  const double r_I = src.N_SPDC * p.W;
  const double r_A = p.kappa_A * p.N_A * p.W;
  const double r_B = p.kappa_B * src.kappa_S * src.N_S * p.W;
  const double pair_A = p.W * pair_correlation_sq(p, MonitorPair::IA, f_E);
  const double pair_B = p.W * pair_correlation_sq(p, MonitorPair::IB, f_E);
  const double expected_photons = (r_I + r_A + r_B) * duration;
  if (expected_photons > 5e8) throw InvalidParameter("duration", "event budget exceeded");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double t0 = -duration / 2.0, t1 = duration / 2.0;
  // Exponential gaps give each stream already in time order.
  auto arrivals = [&](double rate, auto&& on_photon) {
    if (!(rate > 0.0)) return;
    std::exponential_distribution<double> gap(rate);
    for (double t = t0 + gap(rng); t < t1; t += gap(rng)) on_photon(t);
  };

  std::vector<double> tI, tA, tB;
  // Idler photons, each with at most one partner in a tap (multi-pair terms neglected).
  const double pA = r_I > 0.0 ? pair_A / r_I : 0.0;
  const double pB = r_I > 0.0 ? pair_B / r_I : 0.0;
  arrivals(r_I, [&](double t) {
    const double u = unit(rng);
    if (unit(rng) < p.eta_I) tI.push_back(t);
    if (u < pA) {
      if (unit(rng) < p.eta_A_mon) tA.push_back(t);
    } else if (u < pA + pB) {
      if (unit(rng) < p.eta_B_mon) tB.push_back(t);
    }
  });
  // Unpaired tap photons; thinning a Poisson stream is the same as scaling its rate.
  const auto add_unpaired = [&](std::vector<double>& out, double rate) {
    const std::size_t paired = out.size();
    arrivals(rate, [&](double t) { out.push_back(t); });
    std::inplace_merge(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(paired), out.end());
  };
  add_unpaired(tA, p.eta_A_mon * std::max(0.0, r_A - pair_A));
  add_unpaired(tB, p.eta_B_mon * std::max(0.0, r_B - pair_B));

  SimulationResult out;
  out.duration = duration;
  out.seed = seed;
  out.n_I = tI.size();
  out.n_A = tA.size();
  out.n_B = tB.size();
  out.c_IA = count_coincidences(tI, tA, 0.0, p.T_g);
  out.c_IA_shifted = count_coincidences(tI, tA, p.T_s, p.T_g);
  out.c_IB = count_coincidences(tI, tB, 0.0, p.T_g);
  out.c_IB_shifted = count_coincidences(tI, tB, p.T_s, p.T_g);

  MonitorRates& r = out.rates;
  r.S_I = out.n_I / duration;
  r.S_A = out.n_A / duration;
  r.S_B = out.n_B / duration;
  r.C_IA = out.c_IA / duration;
  r.C_IA_shifted = out.c_IA_shifted / duration;
  r.C_IB = out.c_IB / duration;
  r.C_IB_shifted = out.c_IB_shifted / duration;
  r.f_E_hat = estimate_fE(r);

  // f_hat = 1 - X/Y with Poisson counts; first-order error propagation.
  const double nb = static_cast<double>(out.n_B), na = static_cast<double>(out.n_A);
  const double x = (static_cast<double>(out.c_IB) - out.c_IB_shifted) / nb;
  const double y = (static_cast<double>(out.c_IA) - out.c_IA_shifted) / na;
  const double var_x = (static_cast<double>(out.c_IB) + out.c_IB_shifted) / (nb * nb) + x * x / nb;
  const double var_y = (static_cast<double>(out.c_IA) + out.c_IA_shifted) / (na * na) + y * y / na;
  out.f_E_hat_se = std::sqrt(var_x / (y * y) + x * x * var_y / (y * y * y * y));

  if (keep_events) {
    out.events.reserve(tI.size() + tA.size() + tB.size());
    for (double t : tI) out.events.push_back({'I', t});
    for (double t : tA) out.events.push_back({'A', t});
    for (double t : tB) out.events.push_back({'B', t});
    std::stable_sort(out.events.begin(), out.events.end(),
                     [](const DetectionEvent& a, const DetectionEvent& b) { return a.time < b.time; });
  }
  return out;
}

void write_events(std::ostream& os, const std::vector<DetectionEvent>& events) {
  for (const auto& e : events) {
    os << e.detector << ' ' << static_cast<long long>(std::llround(e.time * 1e12)) << '\n';
  }
}

}  // namespace flqkd

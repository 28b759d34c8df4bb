#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "flqkd/terminals.hpp"

namespace flqkd {

/// Singles and coincidence rates (counts/s) plus the intrusion estimate.
struct MonitorRates {
  double S_I = 0.0;
  double S_A = 0.0;
  double S_B = 0.0;
  double C_IA = 0.0;
  double C_IA_shifted = 0.0;
  double C_IB = 0.0;
  double C_IB_shifted = 0.0;
  double f_E_hat = 0.0;
};

enum class MonitorPair { IA, IB };

struct Singles {
  double S_I;
  double S_A;
  double S_B;
  std::vector<std::string> warnings;  // S_K T_g > 0.1
};

/// Brightness comes from p.N_A; N_S = (1 - kappa_A) N_A.
Singles expected_singles(const SystemParams& p, double f_E);

/// |<a_I a_K>|^2 read off the (idler, tap) covariance. The IB pair passes
/// Alice's signal through the optimum attack channel and Bob's tap.
double pair_correlation_sq(const SystemParams& p, MonitorPair pair, double f_E);

/// C_IK - C~_IK = eta_I eta_K W |<a_I a_K>|^2. Throws RegimeViolation when
/// the shifted gate can still catch true pairs (W T_s < 100 or T_s < 10 T_g).
double expected_coincidence_excess(const SystemParams& p, MonitorPair pair, double f_E);

/// Full analytic rate set: accidentals S_I S_K T_g, aligned = accidental + excess.
MonitorRates expected_rates(const SystemParams& p, double f_E);

/// 1 - [(C_IB - C~_IB)/S_B] / [(C_IA - C~_IA)/S_A].
double estimate_fE(const MonitorRates& r);

struct DetectionEvent {
  char detector;  // 'I', 'A' or 'B'
  double time;    // seconds in [-duration/2, duration/2]
};

struct SimulationResult {
  MonitorRates rates;  // empirical
  double duration = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t n_I = 0, n_A = 0, n_B = 0;
  std::uint64_t c_IA = 0, c_IA_shifted = 0, c_IB = 0, c_IB_shifted = 0;
  double f_E_hat_se = 0.0;  // delta-method standard error from counting statistics
  std::vector<DetectionEvent> events;  // filled only when requested, sorted by time
};

/// Event-level Poisson simulation of the three monitor detectors over
/// `duration` seconds. Deterministic for a given (params, f_E, duration, seed).
SimulationResult simulate_events(const SystemParams& p, double f_E, double duration,
                                 std::uint64_t seed, bool keep_events = false);

/// Two columns per line: detector id and integer timestamp in picoseconds.
void write_events(std::ostream& os, const std::vector<DetectionEvent>& events);

}  // namespace flqkd

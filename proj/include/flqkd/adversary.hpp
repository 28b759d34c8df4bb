#pragma once

#include <complex>

#include "flqkd/gaussian.hpp"
#include "flqkd/terminals.hpp"

namespace flqkd {

/// Eve's frequency-domain collective Gaussian attack, parameterized by
/// the injection fraction and two angles. Phases of u0, v0 and v^dag u are
/// fixed so the stored magnitudes are the actual (real, nonnegative) values.
struct AttackParams {
  double f_E = 0.0;
  double gamma_v = 0.0;
  double delta = 0.0;
  double u0_mag = 0.0;
  double v0_mag = 0.0;
  double u_norm_sq = 0.0;
  double v_norm_sq = 0.0;
  double vu_inner_mag = 0.0;

  /// w = v^dag u + (2 N_S + 1) v0^* u0.
  std::complex<double> w(double N_S) const;
};

AttackParams attack_from_angles(double f_E, double gamma_v, double delta, double kappa_S,
                                double N_S);

/// gamma_v = delta = pi/2: v0 = 0, v^dag u = 0.
AttackParams optimum_attack(double f_E, double kappa_S, double N_S);

/// Residuals of the commutator, photon-flux and injection-fraction constraints.
struct AttackResiduals {
  double commutator;
  double flux;
  double injection;
};
AttackResiduals attack_residuals(const AttackParams& a, double kappa_S, double N_S);

/// Brightness of the SPDC source realizing the optimum attack.
double eve_spdc_brightness(double f_E, double kappa_S, double N_S);

/// Conditional covariances for Bob's bit b = 0: (idler, received signal),
/// (idler, amplifier complement) and Bob's output (bit independent).
struct ConditionalCovariances {
  WignerCov idler_signal;
  WignerCov idler_complement;
  WignerCov bob_output;
};
ConditionalCovariances conditional_covariances(const AttackParams& a, double kappa_S, double N_S,
                                               double G_B);

enum class BoundMethod { exact_symplectic, asymptotic_NB, asymptotic_kappaS };

const char* to_string(BoundMethod m);

struct HolevoBound {
  double per_bit = 0.0;       // min(M * per_mode_raw, 1)
  double per_mode = 0.0;      // per_bit / M
  double per_mode_raw = 0.0;  // before the one-bit cap
  bool capped = false;
  BoundMethod method = BoundMethod::exact_symplectic;
  bool out_of_regime = false;  // asymptotic form used where kappa_S > 0.3
};

HolevoBound make_bound(double per_mode_raw, double M, BoundMethod method);

/// S(IS') + S(B) - S(IB'), exact symplectic evaluation for any feasible attack.
double holevo_bracket_exact(const AttackParams& a, double kappa_S, double N_S, double G_B);

HolevoBound holevo_exact_ub(const SystemParams& p, const AttackParams& a, double N_S);
HolevoBound holevo_optimum_ub(const SystemParams& p, double f_E, double N_S);

/// Leading order in N_B >> 1: g(xi_B) - g(xi_IB'+) dropped.
HolevoBound holevo_large_gain_ub(const SystemParams& p, double f_E, double N_S);

/// Closed form for kappa_S << 1 at the optimum attack.
HolevoBound holevo_asymptotic_ub(const SystemParams& p, double f_E, double N_S);

/// Optimum attack with f_E = 0.
HolevoBound passive_ub(const SystemParams& p, double N_S);

struct OptimumAngles {
  double gamma_v;
  double delta;
  double per_mode;
  int evaluations;
};

/// Grid search over the feasible (gamma_v, delta) rectangle, then one
/// golden-section pass per axis.
OptimumAngles verify_optimum_angles(const SystemParams& p, double f_E, double N_S,
                                    int grid_points = 64);

/// Which covariance to use for the active-attack bound. `derived` follows
/// from the SPDC beam-splitter realization (Bob's output brightness
/// G_B kappa_S N_S + N_B, Eve-to-Bob transmissivity 1 - (1 - f_E) kappa_S).
/// `uncorrected` keeps G_B N_S + N_B and 1 - f_E kappa_S for comparison.
enum class ActiveCovarianceForm { derived, uncorrected };

/// Covariance of (Eve's retained idler, Bob's output) given bit b, or the
/// unconditional mixture when bit < 0.
WignerCov active_covariance(const SystemParams& p, double f_E, double N_S, int bit,
                            ActiveCovarianceForm form = ActiveCovarianceForm::derived);

HolevoBound holevo_active_ub(const SystemParams& p, double f_E, double N_S,
                             ActiveCovarianceForm form = ActiveCovarianceForm::derived);

/// Entanglement-assisted capacity of the injection channel, bits per mode.
double entanglement_assisted_capacity(const SystemParams& p, double f_E, double N_S);

struct LeakRatio {
  double ratio;                     // chi_bar / chi
  double p1;                        // probability of a monitor click per bit
  double chi0_over_chi;
  double conditional_brightness;    // no-click brightness entering the modulator
  double unconditional_brightness;
  bool regime_warning;              // p1 > 0.1
};

/// Bound on the extra information Eve gains from Bob's monitor click times,
/// with chi1 - chi0 bounded by one bit.
LeakRatio monitor_leak_ratio(const SystemParams& p, double f_E, double N_S);

}  // namespace flqkd

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flqkd/gaussian.hpp"

namespace flqkd {

/// ASE reference-arm brightness per mode feeding the combiner (fixed, << N_LO).
inline constexpr double kNAse = 1.0;

/// Every protocol and hardware parameter. Defaults are the 50 km, f_E = 0.01
/// reference configuration: W = 2 THz, n = 99, G_B = N_B = 1e4,
/// kappa_A = kappa_B = 0.01, eta = 0.9, N_LO = 1e4, beta = 0.94.
struct SystemParams {
  double W = 2e12;                 // source bandwidth, Hz
  double R = 1e10;                 // modulation rate, bit/s
  double L_km = 50.0;              // one-way path length
  double fiber_loss_db_per_km = 0.2;
  std::optional<double> kappa_S_override;  // bypasses L/fiber loss when set
  double n = 99.0;                 // ASE-to-SPDC ratio
  double N_A = 0.1;                // combined source brightness
  double kappa_A = 0.01;
  double kappa_B = 0.01;
  double G_B = 1e4;
  double N_B = 1e4;
  double eta = 0.9;                // homodyne efficiency
  double N_LO = 1e4;
  double G_R = 1.0;                // reference amplifier gain
  double kappa_I = 1.0;            // reference storage transmissivity
  double beta = 0.94;              // reconciliation efficiency
  double eta_I = 0.9;              // monitor detector efficiencies
  double eta_A_mon = 0.9;
  double eta_B_mon = 0.9;
  double T_g = 100e-12;            // coincidence gate, s
  double T_s = 10e-9;              // accidental-gate shift, s
  double T_R = 1.0;                // session duration, s

  double kappa_S() const;
  double modes_per_bit() const { return W / R; }

  /// Same parameters with N_A chosen so that the transmitted brightness is N_S.
  SystemParams with_signal_brightness(double N_S) const;
};

/// Throws InvalidParameter on hard violations; returns soft warnings
/// (monitor timing margins).
std::vector<std::string> validate(const SystemParams& p);

struct SourceDerived {
  double kappa_C;          // combiner transmissivity for the SPDC arm
  double N_SPDC;
  double N_S;              // brightness sent to Bob
  double M;                // modes per bit
  double kappa_S;
  double ref_correlation;  // |<a_S^dag a_R>|^2 / (<a_S^dag a_S><a_R^dag a_R>)
};

SourceDerived derive_source(const SystemParams& p);

/// 6x6 covariance of Alice's (transmitted signal S, SPDC idler I, ASE reference R).
WignerCov source_covariance(const SourceDerived& src, const SystemParams& p);

/// 4x4 covariance of (SPDC idler, Alice's monitor tap) used for IA coincidences.
WignerCov idler_tap_covariance(const SourceDerived& src, const SystemParams& p);

struct StoredReference {
  double brightness;
  double correlation;
};

/// Reference after amplify-then-store with gain G_R and storage transmissivity kappa_I.
StoredReference reference_storage_fidelity(const SourceDerived& src, double G_R, double kappa_I,
                                           double N_LO);

/// G_B (1 - kappa_B) * arriving + N_B.
double bob_amplifier_output_brightness(const SystemParams& p, double arriving_brightness);

}  // namespace flqkd

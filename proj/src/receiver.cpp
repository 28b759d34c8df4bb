#include "flqkd/receiver.hpp"

#include <algorithm>
#include <cmath>

#include "flqkd/errors.hpp"

namespace flqkd {

HomodyneMoments homodyne_moments(const SystemParams& p, double f_E, double N_S) {
  if (!(f_E >= 0.0 && f_E <= 1.0)) throw InvalidParameter("f_E", "must lie in [0, 1]");
  if (!(N_S >= 0.0)) throw InvalidParameter("N_S", "must be >= 0");
  const SourceDerived src = derive_source(p.with_signal_brightness(N_S));
  const double M = p.modes_per_bit();
  const double kS = src.kappa_S;

  const double n_ase = (1.0 - p.kappa_B) * (1.0 - f_E) * (1.0 - p.kappa_A) * (1.0 - src.kappa_C) * kNAse;
  const double n_ra = kS * p.G_B * (1.0 - p.kappa_B) * kS * N_S + kS * p.N_B;
  const double n1 = n_ra + p.N_LO;

  HomodyneMoments m;
  m.mu0 = 2.0 * M * p.eta * kS * std::sqrt(p.G_B * n_ase * p.N_LO);
  m.mu1 = -m.mu0;
  const double var =
      M * (p.eta * n1 + 2.0 * p.eta * p.eta * (n_ra * p.N_LO + kS * kS * p.G_B * n_ase * p.N_LO));
  m.sigma0 = std::sqrt(var);
  m.sigma1 = m.sigma0;
  m.degenerate = !(m.sigma0 + m.sigma1 > 0.0);
  m.snr_argument = m.degenerate ? 0.0 : (m.mu0 - m.mu1) / (m.sigma0 + m.sigma1);
  return m;
}

double asymptotic_error_probability(const SystemParams& p, double f_E, double N_S) {
  const double arg =
      2.0 * p.modes_per_bit() * p.kappa_S() * p.G_B * (1.0 - f_E) * N_S / p.N_B;
  return q_function(std::sqrt(std::max(0.0, arg)));
}

double error_probability(const HomodyneMoments& m) {
  const double den = m.sigma0 + m.sigma1;
  if (!(den > 0.0)) throw DegenerateReceiver("sigma0 + sigma1 == 0");
  return q_function((m.mu0 - m.mu1) / den);
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binary_entropy: p outside [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double shannon_rate(double pr_e, double R) {
  if (!(pr_e >= 0.0 && pr_e <= 0.5)) throw DomainError("shannon_rate: Pr(e) outside [0, 0.5]");
  return R * (1.0 - binary_entropy(pr_e));
}

InfoRates info_rates(const SystemParams& p, double f_E, double N_S) {
  const HomodyneMoments m = homodyne_moments(p, f_E, N_S);
  InfoRates r{};
  r.pr_e = m.degenerate ? 0.5 : error_probability(m);
  r.I_AB_per_bit = 1.0 - binary_entropy(r.pr_e);
  r.I_AB = p.R * r.I_AB_per_bit;
  return r;
}

}  // namespace flqkd

#pragma once

#include "flqkd/terminals.hpp"

namespace flqkd {

/// Conditional mean and standard deviation of Alice's homodyne photon-count
/// difference, summed over the M modes of one bit.
struct HomodyneMoments {
  double mu0 = 0.0;
  double mu1 = 0.0;
  double sigma0 = 0.0;
  double sigma1 = 0.0;
  double snr_argument = 0.0;  // (mu0 - mu1) / (sigma0 + sigma1)
  bool degenerate = false;    // sigma0 + sigma1 == 0
};

/// Moments with perfect reference storage. N_A is re-derived from N_S so that
/// kappa_C (and hence the ASE share of the signal) tracks the brightness.
HomodyneMoments homodyne_moments(const SystemParams& p, double f_E, double N_S);

/// Q(sqrt(2 M kappa_S G_B (1 - f_E) N_S / N_B)), the large-N_B, large-N_LO limit.
double asymptotic_error_probability(const SystemParams& p, double f_E, double N_S);

/// Q((mu0 - mu1) / (sigma0 + sigma1)). Throws DegenerateReceiver when the
/// denominator vanishes.
double error_probability(const HomodyneMoments& m);

/// h2(p) with 0 log 0 = 0.
double binary_entropy(double p);

/// R (1 - h2(pr_e)). Throws DomainError outside [0, 0.5].
double shannon_rate(double pr_e, double R);

struct InfoRates {
  double pr_e;
  double I_AB;          // bits/s
  double I_AB_per_bit;  // 1 - h2(pr_e)
};

/// Pr(e) and I_AB at rate p.R. A dead detector (eta = 0) gives Pr(e) = 0.5.
InfoRates info_rates(const SystemParams& p, double f_E, double N_S);

}  // namespace flqkd

#include <doctest.h>

#include <cmath>

#include "flqkd/errors.hpp"
#include "flqkd/receiver.hpp"

using namespace flqkd;

namespace {
// 50-digit mpmath evaluation of the moment formulas.
constexpr double kPrE50km = 0.09921030847379778;
constexpr double kSnr50km = 1.2860643145968587;
}  // namespace

TEST_CASE("moments at the 50 km operating point") {
  const SystemParams p;
  const HomodyneMoments m = homodyne_moments(p, 0.01, 0.043);
  CHECK(m.mu1 == -m.mu0);
  CHECK(m.sigma0 == m.sigma1);
  CHECK_FALSE(m.degenerate);
  CHECK(m.snr_argument == doctest::Approx(kSnr50km).epsilon(1e-12));
  CHECK(error_probability(m) == doctest::Approx(kPrE50km).epsilon(1e-12));
  const double asym = asymptotic_error_probability(p, 0.01, 0.043);
  CHECK(std::abs(asym - error_probability(m)) / error_probability(m) < 0.10);
}

TEST_CASE("dead detector is degenerate") {
  SystemParams p;
  p.eta = 0.0;
  const HomodyneMoments m = homodyne_moments(p, 0.01, 0.043);
  CHECK(m.mu0 == 0.0);
  CHECK(m.sigma0 == 0.0);
  CHECK(m.degenerate);
  CHECK_THROWS_AS(error_probability(m), DegenerateReceiver);
  CHECK(info_rates(p, 0.01, 0.043).pr_e == 0.5);
}

TEST_CASE("no signal gives a coin flip") {
  const SystemParams p;
  const HomodyneMoments m = homodyne_moments(p, 0.01, 0.0);
  CHECK(m.mu0 == 0.0);
  CHECK(error_probability(m) == 0.5);
}

TEST_CASE("error probability from moments") {
  HomodyneMoments m;
  m.mu0 = m.mu1 = 3.0;
  m.sigma0 = m.sigma1 = 1.0;
  CHECK(error_probability(m) == 0.5);
  m.mu0 = 2.0;
  m.mu1 = -2.0;
  CHECK(error_probability(m) == doctest::Approx(0.02275).epsilon(1e-3));
  for (double ns : {0.001, 0.01, 0.1, 0.5}) {
    const HomodyneMoments h = homodyne_moments(SystemParams{}, 0.01, ns);
    CHECK(error_probability(h) <= std::exp(-h.snr_argument * h.snr_argument / 2.0) / 2.0);
  }
}

TEST_CASE("binary entropy and Shannon rate") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(shannon_rate(0.0, 1e9) == 1e9);
  CHECK(shannon_rate(0.5, 1e9) == 0.0);
  CHECK(shannon_rate(0.1, 1e9) == doctest::Approx(5.310e8).epsilon(1e-4));
  CHECK(shannon_rate(0.1, 1e9) == doctest::Approx(1e9 * (1 + 0.1 * std::log2(0.1) + 0.9 * std::log2(0.9))));
  CHECK_THROWS_AS(shannon_rate(0.6, 1e9), DomainError);
  CHECK_THROWS_AS(shannon_rate(-0.1, 1e9), DomainError);
}

TEST_CASE("error probability falls with brightness and with mode count") {
  double prev = 1.0;
  for (int i = 0; i < 10; ++i) {
    const double ns = 0.005 * std::pow(2.0, i * 0.7);
    const double pe = info_rates(SystemParams{}, 0.01, ns).pr_e;
    CHECK(pe < prev);
    prev = pe;
  }
  prev = 1.0;
  for (double R : {1e10, 5e9, 2e9, 1e9, 5e8, 2e8, 1e8, 5e7, 2e7, 1e7}) {
    SystemParams p;
    p.R = R;
    const double pe = info_rates(p, 0.01, 0.01).pr_e;
    CHECK(pe < prev);
    prev = pe;
  }
}

TEST_CASE("error probability rises with injection") {
  double prev = 0.0;
  for (double f : {0.0, 0.01, 0.05, 0.1, 0.3, 0.6, 0.9}) {
    const double pe = info_rates(SystemParams{}, f, 0.043).pr_e;
    CHECK(pe > prev);
    prev = pe;
  }
  CHECK(info_rates(SystemParams{}, 1.0, 0.043).pr_e == 0.5);
}

TEST_CASE("insensitive to homodyne efficiency") {
  SystemParams a, b;
  b.eta = 1.0;
  const double pa = info_rates(a, 0.01, 0.043).pr_e;
  const double pb = info_rates(b, 0.01, 0.043).pr_e;
  CHECK(std::abs(pa - pb) / pa < 0.02);
}

// Signal self-noise G_B kappa_S N_S / N_B is what the asymptotic form drops;
// it stays a few percent of the amplifier noise only for kappa_S <= 0.1.
TEST_CASE("exact moments approach the asymptotic error expression") {
  for (double L : {50.0, 75.0, 100.0, 150.0}) {
    for (double ns : {0.01, 0.02, 0.043, 0.07, 0.1}) {
      SystemParams p;
      p.L_km = L;
      const double exact = info_rates(p, 0.01, ns).pr_e;
      const double asym = asymptotic_error_probability(p, 0.01, ns);
      CHECK(std::abs(exact - asym) / exact < 0.10);
    }
  }
}

TEST_CASE("info rates at the 50 km point") {
  const InfoRates r = info_rates(SystemParams{}, 0.01, 0.043);
  CHECK(r.I_AB_per_bit == doctest::Approx(0.5335126793037702).epsilon(1e-10));
  CHECK(r.I_AB == doctest::Approx(1e10 * r.I_AB_per_bit));
}

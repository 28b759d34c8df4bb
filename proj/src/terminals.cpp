#include "flqkd/terminals.hpp"

#include <cmath>
#include <sstream>

#include "flqkd/errors.hpp"

namespace flqkd {

namespace {

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw InvalidParameter(field, what);
}

bool is_fraction(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

double SystemParams::kappa_S() const {
  if (kappa_S_override) return *kappa_S_override;
  return std::pow(10.0, -fiber_loss_db_per_km * L_km / 10.0);
}

SystemParams SystemParams::with_signal_brightness(double N_S) const {
  SystemParams out = *this;
  out.N_A = kappa_A < 1.0 ? N_S / (1.0 - kappa_A) : 0.0;
  return out;
}

std::vector<std::string> validate(const SystemParams& p) {
  require(std::isfinite(p.W) && p.W > 0.0, "W", "must be > 0");
  require(std::isfinite(p.R) && p.R > 0.0 && p.R <= p.W, "R", "must satisfy 0 < R <= W");
  require(std::isfinite(p.L_km) && p.L_km >= 0.0, "L", "must be >= 0");
  require(p.fiber_loss_db_per_km >= 0.0, "fiber_loss", "must be >= 0");
  if (p.kappa_S_override) {
    require(*p.kappa_S_override > 0.0 && *p.kappa_S_override < 1.0, "kappa_S",
            "must lie in (0, 1)");
  }
  require(p.kappa_S() < 1.0, "L", "lossless channel lies outside the attack model");
  require(p.n >= 1.0, "n", "ASE-to-SPDC ratio must be >= 1");
  require(p.N_A >= 0.0 && p.N_A < 1.0, "N_A", "must satisfy 0 <= N_A < 1");
  require(is_fraction(p.kappa_A), "kappa_A", "must lie in [0, 1]");
  require(is_fraction(p.kappa_B), "kappa_B", "must lie in [0, 1]");
  require(p.G_B >= 1.0, "G_B", "must be >= 1");
  require(p.N_B >= p.G_B - 1.0, "N_B", "must satisfy N_B >= G_B - 1");
  require(is_fraction(p.eta), "eta", "must lie in [0, 1]");
  require(p.N_LO >= 0.0, "N_LO", "must be >= 0");
  require(p.G_R >= 1.0, "G_R", "must be >= 1");
  require(p.kappa_I > 0.0 && p.kappa_I <= 1.0, "kappa_I", "must lie in (0, 1]");
  require(is_fraction(p.beta), "beta", "must lie in [0, 1]");
  require(is_fraction(p.eta_I), "eta_I", "must lie in [0, 1]");
  require(is_fraction(p.eta_A_mon), "eta_A_mon", "must lie in [0, 1]");
  require(is_fraction(p.eta_B_mon), "eta_B_mon", "must lie in [0, 1]");
  require(p.T_g > 0.0, "T_g", "must be > 0");
  require(p.T_s > 0.0, "T_s", "must be > 0");
  require(p.T_R > 0.0, "T_R", "must be > 0");

  std::vector<std::string> warnings;
  if (p.W * p.T_s < 100.0) warnings.emplace_back("W*T_s < 100: shifted gate may catch true pairs");
  if (p.T_s < 10.0 * p.T_g) warnings.emplace_back("T_s < 10*T_g: gates overlap");
  if (p.T_R < 1e4 * p.T_s) warnings.emplace_back("T_R < 1e4*T_s: session too short for shift");
  return warnings;
}

SourceDerived derive_source(const SystemParams& p) {
  if (!(p.N_A >= 0.0)) throw InfeasibleSource("N_A must be >= 0");
  if (p.N_A >= 1.0) throw InfeasibleSource("N_A >= 1 leaves no combiner headroom");
  if (p.n < 1.0) throw InfeasibleSource("ASE-to-SPDC ratio n must be >= 1");

  SourceDerived s{};
  s.kappa_C = 1.0 - p.n * p.N_A / (p.n + 1.0);
  s.N_SPDC = p.N_A / (p.n * (1.0 - p.N_A) + 1.0);
  s.N_S = (1.0 - p.kappa_A) * p.N_A;
  s.M = p.modes_per_bit();
  s.kappa_S = p.kappa_S();
  const double ase = (1.0 - s.kappa_C) * kNAse;
  const double total = s.kappa_C * s.N_SPDC + ase;
  s.ref_correlation = total > 0.0 ? ase / total : p.n / (p.n + 1.0);
  return s;
}

WignerCov source_covariance(const SourceDerived& src, const SystemParams& p) {
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d z = (Eigen::Matrix2d() << 1, 0, 0, -1).finished();
  const double c_spdc = 2.0 * std::sqrt(src.N_SPDC * (src.N_SPDC + 1.0));
  const double c_ase = 2.0 * std::sqrt(kNAse * p.N_LO);

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
  m.block<2, 2>(0, 0) = (2.0 * src.N_S + 1.0) * id;
  m.block<2, 2>(2, 2) = (2.0 * src.N_SPDC + 1.0) * id;
  m.block<2, 2>(4, 4) = (2.0 * p.N_LO + 1.0) * id;
  const Eigen::Matrix2d c_si = std::sqrt((1.0 - p.kappa_A) * src.kappa_C) * c_spdc * z;
  const Eigen::Matrix2d c_sr = std::sqrt((1.0 - p.kappa_A) * (1.0 - src.kappa_C)) * c_ase * id;
  m.block<2, 2>(0, 2) = c_si;
  m.block<2, 2>(2, 0) = c_si;
  m.block<2, 2>(0, 4) = c_sr;
  m.block<2, 2>(4, 0) = c_sr;
  return WignerCov(m / 4.0);
}

WignerCov idler_tap_covariance(const SourceDerived& src, const SystemParams& p) {
  // Combiner output A (brightness N_A) with the SPDC idler, then the kappa_A tap.
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d z = (Eigen::Matrix2d() << 1, 0, 0, -1).finished();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m.block<2, 2>(0, 0) = (2.0 * src.N_SPDC + 1.0) * id;
  m.block<2, 2>(2, 2) = (2.0 * p.N_A + 1.0) * id;
  const Eigen::Matrix2d c =
      std::sqrt(src.kappa_C) * 2.0 * std::sqrt(src.N_SPDC * (src.N_SPDC + 1.0)) * z;
  m.block<2, 2>(0, 2) = c;
  m.block<2, 2>(2, 0) = c;
  return apply_loss(WignerCov(m / 4.0), 1, p.kappa_A);
}

StoredReference reference_storage_fidelity(const SourceDerived& src, double G_R, double kappa_I,
                                           double N_LO) {
  if (G_R < 1.0) throw DomainError("reference gain must be >= 1");
  if (!(kappa_I > 0.0 && kappa_I <= 1.0)) throw DomainError("storage transmissivity outside (0,1]");
  // Amplifier output noise N_R = G_R when an amplifier is present; with
  // G_R == 1 the sqrt(G_R - 1) noise term vanishes and so does its noise.
  const double n_r = G_R > 1.0 ? G_R : 0.0;
  const double brightness = kappa_I * G_R * N_LO + kappa_I * n_r;
  const double correlation =
      brightness > 0.0 ? src.ref_correlation * kappa_I * G_R * N_LO / brightness : 0.0;
  return {brightness, correlation};
}

double bob_amplifier_output_brightness(const SystemParams& p, double arriving_brightness) {
  if (arriving_brightness < 0.0) throw DomainError("arriving brightness must be >= 0");
  return p.G_B * (1.0 - p.kappa_B) * arriving_brightness + p.N_B;
}

}  // namespace flqkd

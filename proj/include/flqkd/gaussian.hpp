#pragma once

// Gaussian-state numerics in the quadrature convention where the vacuum
// variance is 1/4. Covariances are stored interleaved: (q1, p1, q2, p2, ...).

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace flqkd {

/// Real symmetric Wigner covariance matrix of a zero-mean Gaussian state.
///
/// Construction checks symmetry (1e-12 relative) and even dimension and
/// throws InvalidCovariance otherwise. The Heisenberg bound is not enforced
/// here; use heisenberg_margin() or require_physical() where it matters.
class WignerCov {
 public:
  explicit WignerCov(Eigen::MatrixXd m);

  static WignerCov vacuum(int modes = 1);
  /// Single-mode thermal state, mean photon number n: (2n+1)/4 * I2.
  static WignerCov thermal(double mean_photons);
  /// Two-mode squeezed vacuum with per-mode brightness n (modes S, I).
  static WignerCov two_mode_squeezed(double mean_photons);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  int modes() const noexcept { return dim() / 2; }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }

  /// 2x2 block (row mode i, column mode j).
  Eigen::Matrix2d block(int i, int j) const { return m_.block<2, 2>(2 * i, 2 * j); }

  /// Reduced state on the listed modes, in the given order.
  WignerCov marginal(const std::vector<int>& keep) const;

 private:
  Eigen::MatrixXd m_;
};

/// Symplectic eigenvalues, one per mode, sorted descending.
struct SymplecticSpectrum {
  std::vector<double> eigenvalues;
};

/// Standard symplectic form for `modes` interleaved modes.
Eigen::MatrixXd symplectic_form(int modes);

SymplecticSpectrum symplectic_eigenvalues(const WignerCov& cov);

/// min(symplectic eigenvalue) - 1/4. Nonnegative for physical states.
double heisenberg_margin(const WignerCov& cov);

/// Throws NumericInvariantError naming `what` if the margin is below -tol.
void require_physical(const WignerCov& cov, const char* what, double tol = 1e-9);

/// von Neumann entropy of a thermal state with mean photon number x, in bits.
double thermal_entropy(double x);

/// Entropy of the Gaussian state, sum over modes of g((4 xi - 1)/2).
double entropy_from_cov(const WignerCov& cov);

/// Gaussian upper tail probability.
double q_function(double x);

/// <a_j a_k> for j != k, read off the covariance.
std::complex<double> phase_sensitive_correlation(const WignerCov& cov, int j, int k);

/// <a_j^dagger a_j>.
double mean_photon_number(const WignerCov& cov, int j);

/// Apply a single-mode Gaussian channel X, Y to `mode`:
/// block -> X * block * X^T + Y, cross blocks -> X * cross.
WignerCov apply_channel(const WignerCov& cov, int mode, const Eigen::Matrix2d& x,
                        const Eigen::Matrix2d& y);

/// Beam splitter with vacuum on the other port; `mode` keeps transmissivity eta.
WignerCov apply_loss(const WignerCov& cov, int mode, double eta);

}  // namespace flqkd

#include "flqkd/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "flqkd/errors.hpp"

namespace flqkd {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kPairTol = 1e-9;

}  // namespace

WignerCov::WignerCov(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0 || m_.rows() % 2 != 0) {
    throw InvalidCovariance("covariance must be square with positive even dimension");
  }
  if (!m_.allFinite()) throw InvalidCovariance("covariance has non-finite entries");
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  if ((m_ - m_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale) {
    throw InvalidCovariance("covariance is not symmetric");
  }
  m_ = 0.5 * (m_ + m_.transpose());
}

WignerCov WignerCov::vacuum(int modes) {
  return WignerCov(Eigen::MatrixXd::Identity(2 * modes, 2 * modes) / 4.0);
}

WignerCov WignerCov::thermal(double mean_photons) {
  return WignerCov((2.0 * mean_photons + 1.0) * Eigen::MatrixXd::Identity(2, 2) / 4.0);
}

WignerCov WignerCov::two_mode_squeezed(double mean_photons) {
  const double a = 2.0 * mean_photons + 1.0;
  const double c = 2.0 * std::sqrt(mean_photons * (mean_photons + 1.0));
  Eigen::MatrixXd m(4, 4);
  m << a, 0, c, 0,  //
      0, a, 0, -c,  //
      c, 0, a, 0,   //
      0, -c, 0, a;
  return WignerCov(m / 4.0);
}

WignerCov WignerCov::marginal(const std::vector<int>& keep) const {
  const int k = static_cast<int>(keep.size());
  Eigen::MatrixXd out(2 * k, 2 * k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      out.block<2, 2>(2 * a, 2 * b) = block(keep[a], keep[b]);
    }
  }
  return WignerCov(out);
}

Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

SymplecticSpectrum symplectic_eigenvalues(const WignerCov& cov) {
  const int n = cov.modes();
  const Eigen::MatrixXcd m =
      std::complex<double>(0.0, 1.0) * (symplectic_form(n) * cov.matrix()).cast<std::complex<double>>();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericInvariantError("symplectic eigenvalue solve did not converge");
  }
  std::vector<double> moduli(2 * n);
  for (int i = 0; i < 2 * n; ++i) moduli[i] = std::abs(solver.eigenvalues()[i]);
  std::sort(moduli.begin(), moduli.end(), std::greater<>());

  // Eigenvalues of i*Omega*Lambda come in +-xi pairs; collapse each pair.
  const double tol = kPairTol * std::max(1.0, moduli.front());
  SymplecticSpectrum out;
  out.eigenvalues.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double a = moduli[2 * k];
    const double b = moduli[2 * k + 1];
    if (std::abs(a - b) > tol) {
      std::ostringstream msg;
      msg << "unpaired symplectic eigenvalue moduli " << a << " / " << b;
      throw NumericInvariantError(msg.str());
    }
    out.eigenvalues.push_back(0.5 * (a + b));
  }
  return out;
}

double heisenberg_margin(const WignerCov& cov) {
  const auto spectrum = symplectic_eigenvalues(cov);
  return spectrum.eigenvalues.back() - 0.25;
}

void require_physical(const WignerCov& cov, const char* what, double tol) {
  const double margin = heisenberg_margin(cov);
  if (margin < -tol) {
    std::ostringstream msg;
    msg << what << ": symplectic eigenvalue below 1/4 by " << -margin;
    throw NumericInvariantError(msg.str());
  }
}

double thermal_entropy(double x) {
  if (!(x >= 0.0)) throw DomainError("thermal_entropy: mean photon number must be >= 0");
  if (x < 1e-12) return 0.0;
  // (x+1)log2(x+1) - x log2(x) rearranged to stay accurate for large x.
  return (std::log1p(x) + x * std::log1p(1.0 / x)) / std::numbers::ln2;
}

double entropy_from_cov(const WignerCov& cov) {
  double s = 0.0;
  for (double xi : symplectic_eigenvalues(cov).eigenvalues) {
    // Round-off can push a pure-mode eigenvalue a hair below 1/4.
    s += thermal_entropy(std::max(0.0, (4.0 * xi - 1.0) / 2.0));
  }
  return s;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

std::complex<double> phase_sensitive_correlation(const WignerCov& cov, int j, int k) {
  const Eigen::Matrix2d c = cov.block(j, k);
  return {c(0, 0) - c(1, 1), c(0, 1) + c(1, 0)};
}

double mean_photon_number(const WignerCov& cov, int j) {
  const Eigen::Matrix2d c = cov.block(j, j);
  return c(0, 0) + c(1, 1) - 0.5;
}

WignerCov apply_channel(const WignerCov& cov, int mode, const Eigen::Matrix2d& x,
                        const Eigen::Matrix2d& y) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(cov.dim(), cov.dim());
  s.block<2, 2>(2 * mode, 2 * mode) = x;
  Eigen::MatrixXd out = s * cov.matrix() * s.transpose();
  out.block<2, 2>(2 * mode, 2 * mode) += y;
  return WignerCov(out);
}

WignerCov apply_loss(const WignerCov& cov, int mode, double eta) {
  if (eta < 0.0 || eta > 1.0) throw DomainError("apply_loss: transmissivity outside [0,1]");
  const Eigen::Matrix2d x = std::sqrt(eta) * Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d y = (1.0 - eta) / 4.0 * Eigen::Matrix2d::Identity();
  return apply_channel(cov, mode, x, y);
}

}  // namespace flqkd

#include "flqkd/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "flqkd/errors.hpp"

namespace flqkd {

namespace {

using cd = std::complex<double>;

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kConeSlack = 1e-12;

// Entropy with the Heisenberg check folded into the same eigen solve.
double checked_entropy(const WignerCov& cov, const char* what) {
  const auto spec = symplectic_eigenvalues(cov);
  if (spec.eigenvalues.back() < 0.25 - 1e-9) {
    std::ostringstream msg;
    msg << what << ": symplectic eigenvalue " << spec.eigenvalues.back() << " below 1/4";
    throw NumericInvariantError(msg.str());
  }
  double s = 0.0;
  for (double xi : spec.eigenvalues) s += thermal_entropy(std::max(0.0, (4.0 * xi - 1.0) / 2.0));
  return s;
}

Eigen::MatrixXd two_mode(const Eigen::Matrix2d& a, const Eigen::Matrix2d& c,
                         const Eigen::Matrix2d& b) {
  Eigen::MatrixXd m(4, 4);
  m.block<2, 2>(0, 0) = a;
  m.block<2, 2>(0, 2) = c;
  m.block<2, 2>(2, 0) = c.transpose();
  m.block<2, 2>(2, 2) = b;
  return m;
}

double feasible_cos2_max(double f_E, double N_S) {
  if (f_E >= 1.0) return 1.0;
  return std::min(1.0, f_E * N_S / (1.0 - f_E));
}

void check_inputs(double f_E, double kappa_S, double N_S) {
  if (!(f_E >= 0.0 && f_E <= 1.0)) throw InvalidParameter("f_E", "must lie in [0, 1]");
  if (!(kappa_S > 0.0 && kappa_S <= 1.0)) throw InvalidParameter("kappa_S", "must lie in (0, 1]");
  if (!(N_S >= 0.0) || !std::isfinite(N_S)) throw InvalidParameter("N_S", "must be >= 0");
}

}  // namespace

std::complex<double> AttackParams::w(double N_S) const {
  return cd(vu_inner_mag + (2.0 * N_S + 1.0) * v0_mag * u0_mag, 0.0);
}

AttackParams attack_from_angles(double f_E, double gamma_v, double delta, double kappa_S,
                                double N_S) {
  check_inputs(f_E, kappa_S, N_S);
  if (gamma_v < -kConeSlack || gamma_v > kHalfPi + kConeSlack || delta < -kConeSlack ||
      delta > kHalfPi + kConeSlack) {
    throw InfeasibleAttack("attack angles must lie in [0, pi/2]");
  }
  const double c = std::cos(gamma_v);
  const double c2 = c * c;
  if (c2 > feasible_cos2_max(f_E, N_S) + kConeSlack) {
    throw InfeasibleAttack("gamma_v outside the admissible cone cos^2 <= f_E N_S / (1 - f_E)");
  }
  const double t = (1.0 - f_E) * kappa_S;
  AttackParams a;
  a.f_E = f_E;
  a.gamma_v = gamma_v;
  a.delta = delta;
  a.v0_mag = std::sqrt(t) * std::abs(c);
  a.u0_mag = std::sqrt(t) * std::sin(gamma_v);
  a.v_norm_sq = std::max(0.0, f_E * kappa_S * N_S - t * c2);
  a.u_norm_sq = f_E * kappa_S * N_S + 1.0 - t + t * c2;
  a.vu_inner_mag = std::sqrt(a.v_norm_sq * a.u_norm_sq) * std::cos(delta);
  if (a.vu_inner_mag < 0.0) a.vu_inner_mag = 0.0;
  return a;
}

AttackParams optimum_attack(double f_E, double kappa_S, double N_S) {
  check_inputs(f_E, kappa_S, N_S);
  AttackParams a;
  a.f_E = f_E;
  a.gamma_v = kHalfPi;
  a.delta = kHalfPi;
  a.v0_mag = 0.0;
  a.u0_mag = std::sqrt((1.0 - f_E) * kappa_S);
  a.v_norm_sq = f_E * kappa_S * N_S;
  a.u_norm_sq = f_E * kappa_S * N_S + 1.0 - (1.0 - f_E) * kappa_S;
  a.vu_inner_mag = 0.0;
  return a;
}

AttackResiduals attack_residuals(const AttackParams& a, double kappa_S, double N_S) {
  const double u0 = a.u0_mag * a.u0_mag;
  const double v0 = a.v0_mag * a.v0_mag;
  AttackResiduals r{};
  r.commutator = u0 - v0 + a.u_norm_sq - a.v_norm_sq - 1.0;
  r.flux = (u0 + v0) * N_S + v0 + a.v_norm_sq - kappa_S * N_S;
  const double k = kappa_S * N_S;
  r.injection = k > 0.0 ? (v0 + a.v_norm_sq) / k - a.f_E : 0.0;
  return r;
}

double eve_spdc_brightness(double f_E, double kappa_S, double N_S) {
  const double den = 1.0 - (1.0 - f_E) * kappa_S;
  if (!(den > 0.0)) throw InfeasibleAttack("Eve's SPDC realization needs (1 - f_E) kappa_S < 1");
  return f_E * kappa_S * N_S / den;
}

ConditionalCovariances conditional_covariances(const AttackParams& a, double kappa_S, double N_S,
                                               double G_B) {
  const cd u0(a.u0_mag, 0.0);
  const cd v0(a.v0_mag, 0.0);
  const cd w = a.w(N_S);
  const cd sp = u0 + v0;
  const cd sm = u0 - v0;
  const double k = kappa_S * N_S;

  // (I, S')
  const double c_is = 2.0 * std::sqrt(N_S * (N_S + 1.0));
  const double B = 0.5 + k;
  Eigen::Matrix2d A_S = (2.0 * N_S + 1.0) * Eigen::Matrix2d::Identity();
  Eigen::Matrix2d C_IS;
  C_IS << sp.real(), sm.imag(), sp.imag(), -sm.real();
  C_IS *= c_is;
  Eigen::Matrix2d B_IS;
  B_IS << B + w.real(), w.imag(), w.imag(), B - w.real();
  B_IS *= 2.0;

  // (I, B') for b = 0
  const double c_ib = 2.0 * std::sqrt((G_B - 1.0) * N_S * (N_S + 1.0));
  const double Bp = 1.0 + 2.0 * (G_B - 1.0) * (k + 1.0);
  const cd x = 2.0 * (G_B - 1.0) * w;
  Eigen::Matrix2d C_IB;
  C_IB << sp.real(), -sm.imag(), sp.imag(), sm.real();
  C_IB *= c_ib;
  Eigen::Matrix2d B_IB;
  B_IB << Bp + x.real(), -x.imag(), -x.imag(), Bp - x.real();

  // B
  const double Bpp = -1.0 + 2.0 * G_B * (k + 1.0);
  Eigen::Matrix2d L_B;
  L_B << Bpp + 2.0 * G_B * w.real(), 2.0 * G_B * w.imag(), 2.0 * G_B * w.imag(),
      Bpp - 2.0 * G_B * w.real();

  return {WignerCov(two_mode(A_S, C_IS, B_IS) / 4.0), WignerCov(two_mode(A_S, C_IB, B_IB) / 4.0),
          WignerCov(Eigen::MatrixXd(L_B) / 4.0)};
}

const char* to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::exact_symplectic: return "exact_symplectic";
    case BoundMethod::asymptotic_NB: return "asymptotic_NB";
    case BoundMethod::asymptotic_kappaS: return "asymptotic_kappaS";
  }
  return "unknown";
}

HolevoBound make_bound(double per_mode_raw, double M, BoundMethod method) {
  HolevoBound h;
  h.method = method;
  h.per_mode_raw = std::max(0.0, per_mode_raw);
  const double per_bit = M * h.per_mode_raw;
  h.capped = per_bit > 1.0;
  h.per_bit = std::min(per_bit, 1.0);
  h.per_mode = h.per_bit / M;
  return h;
}

double holevo_bracket_exact(const AttackParams& a, double kappa_S, double N_S, double G_B) {
  const auto cov = conditional_covariances(a, kappa_S, N_S, G_B);
  return checked_entropy(cov.idler_signal, "Lambda_IS'") +
         checked_entropy(cov.bob_output, "Lambda_B") -
         checked_entropy(cov.idler_complement, "Lambda_IB'");
}

HolevoBound holevo_exact_ub(const SystemParams& p, const AttackParams& a, double N_S) {
  return make_bound(holevo_bracket_exact(a, p.kappa_S(), N_S, p.G_B), p.modes_per_bit(),
                    BoundMethod::exact_symplectic);
}

HolevoBound holevo_optimum_ub(const SystemParams& p, double f_E, double N_S) {
  return holevo_exact_ub(p, optimum_attack(f_E, p.kappa_S(), N_S), N_S);
}

HolevoBound holevo_large_gain_ub(const SystemParams& p, double f_E, double N_S) {
  const double kappa_S = p.kappa_S();
  const auto cov = conditional_covariances(optimum_attack(f_E, kappa_S, N_S), kappa_S, N_S, p.G_B);
  const double s_is = checked_entropy(cov.idler_signal, "Lambda_IS'");
  // The larger eigenvalue of IB' tracks xi_B at large gain; keep the smaller.
  const auto spec = symplectic_eigenvalues(cov.idler_complement);
  const double xi_minus = spec.eigenvalues.back();
  const double raw = s_is - thermal_entropy(std::max(0.0, (4.0 * xi_minus - 1.0) / 2.0));
  return make_bound(raw, p.modes_per_bit(), BoundMethod::asymptotic_NB);
}

HolevoBound holevo_asymptotic_ub(const SystemParams& p, double f_E, double N_S) {
  const double kappa_S = p.kappa_S();
  check_inputs(f_E, kappa_S, N_S);
  double raw = 0.0;
  if (N_S > 0.0) {
    const double fk = f_E * kappa_S * N_S;
    double bracket = (1.0 - f_E) * N_S * std::log2(1.0 + 1.0 / N_S);
    if (fk > 0.0) bracket += f_E * (1.0 / std::numbers::ln2 - std::log2(fk));
    raw = kappa_S * N_S * bracket;
  }
  HolevoBound h = make_bound(raw, p.modes_per_bit(), BoundMethod::asymptotic_kappaS);
  h.out_of_regime = kappa_S > 0.3;
  return h;
}

HolevoBound passive_ub(const SystemParams& p, double N_S) {
  return holevo_optimum_ub(p, 0.0, N_S);
}

OptimumAngles verify_optimum_angles(const SystemParams& p, double f_E, double N_S,
                                    int grid_points) {
  const double kappa_S = p.kappa_S();
  check_inputs(f_E, kappa_S, N_S);
  if (grid_points < 2) throw InvalidParameter("grid_points", "must be >= 2");
  int evals = 0;
  auto objective = [&](double g, double d) {
    ++evals;
    return holevo_bracket_exact(attack_from_angles(f_E, g, d, kappa_S, N_S), kappa_S, N_S, p.G_B);
  };

  const double c2max = feasible_cos2_max(f_E, N_S);
  const double g_lo = std::acos(std::sqrt(c2max));
  if (g_lo >= kHalfPi - 1e-15) {
    // Degenerate cone: gamma_v pinned at pi/2 and v = 0, so delta is irrelevant.
    const double v = objective(kHalfPi, kHalfPi);
    return {kHalfPi, kHalfPi, v, evals};
  }

  // Scan from the pi/2 corner downward so exact ties resolve to the corner.
  const int n = grid_points;
  auto grid_at = [n](double lo, double hi, int i) { return hi - (hi - lo) * i / (n - 1); };
  double best = -std::numeric_limits<double>::infinity();
  double bg = kHalfPi, bd = kHalfPi;
  for (int i = 0; i < n; ++i) {
    const double g = grid_at(g_lo, kHalfPi, i);
    for (int j = 0; j < n; ++j) {
      const double d = grid_at(0.0, kHalfPi, j);
      const double v = objective(g, d);
      if (v > best) {
        best = v;
        bg = g;
        bd = d;
      }
    }
  }

  auto refine = [&](double lo, double hi, auto&& f, double& x, double& fx) {
    constexpr double r = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 1e-7) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - r * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + r * (b - a);
        fd = f(d);
      }
    }
    for (double cand : {0.5 * (a + b), lo, hi}) {
      const double v = f(cand);
      if (v > fx) {
        fx = v;
        x = cand;
      }
    }
  };

  const double hg = (kHalfPi - g_lo) / (n - 1);
  const double hd = kHalfPi / (n - 1);
  refine(std::max(g_lo, bg - hg), std::min(kHalfPi, bg + hg),
         [&](double g) { return objective(g, bd); }, bg, best);
  refine(std::max(0.0, bd - hd), std::min(kHalfPi, bd + hd),
         [&](double d) { return objective(bg, d); }, bd, best);
  return {bg, bd, best, evals};
}

WignerCov active_covariance(const SystemParams& p, double f_E, double N_S, int bit,
                            ActiveCovarianceForm form) {
  const double kappa_S = p.kappa_S();
  check_inputs(f_E, kappa_S, N_S);
  const double N_E = eve_spdc_brightness(f_E, kappa_S, N_S);
  const double tau = form == ActiveCovarianceForm::derived ? 1.0 - (1.0 - f_E) * kappa_S
                                                           : 1.0 - f_E * kappa_S;
  const double bob_in = form == ActiveCovarianceForm::derived ? kappa_S * N_S : N_S;
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d z = (Eigen::Matrix2d() << 1, 0, 0, -1).finished();
  const Eigen::Matrix2d A_E = (2.0 * N_E + 1.0) * id;
  const Eigen::Matrix2d A_B = (2.0 * (p.G_B * bob_in + p.N_B) + 1.0) * id;
  Eigen::Matrix2d C = Eigen::Matrix2d::Zero();
  if (bit >= 0) {
    const double sign = bit % 2 == 0 ? 1.0 : -1.0;
    C = sign * 2.0 * std::sqrt(p.G_B * tau * N_E * (N_E + 1.0)) * z;
  }
  return WignerCov(two_mode(A_E, C, A_B) / 4.0);
}

HolevoBound holevo_active_ub(const SystemParams& p, double f_E, double N_S,
                             ActiveCovarianceForm form) {
  const double s_mix = checked_entropy(active_covariance(p, f_E, N_S, -1, form), "Lambda_IB");
  const double s_cond = checked_entropy(active_covariance(p, f_E, N_S, 0, form), "Lambda_IB^(b)");
  return make_bound(s_mix - s_cond, p.modes_per_bit(), BoundMethod::exact_symplectic);
}

double entanglement_assisted_capacity(const SystemParams& p, double f_E, double N_S) {
  const double kappa_S = p.kappa_S();
  check_inputs(f_E, kappa_S, N_S);
  const double N_E = eve_spdc_brightness(f_E, kappa_S, N_S);
  const double x = (1.0 - p.kappa_B) * (1.0 - (1.0 - f_E) * kappa_S) * N_E;
  return thermal_entropy(x) + thermal_entropy(p.G_B * x + p.N_B) -
         thermal_entropy((1.0 + x) * p.N_B);
}

namespace {
constexpr double kLeakAbsTol = 1e-10;
}  // namespace

LeakRatio monitor_leak_ratio(const SystemParams& p, double f_E, double N_S) {
  const double kappa_S = p.kappa_S();
  check_inputs(f_E, kappa_S, N_S);
  const double M = p.modes_per_bit();
  const double kb = p.kappa_B * kappa_S * N_S;

  LeakRatio out{};
  out.p1 = M * kb;
  out.unconditional_brightness = (1.0 - p.kappa_B) * kappa_S * N_S;
  out.conditional_brightness = out.unconditional_brightness / (1.0 + kb);
  out.regime_warning = out.p1 > 0.1;

  const auto opt = [&](double ns) {
    return holevo_bracket_exact(optimum_attack(f_E, kappa_S, ns), kappa_S, ns, p.G_B);
  };
  const double chi = opt(N_S);
  if (!(chi > 0.0)) {
    out.chi0_over_chi = 1.0;
    out.ratio = 1.0;
    return out;
  }
  // The no-click state is thermal at the reduced brightness; rerun the bound there.
  // chi is a difference of O(10)-bit entropies, so tiny values carry ~1e-13
  // absolute round-off; excess below kLeakAbsTol is clamped, anything more throws.
  const double chi0 = p.kappa_B > 0.0 ? opt(N_S / (1.0 + kb)) : chi;
  if (chi0 - chi > kLeakAbsTol) throw NumericInvariantError("monitor leak: chi0 exceeds chi");
  out.chi0_over_chi = std::min(1.0, chi0 / chi);
  out.ratio = out.chi0_over_chi + out.p1 / (M * chi);
  return out;
}

}  // namespace flqkd

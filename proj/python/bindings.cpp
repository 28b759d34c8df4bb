#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "flqkd/adversary.hpp"
#include "flqkd/errors.hpp"
#include "flqkd/gaussian.hpp"
#include "flqkd/keyrate.hpp"
#include "flqkd/monitor.hpp"
#include "flqkd/receiver.hpp"
#include "flqkd/runner.hpp"
#include "flqkd/terminals.hpp"
#include "flqkd/version.hpp"

namespace py = pybind11;
using namespace flqkd;

PYBIND11_MODULE(_flqkd, m) {
  m.doc() = "Floodlight QKD security-analysis engine";
  m.attr("__version__") = kVersion;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<InvalidCovariance>(m, "InvalidCovariance", PyExc_ValueError);
  py::register_exception<InfeasibleAttack>(m, "InfeasibleAttack", base.ptr());
  py::register_exception<InfeasibleSource>(m, "InfeasibleSource", base.ptr());
  py::register_exception<RegimeViolation>(m, "RegimeViolation", base.ptr());
  py::register_exception<UndefinedBaseline>(m, "UndefinedBaseline", base.ptr());
  py::register_exception<NumericInvariantError>(m, "NumericInvariantError", base.ptr());

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init<>())
      .def_readwrite("W", &SystemParams::W)
      .def_readwrite("R", &SystemParams::R)
      .def_readwrite("L", &SystemParams::L_km)
      .def_readwrite("fiber_loss", &SystemParams::fiber_loss_db_per_km)
      .def_readwrite("kappa_S_override", &SystemParams::kappa_S_override)
      .def_readwrite("n", &SystemParams::n)
      .def_readwrite("N_A", &SystemParams::N_A)
      .def_readwrite("kappa_A", &SystemParams::kappa_A)
      .def_readwrite("kappa_B", &SystemParams::kappa_B)
      .def_readwrite("G_B", &SystemParams::G_B)
      .def_readwrite("N_B", &SystemParams::N_B)
      .def_readwrite("eta", &SystemParams::eta)
      .def_readwrite("N_LO", &SystemParams::N_LO)
      .def_readwrite("G_R", &SystemParams::G_R)
      .def_readwrite("kappa_I", &SystemParams::kappa_I)
      .def_readwrite("beta", &SystemParams::beta)
      .def_readwrite("eta_I", &SystemParams::eta_I)
      .def_readwrite("eta_A_mon", &SystemParams::eta_A_mon)
      .def_readwrite("eta_B_mon", &SystemParams::eta_B_mon)
      .def_readwrite("T_g", &SystemParams::T_g)
      .def_readwrite("T_s", &SystemParams::T_s)
      .def_readwrite("T_R", &SystemParams::T_R)
      .def_property_readonly("kappa_S", &SystemParams::kappa_S)
      .def_property_readonly("M", &SystemParams::modes_per_bit)
      .def("with_signal_brightness", &SystemParams::with_signal_brightness, py::arg("N_S"));

  m.def("validate", py::overload_cast<const SystemParams&>(&validate), py::arg("params"));

  py::class_<SourceDerived>(m, "SourceDerived")
      .def_readonly("kappa_C", &SourceDerived::kappa_C)
      .def_readonly("N_SPDC", &SourceDerived::N_SPDC)
      .def_readonly("N_S", &SourceDerived::N_S)
      .def_readonly("M", &SourceDerived::M)
      .def_readonly("kappa_S", &SourceDerived::kappa_S)
      .def_readonly("ref_correlation", &SourceDerived::ref_correlation);
  m.def("derive_source", &derive_source, py::arg("params"));

  m.def(
      "symplectic_eigenvalues",
      [](const Eigen::MatrixXd& cov) { return symplectic_eigenvalues(WignerCov(cov)).eigenvalues; },
      py::arg("cov"));
  m.def(
      "entropy_from_cov", [](const Eigen::MatrixXd& cov) { return entropy_from_cov(WignerCov(cov)); },
      py::arg("cov"));
  m.def("thermal_entropy", &thermal_entropy, py::arg("x"));
  m.def("q_function", &q_function, py::arg("x"));
  m.def(
      "source_covariance",
      [](const SystemParams& p) { return source_covariance(derive_source(p), p).matrix(); },
      py::arg("params"));

  py::class_<AttackParams>(m, "AttackParams")
      .def_readonly("f_E", &AttackParams::f_E)
      .def_readonly("gamma_v", &AttackParams::gamma_v)
      .def_readonly("delta", &AttackParams::delta)
      .def_readonly("u0_mag", &AttackParams::u0_mag)
      .def_readonly("v0_mag", &AttackParams::v0_mag)
      .def_readonly("u_norm_sq", &AttackParams::u_norm_sq)
      .def_readonly("v_norm_sq", &AttackParams::v_norm_sq)
      .def_readonly("vu_inner_mag", &AttackParams::vu_inner_mag);
  m.def("attack_from_angles", &attack_from_angles, py::arg("f_E"), py::arg("gamma_v"),
        py::arg("delta"), py::arg("kappa_S"), py::arg("N_S"));
  m.def("eve_spdc_brightness", &eve_spdc_brightness, py::arg("f_E"), py::arg("kappa_S"),
        py::arg("N_S"));

  py::class_<HolevoBound>(m, "HolevoBound")
      .def_readonly("per_bit", &HolevoBound::per_bit)
      .def_readonly("per_mode", &HolevoBound::per_mode)
      .def_readonly("per_mode_raw", &HolevoBound::per_mode_raw)
      .def_readonly("capped", &HolevoBound::capped)
      .def_property_readonly("method", [](const HolevoBound& h) { return to_string(h.method); });
  m.def("holevo_optimum_ub", &holevo_optimum_ub, py::arg("params"), py::arg("f_E"), py::arg("N_S"));
  m.def("holevo_asymptotic_ub", &holevo_asymptotic_ub, py::arg("params"), py::arg("f_E"),
        py::arg("N_S"));
  m.def("passive_ub", &passive_ub, py::arg("params"), py::arg("N_S"));
  m.def(
      "holevo_active_ub",
      [](const SystemParams& p, double f_E, double N_S, bool uncorrected) {
        return holevo_active_ub(p, f_E, N_S,
                                uncorrected ? ActiveCovarianceForm::uncorrected
                                           : ActiveCovarianceForm::derived);
      },
      py::arg("params"), py::arg("f_E"), py::arg("N_S"), py::arg("uncorrected") = false);
  m.def("entanglement_assisted_capacity", &entanglement_assisted_capacity, py::arg("params"),
        py::arg("f_E"), py::arg("N_S"));
  m.def(
      "verify_optimum_angles",
      [](const SystemParams& p, double f_E, double N_S, int grid) {
        const auto a = verify_optimum_angles(p, f_E, N_S, grid);
        return py::make_tuple(a.gamma_v, a.delta);
      },
      py::arg("params"), py::arg("f_E"), py::arg("N_S"), py::arg("grid_points") = 64);
  m.def(
      "monitor_leak_ratio",
      [](const SystemParams& p, double f_E, double N_S) { return monitor_leak_ratio(p, f_E, N_S).ratio; },
      py::arg("params"), py::arg("f_E"), py::arg("N_S"));

  py::class_<HomodyneMoments>(m, "HomodyneMoments")
      .def_readonly("mu0", &HomodyneMoments::mu0)
      .def_readonly("mu1", &HomodyneMoments::mu1)
      .def_readonly("sigma0", &HomodyneMoments::sigma0)
      .def_readonly("sigma1", &HomodyneMoments::sigma1)
      .def_readonly("snr_argument", &HomodyneMoments::snr_argument)
      .def_readonly("degenerate", &HomodyneMoments::degenerate);
  m.def("homodyne_moments", &homodyne_moments, py::arg("params"), py::arg("f_E"), py::arg("N_S"));
  m.def("error_probability", &error_probability, py::arg("moments"));
  m.def("shannon_rate", &shannon_rate, py::arg("pr_e"), py::arg("R"));

  py::class_<OperatingPoint>(m, "OperatingPoint")
      .def_readonly("L_km", &OperatingPoint::L_km)
      .def_readonly("kappa_S", &OperatingPoint::kappa_S)
      .def_readonly("f_E", &OperatingPoint::f_E)
      .def_readonly("N_S", &OperatingPoint::N_S)
      .def_readonly("R", &OperatingPoint::R)
      .def_readonly("M", &OperatingPoint::M)
      .def_readonly("pr_e", &OperatingPoint::pr_e)
      .def_readonly("I_AB", &OperatingPoint::I_AB)
      .def_readonly("chi_ub", &OperatingPoint::chi_ub)
      .def_readonly("chi_exact_per_bit", &OperatingPoint::chi_exact_per_bit)
      .def_readonly("chi_asym_per_bit", &OperatingPoint::chi_asym_per_bit)
      .def_readonly("skr_lb", &OperatingPoint::skr_lb)
      .def_readonly("ppb_tx", &OperatingPoint::ppb_tx)
      .def_readonly("ppb_rx", &OperatingPoint::ppb_rx)
      .def_readonly("eff_per_use", &OperatingPoint::eff_per_use)
      .def_readonly("eff_per_mode", &OperatingPoint::eff_per_mode)
      .def_readonly("pirandola_bound", &OperatingPoint::pirandola_bound)
      .def_readonly("leak_ratio", &OperatingPoint::leak_ratio)
      .def_property_readonly("status", [](const OperatingPoint& o) { return to_string(o.status); });
  m.def("skr_lower_bound", &skr_lower_bound, py::arg("params"), py::arg("f_E"), py::arg("N_S"),
        py::arg("R"), py::arg("fold_leak") = false);
  m.def(
      "optimize_operating_point",
      [](const SystemParams& p, double f_E) { return optimize_operating_point(p, f_E); },
      py::arg("params"), py::arg("f_E"), py::call_guard<py::gil_scoped_release>());
  m.def(
      "distance_sweep",
      [](const SystemParams& p, double f_E, const std::vector<double>& L, unsigned threads) {
        std::vector<OperatingPoint> out;
        for (auto& r : distance_sweep(p, f_E, L, {}, threads)) out.push_back(r.point);
        return out;
      },
      py::arg("params"), py::arg("f_E"), py::arg("L_grid"), py::arg("threads") = 1,
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "fe_sweep",
      [](const SystemParams& p, const std::vector<double>& fE, unsigned threads) {
        std::vector<OperatingPoint> out;
        for (auto& r : fe_sweep(p, fE, {}, threads)) out.push_back(r.point);
        return out;
      },
      py::arg("params"), py::arg("fE_grid"), py::arg("threads") = 1,
      py::call_guard<py::gil_scoped_release>());

  py::class_<HolevoRow>(m, "HolevoRow")
      .def_readonly("N_S", &HolevoRow::N_S)
      .def_readonly("optimum", &HolevoRow::optimum)
      .def_readonly("passive", &HolevoRow::passive)
      .def_readonly("active", &HolevoRow::active)
      .def_readonly("capacity", &HolevoRow::capacity)
      .def_readonly("asymptotic", &HolevoRow::asymptotic);
  m.def("holevo_sweep", &holevo_sweep, py::arg("params"), py::arg("f_E"), py::arg("NS_grid"),
        py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());

  py::class_<MonitorRates>(m, "MonitorRates")
      .def(py::init<>())
      .def_readwrite("S_I", &MonitorRates::S_I)
      .def_readwrite("S_A", &MonitorRates::S_A)
      .def_readwrite("S_B", &MonitorRates::S_B)
      .def_readwrite("C_IA", &MonitorRates::C_IA)
      .def_readwrite("C_IA_shifted", &MonitorRates::C_IA_shifted)
      .def_readwrite("C_IB", &MonitorRates::C_IB)
      .def_readwrite("C_IB_shifted", &MonitorRates::C_IB_shifted)
      .def_readwrite("f_E_hat", &MonitorRates::f_E_hat);
  m.def("expected_rates", &expected_rates, py::arg("params"), py::arg("f_E"));
  m.def("estimate_fE", &estimate_fE, py::arg("rates"));
  m.def(
      "simulate_events",
      [](const SystemParams& p, double f_E, double duration, std::uint64_t seed) {
        const auto r = simulate_events(p, f_E, duration, seed);
        return py::make_tuple(r.rates, r.f_E_hat_se);
      },
      py::arg("params"), py::arg("f_E"), py::arg("duration"), py::arg("seed"));

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "flqkd");
        std::vector<char*> argv;
        for (auto& a : args) argv.push_back(a.data());
        return cli_main(static_cast<int>(argv.size()), argv.data());
      },
      py::arg("args"));
}

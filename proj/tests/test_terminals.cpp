#include <doctest.h>

#include <cmath>

#include "flqkd/errors.hpp"
#include "flqkd/terminals.hpp"

using namespace flqkd;

TEST_CASE("source derivation at the reference configuration") {
  SystemParams p;
  const SourceDerived s = derive_source(p);
  CHECK(s.kappa_C == doctest::Approx(0.901).epsilon(1e-12));
  CHECK(s.kappa_C >= 0.9);
  CHECK(s.N_SPDC == doctest::Approx(0.1 / 90.1).epsilon(1e-12));
  CHECK(s.N_SPDC == doctest::Approx(1.1099e-3).epsilon(1e-4));
  CHECK(s.N_S == doctest::Approx(0.099));
  CHECK(s.M == doctest::Approx(200.0));
  CHECK(s.kappa_S == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(std::abs(s.ref_correlation - 0.99) < 1e-12);
}

TEST_CASE("dark source") {
  SystemParams p;
  p.N_A = 0.0;
  const SourceDerived s = derive_source(p);
  CHECK(s.N_SPDC == 0.0);
  CHECK(s.kappa_C == 1.0);
  CHECK(s.N_S == 0.0);
}

TEST_CASE("source infeasibility") {
  SystemParams p;
  p.N_A = 1.0;
  CHECK_THROWS_AS(derive_source(p), InfeasibleSource);
  p.N_A = 0.1;
  p.n = 0.5;
  CHECK_THROWS_AS(derive_source(p), InfeasibleSource);
}

TEST_CASE("ASE to SPDC ratio equals n") {
  for (double n : {1.0, 9.0, 99.0, 999.0}) {
    for (double na : {1e-3, 0.01, 0.1, 0.5}) {
      SystemParams p;
      p.n = n;
      p.N_A = na;
      const SourceDerived s = derive_source(p);
      CHECK(std::abs((1.0 - s.kappa_C) * kNAse / (s.kappa_C * s.N_SPDC) - n) < 1e-9 * n);
      CHECK(std::abs(s.ref_correlation - n / (n + 1.0)) < 1e-12);
    }
  }
}

TEST_CASE("source covariance entries and physicality") {
  SystemParams p;
  const SourceDerived s = derive_source(p);
  const WignerCov c = source_covariance(s, p);
  REQUIRE(c.dim() == 6);
  CHECK(c.matrix()(0, 0) == doctest::Approx(1.198 / 4.0));
  CHECK(heisenberg_margin(c) >= -1e-9);

  p.kappa_A = 1.0;
  const WignerCov full_tap = source_covariance(derive_source(p), p);
  CHECK(full_tap.block(0, 1).isZero());
  CHECK(full_tap.block(0, 2).isZero());
}

TEST_CASE("source covariance is physical across parameters") {
  for (double na : {1e-4, 0.01, 0.1, 0.5, 0.9}) {
    for (double ka : {0.0, 0.01, 0.5}) {
      for (double nlo : {1.0, 1e2, 1e4}) {
        SystemParams p;
        p.N_A = na;
        p.kappa_A = ka;
        p.N_LO = nlo;
        CHECK(heisenberg_margin(source_covariance(derive_source(p), p)) >= -1e-9);
      }
    }
  }
}

TEST_CASE("idler tap covariance") {
  SystemParams p;
  const SourceDerived s = derive_source(p);
  const WignerCov c = idler_tap_covariance(s, p);
  CHECK(mean_photon_number(c, 1) == doctest::Approx(p.kappa_A * p.N_A));
  CHECK(std::norm(phase_sensitive_correlation(c, 0, 1)) ==
        doctest::Approx(p.kappa_A * s.kappa_C * s.N_SPDC * (s.N_SPDC + 1)));
  CHECK(heisenberg_margin(c) >= -1e-9);
}

TEST_CASE("reference storage") {
  SystemParams p;
  const SourceDerived s = derive_source(p);
  for (double ki : {0.1, 0.5, 0.9}) {
    const auto r = reference_storage_fidelity(s, 1.0 / ki, ki, 1e4);
    CHECK(r.brightness == doctest::Approx(1e4 + 1.0).epsilon(1e-14));
  }
  const auto id = reference_storage_fidelity(s, 1.0, 1.0, 1e4);
  CHECK(id.brightness == 1e4);
  CHECK(id.correlation == doctest::Approx(0.99).epsilon(1e-12));

  double prev = 0.0;
  for (double nlo : {1.0, 10.0, 1e2, 1e3, 1e4, 1e6, 1e9}) {
    const auto r = reference_storage_fidelity(s, 2.0, 0.5, nlo);
    CHECK(r.correlation > prev);
    CHECK(r.correlation <= 0.99);
    prev = r.correlation;
  }
  CHECK(reference_storage_fidelity(s, 2.0, 0.5, 1e12).correlation == doctest::Approx(0.99).epsilon(1e-9));
  CHECK_THROWS_AS(reference_storage_fidelity(s, 0.5, 0.5, 1e4), DomainError);
  CHECK_THROWS_AS(reference_storage_fidelity(s, 1.0, 0.0, 1e4), DomainError);
}

TEST_CASE("Bob amplifier output brightness") {
  SystemParams p;
  CHECK(bob_amplifier_output_brightness(p, 0.0043) == doctest::Approx(1.004257e4).epsilon(1e-7));
  CHECK(bob_amplifier_output_brightness(p, 0.0) == p.N_B);
  SystemParams id;
  id.G_B = 1.0;
  id.N_B = 0.0;
  id.kappa_B = 0.0;
  CHECK(bob_amplifier_output_brightness(id, 0.37) == 0.37);
  CHECK_THROWS_AS(bob_amplifier_output_brightness(p, -1.0), DomainError);
}

TEST_CASE("parameter validation names the field") {
  auto field_of = [](SystemParams p) {
    try {
      validate(p);
    } catch (const InvalidParameter& e) {
      return e.field();
    }
    return std::string();
  };
  SystemParams p;
  CHECK(field_of(p).empty());
  p.R = 3e12;
  CHECK(field_of(p) == "R");
  p = {};
  p.N_B = 10.0;
  CHECK(field_of(p) == "N_B");
  p = {};
  p.kappa_B = 1.5;
  CHECK(field_of(p) == "kappa_B");
  p = {};
  p.L_km = 0.0;
  CHECK(field_of(p) == "L");
  p = {};
  p.kappa_S_override = 0.3;
  CHECK(p.kappa_S() == 0.3);
  CHECK(field_of(p).empty());
}

TEST_CASE("timing margins produce warnings") {
  SystemParams p;
  CHECK(validate(p).empty());
  p.T_s = 200e-12;
  CHECK(validate(p).size() == 1);
  p.T_s = 20e-12;
  CHECK(validate(p).size() == 2);
  p = {};
  p.T_R = 1e-5;
  CHECK(validate(p).size() == 1);
}

TEST_CASE("with_signal_brightness sets the transmitted brightness") {
  SystemParams p;
  const SystemParams q = p.with_signal_brightness(0.043);
  CHECK(derive_source(q).N_S == doctest::Approx(0.043).epsilon(1e-14));
}

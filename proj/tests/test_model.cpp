#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qref/lindblad.hpp"
#include "qref/model.hpp"

using namespace qref;

TEST_CASE("constructor validates parameters eagerly") {
  CHECK_NOTHROW(RefrigeratorParams{});

  RefrigeratorParams::Init in;
  in.omega_c = 0.0;
  CHECK_THROWS_AS(RefrigeratorParams{in}, std::invalid_argument);

  in = {};
  in.omega_h = in.omega_c;  // drive gap collapses
  CHECK_THROWS_AS(RefrigeratorParams{in}, std::invalid_argument);

  in = {};
  in.gamma = -0.5;
  CHECK_THROWS_AS(RefrigeratorParams{in}, std::invalid_argument);

  in = {};
  in.kappa = -1e-12;
  CHECK_THROWS_AS(RefrigeratorParams{in}, std::invalid_argument);

  in = {};
  in.nbar_c = -0.1;
  CHECK_THROWS_AS(RefrigeratorParams{in}, std::invalid_argument);

  in = {};
  in.nbar_h = -0.1;
  CHECK_THROWS_AS(RefrigeratorParams{in}, std::invalid_argument);

  in = {};
  in.delta = std::nan("");
  CHECK_THROWS_AS(RefrigeratorParams{in}, std::invalid_argument);

  in = {};
  in.xi0 = 0.0;  // undriven machine is a valid configuration
  CHECK_NOTHROW(RefrigeratorParams{in});
}

TEST_CASE("rate coefficients at the default parameter point") {
  const RefrigeratorParams p;
  const GammaCoefficients g = gamma_coefficients(p);
  CHECK_EQ(g.gamma1, 3.5);    // 2 + 1 + 0.5
  CHECK_EQ(g.gamma2, 6.5);    // 2 + 3 + 1.5
  CHECK_EQ(g.script_n, 5.5);  // 1 + 1 + 2 + 1.5

  const FluxCoefficients f = flux_coefficients(p);
  CHECK_EQ(f.a, 0.5);
  CHECK_EQ(f.b, 19.25);  // script_n * gamma1, no detuning
  CHECK_EQ(f.c, 6.5);
}

TEST_CASE("detuning enters the flux denominator quadratically") {
  RefrigeratorParams::Init in;
  in.delta = 0.7;
  const FluxCoefficients f = flux_coefficients(RefrigeratorParams{in});
  CHECK(f.b == doctest::Approx(5.5 * (3.5 + 4.0 * 0.49 / 3.5)).epsilon(1e-15));

  in.delta = -0.7;  // sign cannot matter
  const FluxCoefficients g = flux_coefficients(RefrigeratorParams{in});
  CHECK_EQ(f.b, g.b);
}

TEST_CASE("ideal coefficient of performance and drive frequency") {
  const RefrigeratorParams p;
  CHECK_EQ(p.omega_drive(), 1.0);
  CHECK_EQ(cop(p), 1.0);

  RefrigeratorParams::Init in;
  in.omega_c = 1.5;
  in.omega_h = 2.0;
  CHECK_EQ(cop(RefrigeratorParams{in}), 3.0);
}

TEST_CASE("heat currents from a flux close exactly and carry the right signs") {
  const RefrigeratorParams p;
  const HeatCurrents h = heat_currents_from_flux(p, 0.01);
  CHECK_EQ(h.j, 0.01);
  CHECK_EQ(h.q_c, 0.01);       // omega_c * j
  CHECK_EQ(h.q_h, -0.02);      // -omega_h * j
  CHECK_EQ(h.q_e, 0.01);       // omega_drive * j
  CHECK_EQ(h.q_c + h.q_h + h.q_e, 0.0);

  const HeatCurrents heating = heat_currents_from_flux(p, -0.01);
  CHECK(heating.q_c < 0.0);
  CHECK(heating.q_h > 0.0);
}

TEST_CASE("planck occupation and its inverse") {
  // References computed with 40-digit arithmetic; allow ~2 ulp of libm slack.
  CHECK(planck_occupation(2.0, 1.7) ==
        doctest::Approx(0.445849679026102501).epsilon(5e-16));
  CHECK(occupation_to_temperature(3.0, 0.01) ==
        doctest::Approx(0.650037196006595045).epsilon(5e-16));

  // Round trips in both directions across magnitudes.
  for (const double t : {0.05, 0.4, 1.0, 7.0, 300.0}) {
    const double n = planck_occupation(1.3, t);
    CHECK(occupation_to_temperature(1.3, n) == doctest::Approx(t).epsilon(1e-12));
  }
  for (const double n : {1e-6, 0.01, 0.5, 2.0, 1e4}) {
    const double t = occupation_to_temperature(0.8, n);
    CHECK(planck_occupation(0.8, t) == doctest::Approx(n).epsilon(1e-12));
  }

  // High-temperature classical limit nbar -> T/omega.
  CHECK(planck_occupation(1.0, 1e6) == doctest::Approx(1e6 - 0.5).epsilon(1e-6));

  CHECK_THROWS_AS(planck_occupation(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(planck_occupation(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(planck_occupation(1.0, -2.0), std::domain_error);
  CHECK_THROWS_AS(occupation_to_temperature(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(occupation_to_temperature(-1.0, 0.5), std::domain_error);
}

TEST_CASE("cooling condition compares bath occupations") {
  CHECK(cooling_condition_monochromatic(RefrigeratorParams{}));

  RefrigeratorParams::Init in;
  in.nbar_c = 0.5;
  in.nbar_h = 1.0;  // hotter occupation on the cold transition: heating
  CHECK_FALSE(cooling_condition_monochromatic(RefrigeratorParams{in}));

  in.nbar_c = in.nbar_h;
  CHECK(cooling_condition_monochromatic(RefrigeratorParams{in}));
}

TEST_CASE("si beam intensity scales linearly in the photon number") {
  SiConversion::Init in;
  in.quantization_volume = 1e-6;
  in.drive_frequency_si = 2.0 * 3.141592653589793 * 1e14;
  const SiConversion si{in};
  CHECK_EQ(si.beam_intensity(0.0), 0.0);
  CHECK(si.beam_intensity(2.0) == doctest::Approx(2.0 * si.beam_intensity(1.0)).epsilon(1e-15));
  CHECK(si.beam_intensity(1.0) > 0.0);
  CHECK_THROWS_AS(si.beam_intensity(-1.0), std::domain_error);

  in.quantization_volume = 0.0;
  CHECK_THROWS_AS(SiConversion{in}, std::invalid_argument);
}

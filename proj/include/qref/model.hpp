#pragma once

#include <stdexcept>

// Shared domain types for the three-level absorption refrigerator.
// Everything works in dimensionless units (hbar = k_B = 1); SI quantities
// appear only in SiConversion and never enter the computational kernel.
namespace qref {

// Level scheme: |g>, |e1>, |e2>. The cold bath couples |e1><->|g> at
// omega_c, the hot bath couples |e2><->|g> at omega_h, and the drive acts
// on |e1><->|e2> at the gap frequency omega_h - omega_c.
struct RefrigeratorParams {
  struct Init {
    double omega_c = 1.0;  // cold transition frequency
    double omega_h = 2.0;  // hot transition frequency
    double gamma = 1.0;    // bath coupling rate (common to both baths)
    double kappa = 0.0;    // spontaneous decay rate of the drive transition
    double delta = 0.0;    // drive detuning (gap frequency minus drive frequency)
    double xi0 = 1.1;      // single-photon coupling strength
    double nbar_c = 1.0;   // cold-bath occupation
    double nbar_h = 0.5;   // hot-bath occupation
  };

  RefrigeratorParams() : RefrigeratorParams(Init{}) {}
  explicit RefrigeratorParams(const Init& in);  // validates eagerly

  double omega_c, omega_h;
  double gamma, kappa;
  double delta, xi0;
  double nbar_c, nbar_h;

  /// Drive transition frequency |e1><->|e2|; always omega_h - omega_c.
  double omega_drive() const { return omega_h - omega_c; }
};

// Converts dimensionless intensities to an SI beam intensity. Note that
// amplitude-normalization conventions in the literature shift the result by
// O(1) factors; this uses energy density = n*hbar*omega_d/V times c.
struct SiConversion {
  struct Init {
    double quantization_volume;                      // m^3
    double vacuum_permittivity = 8.8541878128e-12;   // F/m
    double speed_of_light = 299792458.0;             // m/s
    double drive_frequency_si;                       // rad/s
  };
  explicit SiConversion(const Init& in);

  double quantization_volume;
  double vacuum_permittivity;
  double speed_of_light;
  double drive_frequency_si;

  /// Poynting intensity (W/m^2) carried by mean_photons quanta.
  double beam_intensity(double mean_photons) const;
};

// Steady-state energy flows into the system from each reservoir, plus the
// population flux j circulating through the cooling cycle. At a steady
// state q_h + q_c + q_e = 0 and sign(q_c) = sign(j) = -sign(q_h).
struct HeatCurrents {
  double q_h;
  double q_c;
  double q_e;
  double j;
};

/// Bose occupation 1/(exp(omega/temperature) - 1); omega, temperature > 0.
double planck_occupation(double omega, double temperature);

/// Inverse of planck_occupation in the temperature argument; nbar > 0.
double occupation_to_temperature(double omega, double nbar);

/// True when the bath occupations permit refrigeration (nbar_c >= nbar_h).
bool cooling_condition_monochromatic(const RefrigeratorParams& params);

}  // namespace qref

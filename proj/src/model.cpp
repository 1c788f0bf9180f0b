#include "qref/model.hpp"

#include <cmath>
#include <sstream>

namespace qref {

namespace {

[[noreturn]] void reject(const char* type, const std::string& what) {
  std::ostringstream os;
  os << type << ": " << what;
  throw std::invalid_argument(os.str());
}

}  // namespace

RefrigeratorParams::RefrigeratorParams(const Init& in)
    : omega_c(in.omega_c),
      omega_h(in.omega_h),
      gamma(in.gamma),
      kappa(in.kappa),
      delta(in.delta),
      xi0(in.xi0),
      nbar_c(in.nbar_c),
      nbar_h(in.nbar_h) {
  if (!(omega_c > 0.0))
    reject("RefrigeratorParams", "omega_c must be positive (got " + std::to_string(omega_c) + ")");
  if (!(omega_h > omega_c))
    reject("RefrigeratorParams", "omega_h must exceed omega_c (got omega_c=" +
                                     std::to_string(omega_c) + ", omega_h=" +
                                     std::to_string(omega_h) + ")");
  if (!(gamma > 0.0))
    reject("RefrigeratorParams", "gamma must be positive (got " + std::to_string(gamma) + ")");
  if (!(kappa >= 0.0))
    reject("RefrigeratorParams", "kappa must be non-negative (got " + std::to_string(kappa) + ")");
  if (!(xi0 >= 0.0))
    reject("RefrigeratorParams", "xi0 must be non-negative (got " + std::to_string(xi0) + ")");
  if (!(nbar_c >= 0.0))
    reject("RefrigeratorParams", "nbar_c must be non-negative (got " + std::to_string(nbar_c) + ")");
  if (!(nbar_h >= 0.0))
    reject("RefrigeratorParams", "nbar_h must be non-negative (got " + std::to_string(nbar_h) + ")");
  if (!std::isfinite(delta))
    reject("RefrigeratorParams", "delta must be finite");
}

SiConversion::SiConversion(const Init& in)
    : quantization_volume(in.quantization_volume),
      vacuum_permittivity(in.vacuum_permittivity),
      speed_of_light(in.speed_of_light),
      drive_frequency_si(in.drive_frequency_si) {
  if (!(quantization_volume > 0.0)) reject("SiConversion", "quantization_volume must be positive");
  if (!(vacuum_permittivity > 0.0)) reject("SiConversion", "vacuum_permittivity must be positive");
  if (!(speed_of_light > 0.0)) reject("SiConversion", "speed_of_light must be positive");
  if (!(drive_frequency_si > 0.0)) reject("SiConversion", "drive_frequency_si must be positive");
}

double SiConversion::beam_intensity(double mean_photons) const {
  if (!(mean_photons >= 0.0))
    throw std::domain_error("beam_intensity: mean_photons must be non-negative");
  constexpr double hbar_si = 1.054571817e-34;  // J s
  return (speed_of_light / quantization_volume) * mean_photons * hbar_si * drive_frequency_si;
}

double planck_occupation(double omega, double temperature) {
  if (!(omega > 0.0)) throw std::domain_error("planck_occupation: omega must be positive");
  if (!(temperature > 0.0))
    throw std::domain_error("planck_occupation: temperature must be positive");
  return 1.0 / std::expm1(omega / temperature);
}

double occupation_to_temperature(double omega, double nbar) {
  if (!(omega > 0.0)) throw std::domain_error("occupation_to_temperature: omega must be positive");
  if (!(nbar > 0.0)) throw std::domain_error("occupation_to_temperature: nbar must be positive");
  return omega / std::log1p(1.0 / nbar);
}

bool cooling_condition_monochromatic(const RefrigeratorParams& params) {
  return params.nbar_c >= params.nbar_h;
}

}  // namespace qref

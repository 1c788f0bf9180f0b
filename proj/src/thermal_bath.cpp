#include "qref/thermal_bath.hpp"

#include <cmath>
#include <stdexcept>

namespace qref {

namespace {

double m_coefficient(const ThermalFieldParams& p) {
  const double nc = p.base.nbar_c, nh = p.base.nbar_h;
  return p.nbar_e * (3.0 * nh + 3.0 * nc + 2.0) + nh + 2.0 * nc + 1.0;
}

double denominator(const ThermalFieldParams& p) {
  return gamma_coefficients(p.base).script_n + (p.base.kappa / p.base.gamma) * m_coefficient(p);
}

}  // namespace

ThermalFieldParams::ThermalFieldParams(const RefrigeratorParams& base_params,
                                       double nbar_e_occupation)
    : base(base_params), nbar_e(nbar_e_occupation) {
  if (!(nbar_e >= 0.0))
    throw std::invalid_argument("ThermalFieldParams: nbar_e must be non-negative (got " +
                                std::to_string(nbar_e_occupation) + ")");
}

ThermalFieldParams ThermalFieldParams::from_temperature(const RefrigeratorParams& base_params,
                                                        double t_e) {
  return ThermalFieldParams(base_params, planck_occupation(base_params.omega_drive(), t_e));
}

double thermal_field_flux(const ThermalFieldParams& p) {
  const double nc = p.base.nbar_c, nh = p.base.nbar_h;
  return p.base.kappa * (p.nbar_e * (nc - nh) - nh * (nc + 1.0)) / denominator(p);
}

SteadyObservables steady_populations_thermal(const ThermalFieldParams& p) {
  const double nc = p.base.nbar_c, nh = p.base.nbar_h;
  const double k_over_g = p.base.kappa / p.base.gamma;
  const double den = denominator(p);
  // The EM bath feeds |e2> from |e1> by absorption (rate prop. to nbar_e)
  // and returns population by emission (nbar_e + 1); that asymmetry is
  // exactly what the two kappa terms below carry.
  const double n1 = (nc * (nh + 1.0) + k_over_g * (p.nbar_e + 1.0) * (nc + nh)) / den;
  const double n2 = (nh * (nc + 1.0) + k_over_g * p.nbar_e * (nc + nh)) / den;
  return {1.0 - n1 - n2, n1, n2, {0.0, 0.0}};
}

HeatCurrents thermal_field_currents(const ThermalFieldParams& p) {
  return heat_currents_from_flux(p.base, thermal_field_flux(p));
}

std::optional<double> cooling_threshold(double nbar_c, double nbar_h) {
  if (!(nbar_c >= 0.0) || !(nbar_h >= 0.0))
    throw std::invalid_argument("cooling_threshold: occupations must be non-negative");
  if (!(nbar_c > nbar_h)) return std::nullopt;
  return nbar_h * (nbar_c + 1.0) / (nbar_c - nbar_h);
}

double cop_bound_thermal(double t_c, double t_h, double t_e) {
  if (!(t_c > 0.0) || !(t_c < t_h) || !(t_h <= t_e))
    throw std::domain_error("cop_bound_thermal: temperatures must satisfy 0 < t_c < t_h <= t_e");
  return (t_c - t_h * t_c / t_e) / (t_h - t_c);
}

Matrix9cd build_thermal_field_liouvillian(const ThermalFieldParams& p) {
  // Reuse the coherent-branch builder with the drive and the spontaneous
  // channel switched off, then attach the EM thermal dissipator pair on the
  // drive transition.
  RefrigeratorParams::Init bare;
  bare.omega_c = p.base.omega_c;
  bare.omega_h = p.base.omega_h;
  bare.gamma = p.base.gamma;
  bare.kappa = 0.0;
  bare.delta = 0.0;
  bare.xi0 = 0.0;
  bare.nbar_c = p.base.nbar_c;
  bare.nbar_h = p.base.nbar_h;
  Matrix9cd ell = build_liouvillian(RefrigeratorParams(bare), BranchDrive(0.0));
  ell += p.base.kappa * (p.nbar_e + 1.0) * dissipator(sigma_minus());
  ell += p.base.kappa * p.nbar_e * dissipator(sigma_plus());
  return ell;
}

}  // namespace qref

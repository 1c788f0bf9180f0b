#pragma once

#include <optional>

#include "qref/lindblad.hpp"
#include "qref/model.hpp"

// Regime where the whole multimode EM field acts as one thermal bath at
// occupation nbar_e on the drive transition: kappa plays the coupling role
// and there is no coherent drive (xi0 and delta are unused).
namespace qref {

struct ThermalFieldParams {
  ThermalFieldParams(const RefrigeratorParams& base_params, double nbar_e_occupation);
  /// Same, with the EM-bath occupation derived from its temperature at the
  /// drive gap frequency.
  static ThermalFieldParams from_temperature(const RefrigeratorParams& base_params,
                                             double t_e);

  RefrigeratorParams base;
  double nbar_e;
};

/// Closed-form steady flux
/// j' = kappa*[nbar_e*(nbar_c - nbar_h) - nbar_h*(nbar_c + 1)] / (script_n + (kappa/gamma)*M)
/// with M = nbar_e*(3 nbar_h + 3 nbar_c + 2) + nbar_h + 2 nbar_c + 1.
double thermal_field_flux(const ThermalFieldParams& p);

/// Closed-form steady populations (coherence vanishes without a drive).
SteadyObservables steady_populations_thermal(const ThermalFieldParams& p);

/// (q_h, q_c, q_e) proportional to the closed-form flux.
HeatCurrents thermal_field_currents(const ThermalFieldParams& p);

/// Minimal EM-bath occupation for cooling, nbar_h*(nbar_c + 1)/(nbar_c - nbar_h);
/// empty when nbar_c <= nbar_h (no finite threshold exists).
std::optional<double> cooling_threshold(double nbar_c, double nbar_h);

/// Upper bound (T_c - T_h*T_c/T_e)/(T_h - T_c) on the COP in this regime;
/// requires t_c < t_h <= t_e. Reaches T_c/(T_h - T_c) only as T_e -> inf.
double cop_bound_thermal(double t_c, double t_h, double t_e);

/// Generator of the no-drive master equation with the EM thermal dissipator
/// added on the drive transition (reuses the coherent-branch builder).
Matrix9cd build_thermal_field_liouvillian(const ThermalFieldParams& p);

}  // namespace qref

#pragma once

#include <optional>

#include "qref/lindblad.hpp"
#include "qref/model.hpp"
#include "qref/photon_stats.hpp"

// Flux of the refrigerator driven by light of arbitrary photon statistics,
// obtained by averaging the branch flux j(x) = a x/(b + c x) over the
// photon-number content of the drive. Three independent routes:
//
//   quadrature — for thermal light only: averaging j directly against the
//     exponential weight of |alpha|^2 (planar integral reduced to 1-D).
//   laplace    — for any statistics: 1/(1 + sigma n) = integral_0^inf
//     exp(-s(1 + sigma n)) ds turns the average into
//     j_bar = S (1 - integral_0^inf exp(-s) F(sigma s) ds)
//     with S the saturation flux, sigma the per-photon Laplace scale
//     xi0^2 c/b, and F the normal-order generating function.
//   series     — expansion in normalized factorial moments,
//     j_bar = S sum_{k>=1} (-1)^(k-1) sigma^k M_k, valid where the terms
//     decay; exact (finite) for finitely supported distributions.
//
// Every route reports an error estimate; the dispatcher cross-checks the
// Laplace value against an independent route and flags disagreement rather
// than averaging.
namespace qref {

enum class FluxRoute { ClosedForm, Laplace, Series, QuadratureThermal };

struct FluxResult {
  double j_bar;
  FluxRoute route;
  double error_estimate;              // absolute
  std::optional<double> cross_check;  // |primary - independent route|
  bool flagged = false;               // cross-check above threshold
};

/// Per-photon Laplace scale sigma = xi0^2 * c / b.
double laplace_scale(const RefrigeratorParams& params);

FluxResult flux_quadrature_thermal(const RefrigeratorParams& params, double nbar_th);
FluxResult flux_laplace(const RefrigeratorParams& params, const PhotonDistribution& dist);
FluxResult flux_series(const RefrigeratorParams& params, const PhotonDistribution& dist,
                       int k_max = 64);

/// Authoritative route (Laplace) plus an independent cross-check: the
/// closed form for coherent, direct quadrature for thermal, the moment
/// series where it converges. Never averages; flags discrepancies above
/// 1e-6 * max(|j_bar|, |saturation|).
FluxResult flux(const RefrigeratorParams& params, const PhotonDistribution& dist);

enum class OperatingStatus { Cooling, Inactive, Heating };
const char* to_string(OperatingStatus status);

// COP tagged by operating regime: value present only when cooling.
struct CopResult {
  OperatingStatus status;
  std::optional<double> value;
};

/// omega_c/(omega_h - omega_c) whenever j_bar > 0 — identical for every
/// driving statistics; inactive/heating status otherwise (not an error).
CopResult cop_from_average_flux(const RefrigeratorParams& params, double j_bar);

}  // namespace qref

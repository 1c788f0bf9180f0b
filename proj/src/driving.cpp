#include "qref/driving.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qref/quadrature.hpp"

namespace qref {

namespace {

struct WeightedIntegral {
  double value;
  double error;
};

// integral_0^inf e^{-s} f(s) ds. Two Gauss-Laguerre resolutions must agree
// to 1e-10, otherwise fall back to adaptive subdivision on [0, 40]; the
// discarded tail is below e^{-40} ~ 4e-18 because every generating function
// in scope is bounded by 1 on the positive axis.
WeightedIntegral exp_weighted_integral(const std::function<double(double)>& f, int n_lo,
                                       int n_hi) {
  const double coarse = GaussLaguerre::rule(n_lo).integrate(f);
  const double fine = GaussLaguerre::rule(n_hi).integrate(f);
  const double diff = std::abs(coarse - fine);
  if (diff <= 1e-10) return {fine, diff};
  const double cut = 40.0;
  const double value = adaptive_simpson([&](double s) { return std::exp(-s) * f(s); }, 0.0,
                                        cut, 1e-12);
  return {value, 1e-12 + std::exp(-cut)};
}

FluxResult make_result(double j, FluxRoute route, double err) {
  return {j, route, err, std::nullopt, false};
}

}  // namespace

double laplace_scale(const RefrigeratorParams& p) {
  const auto fc = flux_coefficients(p);
  return p.xi0 * p.xi0 * fc.c / fc.b;
}

FluxResult flux_quadrature_thermal(const RefrigeratorParams& p, double nbar_th) {
  if (!(nbar_th >= 0.0))
    throw std::invalid_argument("flux_quadrature_thermal: nbar_th must be non-negative");
  if (nbar_th == 0.0) return make_result(0.0, FluxRoute::QuadratureThermal, 0.0);
  // The planar average over coherent amplitudes collapses to one dimension:
  // the integrand depends on u = |alpha|^2 only, the angle integrates away,
  // and u follows the exponential law of mean nbar.  Substituting u =
  // nbar*v leaves the unit-weight form integral e^{-v} j(xi0^2 nbar v) dv.
  const auto est = exp_weighted_integral(
      [&](double v) { return coherent_flux(p, nbar_th * v); }, 64, 128);
  return make_result(est.value, FluxRoute::QuadratureThermal, est.error);
}

FluxResult flux_laplace(const RefrigeratorParams& p, const PhotonDistribution& dist) {
  const double s_flux = saturation_flux(p);
  const double sigma = laplace_scale(p);
  // Vacuum input: the generating function is identically 1, so return the
  // exact zero instead of quadrature round-off.
  if (dist.mean() == 0.0) return make_result(0.0, FluxRoute::Laplace, 0.0);
  int n_lo = 64, n_hi = 128;
  if (dist.kind() == PhotonDistribution::Kind::Custom) {
    // Finite support of size N makes the integrand a degree-N polynomial;
    // pick node counts that integrate it exactly.
    const int needed = (static_cast<int>(dist.probabilities().size()) + 2) / 2;
    n_lo = std::max(64, needed);
    n_hi = n_lo + 32;
  }
  const auto est = exp_weighted_integral(
      [&](double s) { return dist.generating_function(sigma * s); }, n_lo, n_hi);
  return make_result(s_flux * (1.0 - est.value), FluxRoute::Laplace,
                     std::abs(s_flux) * est.error);
}

FluxResult flux_series(const RefrigeratorParams& p, const PhotonDistribution& dist, int k_max) {
  if (k_max < 1) throw std::invalid_argument("flux_series: k_max must be >= 1");
  const double s_flux = saturation_flux(p);
  const double sigma = laplace_scale(p);

  double sum = 0.0;
  double sigma_pow = 1.0;
  double prev_mag = std::numeric_limits<double>::infinity();
  int growth_streak = 0;
  int k = 1;
  for (; k <= k_max; ++k) {
    // Moments past the table's precision floor would be noise; for an
    // alternating series with shrinking terms the cut is safe, and the last
    // kept term bounds what it can cost.
    if (!dist.factorial_moment_reliable(k)) break;
    sigma_pow *= sigma;
    const double term = (k % 2 == 1 ? 1.0 : -1.0) * sigma_pow * dist.factorial_moment(k);
    const double mag = std::abs(term);
    growth_streak = (mag > prev_mag) ? growth_streak + 1 : 0;
    if (growth_streak >= 3)
      throw std::runtime_error(
          "flux_series: series outside convergence radius; use flux_laplace");
    prev_mag = mag;
    sum += term;
    if (mag < 1e-12 * std::abs(sum)) break;
  }
  // Error estimate: magnitude of the first omitted term when that moment is
  // still trustworthy, else of the last kept one.
  double omitted = prev_mag;
  const int next = std::min(k, k_max) + 1;
  if (dist.factorial_moment_reliable(next))
    omitted = std::abs(sigma_pow * sigma * dist.factorial_moment(next));
  return make_result(s_flux * sum, FluxRoute::Series, std::abs(s_flux) * omitted);
}

FluxResult flux(const RefrigeratorParams& p, const PhotonDistribution& dist) {
  FluxResult primary = flux_laplace(p, dist);
  std::optional<double> independent;
  switch (dist.kind()) {
    case PhotonDistribution::Kind::Coherent:
      independent = coherent_flux(p, dist.parameter());
      break;
    case PhotonDistribution::Kind::Thermal:
      independent = flux_quadrature_thermal(p, dist.parameter()).j_bar;
      break;
    case PhotonDistribution::Kind::SubPoisson:
    case PhotonDistribution::Kind::SuperPoisson:
    case PhotonDistribution::Kind::Custom:
      try {
        const FluxResult series = flux_series(p, dist);
        // A referee must out-resolve the flag threshold below; a series cut
        // short by slow convergence or the table's moment-precision floor
        // reports a large estimate and is no referee.
        if (series.error_estimate <= 1e-7 * std::abs(saturation_flux(p)))
          independent = series.j_bar;
      } catch (const std::runtime_error&) {
        // outside the series' convergence region; no cross-check available
      }
      break;
  }
  if (independent) {
    primary.cross_check = std::abs(primary.j_bar - *independent);
    const double scale = std::max(std::abs(primary.j_bar), std::abs(saturation_flux(p)));
    primary.flagged = *primary.cross_check > 1e-6 * scale;
  }
  return primary;
}

const char* to_string(OperatingStatus status) {
  switch (status) {
    case OperatingStatus::Cooling:
      return "cooling";
    case OperatingStatus::Inactive:
      return "inactive";
    case OperatingStatus::Heating:
      return "heating";
  }
  return "unknown";
}

CopResult cop_from_average_flux(const RefrigeratorParams& p, double j_bar) {
  if (j_bar > 0.0) return {OperatingStatus::Cooling, cop(p)};
  if (j_bar == 0.0) return {OperatingStatus::Inactive, std::nullopt};
  return {OperatingStatus::Heating, std::nullopt};
}

}  // namespace qref

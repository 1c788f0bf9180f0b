#include "qref/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <random>
#include <utility>

#include <boost/math/special_functions/expint.hpp>

#include "qref/driving.hpp"
#include "qref/lindblad.hpp"
#include "qref/photon_stats.hpp"
#include "qref/thermal_bath.hpp"

namespace qref::oracle {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// splitmix64 finalizer: decorrelates the per-check streams even when the
// caller passes adjacent seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t check_index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (check_index + 1);
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Top 53 bits -> [0, 1); identical on every platform, unlike the
// implementation-defined std:: distributions.
double u01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& g, double lo, double hi) { return lo + (hi - lo) * u01(g); }

double log_uniform(std::mt19937_64& g, double lo, double hi) {
  return std::exp(uniform(g, std::log(lo), std::log(hi)));
}

// Random operating point with a guaranteed occupation gap (nbar_c strictly
// above nbar_h) so fluxes stay bounded away from zero.
RefrigeratorParams random_params(std::mt19937_64& g, bool detuned, double kappa_max) {
  RefrigeratorParams::Init p;
  p.omega_c = uniform(g, 0.5, 2.0);
  p.omega_h = p.omega_c + uniform(g, 0.5, 2.0);
  p.gamma = uniform(g, 0.5, 2.0);
  p.kappa = kappa_max > 0.0 ? uniform(g, 0.0, kappa_max) : 0.0;
  p.delta = detuned ? uniform(g, -1.0, 1.0) : 0.0;
  p.xi0 = uniform(g, 0.5, 2.0);
  p.nbar_c = uniform(g, 0.3, 2.0);
  p.nbar_h = p.nbar_c * uniform(g, 0.05, 0.8);
  return RefrigeratorParams(p);
}

RefrigeratorParams::Init to_init(const RefrigeratorParams& p) {
  RefrigeratorParams::Init in;
  in.omega_c = p.omega_c;
  in.omega_h = p.omega_h;
  in.gamma = p.gamma;
  in.kappa = p.kappa;
  in.delta = p.delta;
  in.xi0 = p.xi0;
  in.nbar_c = p.nbar_c;
  in.nbar_h = p.nbar_h;
  return in;
}

/// Shrinks xi0 until sigma*scale <= cap, where sigma is the per-photon
/// Laplace scale; keeps the moment series numerically well inside its
/// usable region for the cross-route comparisons.
RefrigeratorParams with_capped_scale(const RefrigeratorParams& p, double scale, double cap) {
  const double product = laplace_scale(p) * scale;
  if (product <= cap) return p;
  auto in = to_init(p);
  in.xi0 = p.xi0 * std::sqrt(cap / product);
  return RefrigeratorParams(in);
}

// Worst-discrepancy tracker over a randomized grid.
struct Worst {
  double primary = 0.0;
  double oracle = 0.0;
  double err = -1.0;

  void update(double primary_value, double oracle_value) {
    update(primary_value, oracle_value, std::abs(primary_value - oracle_value));
  }
  void update(double primary_value, double oracle_value, double discrepancy) {
    if (discrepancy > err) {
      err = discrepancy;
      primary = primary_value;
      oracle = oracle_value;
    }
  }
};

// `normalized`: the tracked discrepancy is already scale-free (relative or
// divided by a reference rate), so report it as rel_err and keep abs_err as
// the raw worst-point difference.
OracleReport finish(std::string name, const Worst& w, double tolerance, std::uint64_t derived,
                    bool extra_ok = true, bool normalized = false) {
  OracleReport r;
  r.name = std::move(name);
  r.tolerance = tolerance;
  r.seed = derived;
  if (w.err < 0.0) {  // no grid points -> nothing verified, refuse to pass
    r.pass = false;
    return r;
  }
  r.primary = w.primary;
  r.oracle = w.oracle;
  r.abs_err = normalized ? std::abs(w.primary - w.oracle) : w.err;
  r.rel_err = normalized ? w.err
                         : w.err / std::max({std::abs(w.primary), std::abs(w.oracle), 1e-300});
  r.pass = extra_ok && w.err <= tolerance;
  return r;
}

SteadyObservables solve_numeric(const RefrigeratorParams& p, const BranchDrive& d) {
  return observables_from(steady_state_numeric(build_liouvillian(p, d)));
}

}  // namespace

std::string to_line(const OracleReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "check=%s primary=%.17g oracle=%.17g abs_err=%.3g rel_err=%.3g tol=%.3g "
                "seed=%llu status=%s",
                r.name.c_str(), r.primary, r.oracle, r.abs_err, r.rel_err, r.tolerance,
                static_cast<unsigned long long>(r.seed), r.pass ? "PASS" : "FAIL");
  return buf;
}

MonteCarloEstimate monte_carlo_thermal_flux(const RefrigeratorParams& params, double nbar_th,
                                            std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("monte_carlo_thermal_flux: samples must be > 0");
  if (!(nbar_th >= 0.0))
    throw std::invalid_argument("monte_carlo_thermal_flux: nbar_th must be non-negative");
  std::mt19937_64 g(seed);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 1; i <= samples; ++i) {
    // |alpha|^2 of thermal light follows the exponential law of mean nbar;
    // inverse-CDF sampling keeps the stream platform-independent.
    const double intensity = -nbar_th * std::log1p(-u01(g));
    const double j = coherent_flux(params, intensity);
    const double d = j - mean;
    mean += d / static_cast<double>(i);
    m2 += d * (j - mean);
  }
  const double se =
      samples > 1 ? std::sqrt(m2 / (static_cast<double>(samples) * static_cast<double>(samples - 1)))
                  : 0.0;
  return {mean, se, samples, seed};
}

GridSpec GridSpec::defaults() {
  GridSpec s;
  const int points = 25;
  for (int i = 0; i < points; ++i)
    s.ordering_means.push_back(
        std::exp(std::log(0.1) + i * (std::log(100.0) - std::log(0.1)) / (points - 1)));
  return s;
}

GridSpec GridSpec::none() {
  GridSpec s;
  s.flux_grid_points = 0;
  s.population_grid_points = 0;
  s.cop_grid_points = 0;
  s.route_grid_points = 0;
  s.thermal_grid_points = 0;
  s.temperature_triples = 0;
  s.mc_samples = 0;
  return s;
}

bool GridSpec::empty() const {
  return flux_grid_points == 0 && population_grid_points == 0 && cop_grid_points == 0 &&
         route_grid_points == 0 && thermal_grid_points == 0 && temperature_triples == 0 &&
         mc_samples == 0 && ordering_means.empty();
}

OracleReport check_flux_vs_nullspace(const GridSpec& grid, std::uint64_t seed) {
  const std::uint64_t derived = derive_seed(seed, 0);
  std::mt19937_64 g(derived);
  Worst w;
  for (std::size_t i = 0; i < grid.flux_grid_points; ++i) {
    const RefrigeratorParams p = random_params(g, true, 0.0);
    const BranchDrive d(log_uniform(g, 0.05, 50.0), uniform(g, 0.0, kTwoPi));
    const double closed = coherent_flux(p, d.amplitude_sq);
    const double numeric = heat_flows_from_state(p, d, solve_numeric(p, d)).j;
    w.update(closed, numeric,
             std::abs(closed - numeric) / std::max(std::abs(closed), std::abs(numeric)));
  }
  return finish("flux_vs_nullspace", w, 1e-9, derived, true, true);
}

OracleReport check_populations_vs_nullspace(const GridSpec& grid, std::uint64_t seed) {
  const std::uint64_t derived = derive_seed(seed, 1);
  std::mt19937_64 g(derived);
  Worst w;
  for (std::size_t i = 0; i < grid.population_grid_points; ++i) {
    const RefrigeratorParams p = random_params(g, true, 0.0);
    const BranchDrive d(log_uniform(g, 0.05, 50.0), uniform(g, 0.0, kTwoPi));
    const SteadyObservables closed = steady_state_analytic(p, d);
    const SteadyObservables numeric = solve_numeric(p, d);
    w.update(closed.pop_1, numeric.pop_1);
    w.update(closed.pop_2, numeric.pop_2);
    w.update(closed.pop_g, numeric.pop_g);
    w.update(closed.tau_e_plus.real(), numeric.tau_e_plus.real(),
             std::abs(closed.tau_e_plus - numeric.tau_e_plus));
  }
  return finish("populations_vs_nullspace", w, 1e-9, derived);
}

OracleReport check_cop_universality(const GridSpec& grid, std::uint64_t seed) {
  const std::uint64_t derived = derive_seed(seed, 2);
  std::mt19937_64 g(derived);
  Worst w;
  for (std::size_t i = 0; i < grid.cop_grid_points; ++i) {
    const RefrigeratorParams p = random_params(g, true, 0.0);
    const double phase = uniform(g, 0.0, kTwoPi);
    // Average the numerically solved branch currents over a random finite
    // photon-number mixture; the cold-per-input ratio must not budge.
    const int support = 4 + static_cast<int>(u01(g) * 5.0);
    std::vector<double> weight(support);
    double total = 0.0;
    for (double& x : weight) total += (x = 0.02 + u01(g));
    double qc_bar = 0.0, qe_bar = 0.0;
    for (int n = 0; n < support; ++n) {
      const BranchDrive d(static_cast<double>(n), phase);
      const HeatCurrents flows = heat_flows_from_state(p, d, solve_numeric(p, d));
      qc_bar += weight[n] / total * flows.q_c;
      qe_bar += weight[n] / total * flows.q_e;
    }
    w.update(qc_bar / qe_bar, cop(p));
  }
  return finish("cop_universality", w, 1e-8, derived);
}

OracleReport check_energy_closure(const GridSpec& grid, std::uint64_t seed) {
  const std::uint64_t derived = derive_seed(seed, 3);
  std::mt19937_64 g(derived);
  Worst w;
  for (std::size_t i = 0; i < grid.flux_grid_points; ++i) {
    const RefrigeratorParams p = random_params(g, true, 1.0);
    const BranchDrive d(log_uniform(g, 0.05, 50.0), uniform(g, 0.0, kTwoPi));
    const HeatCurrents flows = heat_flows_from_state(p, d, solve_numeric(p, d));
    // Normalize by a gross rate scale rather than the currents themselves,
    // which cancel near the inactive point.
    const double scale = p.omega_h * p.gamma * (1.0 + p.nbar_c + p.nbar_h);
    w.update((flows.q_c + flows.q_h + flows.q_e) / scale, 0.0);
  }
  return finish("energy_closure", w, 1e-10, derived, true, true);
}

OracleReport check_route_triangle(const GridSpec& grid, std::uint64_t seed) {
  const std::uint64_t derived = derive_seed(seed, 4);
  std::mt19937_64 g(derived);
  Worst w;
  bool routes_ok = true;
  for (std::size_t i = 0; i < grid.route_grid_points; ++i) {
    RefrigeratorParams p = random_params(g, true, 0.0);
    // Plateau flux depends only on occupations, so the xi0 capping below
    // leaves this normalization reference untouched.
    const double s_ref = std::abs(saturation_flux(p));
    const auto compare = [&](double route_a, double route_b) {
      w.update(route_a, route_b, std::abs(route_a - route_b) / s_ref);
    };
    try {
      switch (i % 5) {
        case 0: {  // delta intensity: the transform must collapse exactly
          const double lam = log_uniform(g, 0.1, 50.0);
          compare(flux_laplace(p, PhotonDistribution::coherent(lam)).j_bar,
                  coherent_flux(p, lam));
          break;
        }
        case 1: {  // exponential intensity: transform vs direct average
          const double nbar = log_uniform(g, 0.05, 50.0);
          compare(flux_laplace(p, PhotonDistribution::thermal(nbar)).j_bar,
                  flux_quadrature_thermal(p, nbar).j_bar);
          break;
        }
        case 2: {  // narrowed statistics: transform vs moment series
          const double m = log_uniform(g, 0.1, 20.0);
          p = with_capped_scale(p, 4.0 * m * m, 1.2);  // series terms ~ (sigma*lambda/4)^k/k!
          const auto dist = PhotonDistribution::sub_poisson(
              lambda_for_mean(PhotonDistribution::Kind::SubPoisson, m));
          compare(flux_laplace(p, dist).j_bar, flux_series(p, dist).j_bar);
          break;
        }
        case 3: {  // broadened statistics: transform vs moment series
          const double m = log_uniform(g, 0.1, 20.0);
          const double lam = lambda_for_mean(PhotonDistribution::Kind::SuperPoisson, m);
          p = with_capped_scale(p, lam, 0.5);  // geometric terms ~ (sigma*lambda)^k
          const auto dist = PhotonDistribution::super_poisson(lam);
          compare(flux_laplace(p, dist).j_bar, flux_series(p, dist).j_bar);
          break;
        }
        default: {  // finite table: both routes are exact
          const int support = 3 + static_cast<int>(u01(g) * 8.0);
          std::vector<double> pn(support);
          double total = 0.0;
          for (double& x : pn) total += (x = 0.01 + u01(g));
          for (double& x : pn) x /= total;
          p = with_capped_scale(p, static_cast<double>(support - 1), 0.5);
          const auto dist = PhotonDistribution::custom(pn);
          compare(flux_laplace(p, dist).j_bar, flux_series(p, dist, support + 2).j_bar);
          break;
        }
      }
    } catch (const std::runtime_error&) {
      routes_ok = false;  // a capped-scale series leg must never diverge
    }
  }
  return finish("route_triangle", w, 1e-8, derived, routes_ok, true);
}

OracleReport check_laplace_vs_closed_form(const GridSpec& grid, std::uint64_t seed) {
  const std::uint64_t derived = derive_seed(seed, 5);
  std::mt19937_64 g(derived);
  Worst w;
  for (std::size_t i = 0; i < grid.route_grid_points; ++i) {
    const RefrigeratorParams p = random_params(g, true, 0.0);
    const double sigma = laplace_scale(p);
    // Keep 1/(sigma*nbar) <= 400 so exp(x) E1(x) stays in range.
    const double nbar = log_uniform(g, std::max(0.05, 1.0 / (400.0 * sigma)), 50.0);
    const double x = 1.0 / (sigma * nbar);
    // integral_0^inf e^{-s}/(1 + sigma*nbar*s) ds = x e^x E1(x), an
    // independent special-function route to the exponential-intensity flux.
    const double integral = x * std::exp(x) * boost::math::expint(1, x);
    const double via_transform = flux_laplace(p, PhotonDistribution::thermal(nbar)).j_bar;
    const double via_expint = saturation_flux(p) * (1.0 - integral);
    w.update(via_transform, via_expint,
             std::abs(via_transform - via_expint) / std::abs(saturation_flux(p)));
  }
  return finish("laplace_vs_closed_form", w, 1e-8, derived, true, true);
}

OracleReport check_flux_ordering(const GridSpec& grid, std::uint64_t seed) {
  const std::uint64_t derived = derive_seed(seed, 6);
  const RefrigeratorParams p;
  using Kind = PhotonDistribution::Kind;
  double min_margin = std::numeric_limits<double>::infinity();
  double at_mean = 0.0;
  bool flagged = false;
  for (const double m : grid.ordering_means) {
    const auto at = [&](Kind kind) {
      const double lam = lambda_for_mean(kind, m);
      const auto dist = kind == Kind::Coherent     ? PhotonDistribution::coherent(lam)
                        : kind == Kind::Thermal    ? PhotonDistribution::thermal(lam)
                        : kind == Kind::SubPoisson ? PhotonDistribution::sub_poisson(lam)
                                                   : PhotonDistribution::super_poisson(lam);
      const FluxResult r = flux(p, dist);
      flagged = flagged || r.flagged;
      return r.j_bar;
    };
    const double sub = at(Kind::SubPoisson);
    const double coh = at(Kind::Coherent);
    const double sup = at(Kind::SuperPoisson);
    const double th = at(Kind::Thermal);
    // Noisier drive -> lower flux, strictly, at every matched mean.
    const std::array<double, 3> gaps = {sub - coh, coh - sup, sup - th};
    for (const double gap : gaps) {
      const double margin = gap / std::max(std::abs(coh), 1e-300);
      if (margin < min_margin) {
        min_margin = margin;
        at_mean = m;
      }
    }
  }
  OracleReport r;
  r.name = "flux_ordering";
  r.seed = derived;
  r.tolerance = 1e-13;
  if (grid.ordering_means.empty()) return r;  // nothing verified
  r.primary = min_margin;  // smallest normalized gap across the mean grid
  r.oracle = at_mean;      // mean photon number where it occurs
  r.pass = !flagged && min_margin > r.tolerance;
  return r;
}

OracleReport check_convergence_gaps(const GridSpec& grid, std::uint64_t seed) {
  const std::uint64_t derived = derive_seed(seed, 7);
  (void)grid;  // fixed scan: the claims are about specific large means
  const RefrigeratorParams p;
  using Kind = PhotonDistribution::Kind;
  const std::array<double, 7> means = {10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0};

  // Relative offsets from the equal-mean delta-intensity flux: the narrowed
  // and broadened statistics must collapse onto it monotonically while the
  // exponential-intensity offset stays finite.
  bool monotone = true, thermal_floor = true;
  double prev_sub = std::numeric_limits<double>::infinity();
  double prev_super = std::numeric_limits<double>::infinity();
  double gap_thermal_100 = 0.0, gap_super_100 = 0.0;
  for (const double m : means) {
    const auto at = [&](Kind kind) {
      const double lam = lambda_for_mean(kind, m);
      const auto dist = kind == Kind::Coherent     ? PhotonDistribution::coherent(lam)
                        : kind == Kind::Thermal    ? PhotonDistribution::thermal(lam)
                        : kind == Kind::SubPoisson ? PhotonDistribution::sub_poisson(lam)
                                                   : PhotonDistribution::super_poisson(lam);
      return flux_laplace(p, dist).j_bar;
    };
    const double j_coh = at(Kind::Coherent);
    const double g_sub = std::abs(at(Kind::SubPoisson) - j_coh) / std::abs(j_coh);
    const double g_super = std::abs(at(Kind::SuperPoisson) - j_coh) / std::abs(j_coh);
    const double g_thermal = std::abs(at(Kind::Thermal) - j_coh) / std::abs(j_coh);
    monotone = monotone && g_sub < prev_sub && g_super < prev_super;
    prev_sub = g_sub;
    prev_super = g_super;
    thermal_floor = thermal_floor && g_thermal >= 1e-3;
    if (m == 100.0) {
      gap_thermal_100 = g_thermal * std::abs(j_coh);
      gap_super_100 = g_super * std::abs(j_coh);
    }
  }
  OracleReport r;
  r.name = "convergence_gaps";
  r.seed = derived;
  r.primary = gap_thermal_100 / gap_super_100;  // slow-vs-fast approach ratio
  r.oracle = 11899.812394185408;                // 40-digit quadrature reference
  r.abs_err = std::abs(r.primary - r.oracle);
  r.rel_err = r.abs_err / r.oracle;
  r.tolerance = 1e-4;
  r.pass = monotone && thermal_floor && r.primary >= 10.0 && r.rel_err <= r.tolerance;
  return r;
}

OracleReport check_photon_statistics(const GridSpec& grid, std::uint64_t seed) {
  const std::uint64_t derived = derive_seed(seed, 8);
  std::mt19937_64 g(derived);
  using Kind = PhotonDistribution::Kind;
  Worst w_var;
  bool means_ok = true;
  for (std::size_t i = 0; i < grid.route_grid_points; ++i) {
    const Kind kind = static_cast<Kind>(i % 4);
    const double m = log_uniform(g, 0.1, 30.0);
    const double lam = lambda_for_mean(kind, m);
    const auto dist = kind == Kind::Coherent     ? PhotonDistribution::coherent(lam)
                      : kind == Kind::Thermal    ? PhotonDistribution::thermal(lam)
                      : kind == Kind::SubPoisson ? PhotonDistribution::sub_poisson(lam)
                                                 : PhotonDistribution::super_poisson(lam);
    // Round trip: table mean (summed probabilities) against the closed-form
    // inversion target.
    means_ok = means_ok && std::abs(dist.mean() - m) <= 1e-9 * m;

    double var_expected;
    if (kind == Kind::Coherent) {
      var_expected = m;
    } else if (kind == Kind::Thermal) {
      var_expected = m + m * m;
    } else {
      // Second factorial moment from Richardson-extrapolated central
      // differences of the closed-form generating function; the step keeps
      // rounding noise and the residual h^4 truncation balanced.
      const double h = std::min(0.2, 0.012 / std::max(m, 0.05));
      const auto d2 = [&dist](double step) {
        return (dist.generating_function(step) - 2.0 + dist.generating_function(-step)) /
               (step * step);
      };
      const double m2 = (4.0 * d2(0.5 * h) - d2(h)) / 3.0;
      var_expected = m2 + m - m * m;
    }
    w_var.update(dist.variance(), var_expected,
                 std::abs(dist.variance() - var_expected) /
                     std::max(std::abs(var_expected), 1e-300));
  }
  return finish("photon_statistics", w_var, 1e-6, derived, means_ok, true);
}

OracleReport check_generating_function_sums(const GridSpec& grid, std::uint64_t seed) {
  const std::uint64_t derived = derive_seed(seed, 9);
  std::mt19937_64 g(derived);
  using Kind = PhotonDistribution::Kind;
  Worst w;
  for (std::size_t i = 0; i < grid.route_grid_points; ++i) {
    const Kind kind = static_cast<Kind>(i % 4);
    const double lam = kind == Kind::SubPoisson ? log_uniform(g, 0.1, 1e4)
                                                : log_uniform(g, 0.1, 200.0);
    const auto dist = kind == Kind::Coherent     ? PhotonDistribution::coherent(lam)
                      : kind == Kind::Thermal    ? PhotonDistribution::thermal(lam)
                      : kind == Kind::SubPoisson ? PhotonDistribution::sub_poisson(lam)
                                                 : PhotonDistribution::super_poisson(lam);
    // On 0 <= s <= 1 every term of sum P_n (1-s)^n is non-negative, so the
    // direct table sum is itself oracle-grade.
    const double s = u01(g);
    double direct = 0.0, power = 1.0;
    for (const double pn : dist.probabilities()) {
      direct += pn * power;
      power *= 1.0 - s;
    }
    const double closed = dist.generating_function(s);
    w.update(closed, direct, std::abs(closed - direct) / direct);
  }
  return finish("generating_function_sums", w, 1e-10, derived, true, true);
}

OracleReport check_thermal_field_threshold(const GridSpec& grid, std::uint64_t seed) {
  const std::uint64_t derived = derive_seed(seed, 10);
  std::mt19937_64 g(derived);
  Worst w;
  bool signs_ok = true;
  for (std::size_t i = 0; i < grid.thermal_grid_points; ++i) {
    RefrigeratorParams p = random_params(g, false, 0.0);
    auto in = to_init(p);
    in.kappa = uniform(g, 0.05, 2.0);
    if (i % 3 == 2) std::swap(in.nbar_c, in.nbar_h);  // heating-only ordering
    p = RefrigeratorParams(in);

    const auto threshold = cooling_threshold(p.nbar_c, p.nbar_h);
    if (p.nbar_c > p.nbar_h) {
      if (!threshold) {
        signs_ok = false;
        continue;
      }
      const double below = thermal_field_flux(ThermalFieldParams(p, *threshold * (1.0 - 1e-6)));
      const double above = thermal_field_flux(ThermalFieldParams(p, *threshold * (1.0 + 1e-6)));
      const double at = thermal_field_flux(ThermalFieldParams(p, *threshold));
      signs_ok = signs_ok && below < 0.0 && above > 0.0;
      w.update(at / p.kappa, 0.0);  // crossing must be exact, not approximate
    } else {
      signs_ok = signs_ok && !threshold;
      for (const double nbar_e : {0.0, 1.0, 10.0, 100.0})
        signs_ok = signs_ok && thermal_field_flux(ThermalFieldParams(p, nbar_e)) < 0.0;
      w.update(0.0, 0.0);
    }
  }
  return finish("thermal_field_threshold", w, 1e-13, derived, signs_ok, true);
}

OracleReport check_thermal_field_vs_nullspace(const GridSpec& grid, std::uint64_t seed) {
  const std::uint64_t derived = derive_seed(seed, 11);
  std::mt19937_64 g(derived);
  Worst w;
  for (std::size_t i = 0; i < grid.thermal_grid_points; ++i) {
    RefrigeratorParams p = random_params(g, false, 0.0);
    auto in = to_init(p);
    in.kappa = uniform(g, 0.05, 2.0);
    p = RefrigeratorParams(in);
    const double nbar_e = i % 5 == 0 ? 0.0 : log_uniform(g, 1e-3, 30.0);
    const ThermalFieldParams tf(p, nbar_e);

    const SteadyObservables obs =
        observables_from(steady_state_numeric(build_thermal_field_liouvillian(tf)));
    const double j_cold = p.gamma * (p.nbar_c * obs.pop_g - (p.nbar_c + 1.0) * obs.pop_1);
    const double j_em = p.kappa * (nbar_e * obs.pop_1 - (nbar_e + 1.0) * obs.pop_2);
    const SteadyObservables closed = steady_populations_thermal(tf);
    const double j_closed = thermal_field_flux(tf);

    w.update(j_closed, j_cold);
    w.update(j_closed, j_em);  // the EM channel must carry the same flux
    w.update(closed.pop_1, obs.pop_1);
    w.update(closed.pop_2, obs.pop_2);
  }
  return finish("thermal_field_vs_nullspace", w, 1e-10, derived);
}

OracleReport check_thermal_cop_bound(const GridSpec& grid, std::uint64_t seed) {
  const std::uint64_t derived = derive_seed(seed, 12);
  std::mt19937_64 g(derived);
  Worst w_identity;
  double worst_margin = -std::numeric_limits<double>::infinity();
  std::size_t attempted = 0;
  bool cooling_ok = true;
  for (std::size_t i = 0; i < grid.temperature_triples; ++i) {
    RefrigeratorParams::Init in;
    in.omega_c = uniform(g, 0.5, 2.0);
    in.omega_h = in.omega_c + uniform(g, 0.5, 2.0);
    in.kappa = uniform(g, 0.05, 1.0);
    const double t_c = uniform(g, 0.3, 2.0);
    const double t_h = t_c * (1.0 + uniform(g, 0.05, 2.0));
    in.nbar_c = planck_occupation(in.omega_c, t_c);
    in.nbar_h = planck_occupation(in.omega_h, t_h);
    if (!(in.nbar_c > in.nbar_h)) continue;  // not coolable at any drive temperature
    ++attempted;
    const RefrigeratorParams p{in};
    const double omega_d = p.omega_drive();

    // At the flux-reversal drive occupation the cycle is reversible, so the
    // temperature form of the bound must land exactly on omega_c/omega_d.
    const double nbar_e_rev = *cooling_threshold(p.nbar_c, p.nbar_h);
    const double t_e_rev = occupation_to_temperature(omega_d, nbar_e_rev);
    w_identity.update(cop_bound_thermal(t_c, t_h, t_e_rev), p.omega_c / omega_d);

    // Above reversal the machine cools with a COP strictly inside the bound.
    const double t_e = t_e_rev * uniform(g, 1.05, 20.0);
    const ThermalFieldParams tf = ThermalFieldParams::from_temperature(p, t_e);
    cooling_ok = cooling_ok && thermal_field_flux(tf) > 0.0;
    worst_margin = std::max(worst_margin, cop(p) - cop_bound_thermal(t_c, t_h, t_e));
  }
  const bool extra =
      cooling_ok && attempted >= std::max<std::size_t>(1, grid.temperature_triples / 4) &&
      worst_margin < 0.0;
  return finish("thermal_cop_bound", w_identity, 1e-10, derived, extra);
}

OracleReport check_monte_carlo_thermal(const GridSpec& grid, std::uint64_t seed) {
  const std::uint64_t derived = derive_seed(seed, 13);
  std::mt19937_64 g(derived);
  OracleReport r;
  r.name = "monte_carlo_thermal";
  r.seed = derived;
  if (grid.mc_samples < 1000) return r;  // too few samples to claim anything

  double worst_sigmas = -1.0;
  for (int point = 0; point < 2; ++point) {
    const RefrigeratorParams p = point == 0 ? RefrigeratorParams{} : random_params(g, true, 0.0);
    const double nbar = point == 0 ? 10.0 : log_uniform(g, 0.5, 20.0);
    const double quad = flux_quadrature_thermal(p, nbar).j_bar;
    const MonteCarloEstimate mc = monte_carlo_thermal_flux(p, nbar, grid.mc_samples, g());
    const double sigmas = std::abs(mc.mean - quad) / std::max(mc.std_error, 1e-300);
    if (sigmas > worst_sigmas) {
      worst_sigmas = sigmas;
      r.primary = mc.mean;
      r.oracle = quad;
      r.abs_err = std::abs(mc.mean - quad);
      r.rel_err = r.abs_err / std::max(std::abs(quad), 1e-300);
      r.tolerance = 5.0 * mc.std_error;  // five-sigma acceptance band
    }
  }
  r.pass = r.abs_err <= r.tolerance;
  return r;
}

OracleReport check_finite_kappa_cop(std::uint64_t seed) {
  const std::uint64_t derived = derive_seed(seed, 14);
  RefrigeratorParams::Init in;
  in.kappa = 0.1;
  const RefrigeratorParams p{in};
  const BranchDrive d(10.0);
  const SteadyObservables obs = solve_numeric(p, d);
  const HeatCurrents flows = heat_flows_from_state(p, d, obs);
  const double input = drive_power(p, d, obs);

  OracleReport r;
  r.name = "finite_kappa_cop";
  r.seed = derived;
  r.primary = flows.q_c / input;  // work-referenced performance
  r.oracle = cop(p);              // lossless ceiling
  r.abs_err = r.oracle - r.primary;
  r.rel_err = r.abs_err / r.oracle;
  r.tolerance = 1e-9;  // minimum degradation the decay channel must cause
  r.pass = flows.q_c > 0.0 && input > 0.0 && r.abs_err > r.tolerance;
  return r;
}

OracleReport check_flux_saturation(const RefrigeratorParams& params, double expected_saturation,
                                   double rel_tolerance) {
  // Strong drive pins the branch flux at its plateau; measure it from the
  // full numeric solve rather than any closed form.
  const BranchDrive d(1e5);
  const double j_numeric = heat_flows_from_state(params, d, solve_numeric(params, d)).j;
  OracleReport r;
  r.name = "flux_saturation_limit";
  r.primary = j_numeric;
  r.oracle = expected_saturation;
  r.abs_err = std::abs(j_numeric - expected_saturation);
  r.rel_err = r.abs_err / std::max(std::abs(expected_saturation), 1e-300);
  r.tolerance = rel_tolerance;
  r.pass = r.rel_err <= rel_tolerance;
  r.seed = 0;
  return r;
}

std::vector<OracleReport> run_equivalence_suite(const GridSpec& grid, std::uint64_t seed) {
  if (grid.empty()) return {};
  using Task = std::function<OracleReport()>;
  const std::vector<Task> tasks = {
      [&] { return check_flux_vs_nullspace(grid, seed); },
      [&] { return check_populations_vs_nullspace(grid, seed); },
      [&] { return check_cop_universality(grid, seed); },
      [&] { return check_energy_closure(grid, seed); },
      [&] { return check_route_triangle(grid, seed); },
      [&] { return check_laplace_vs_closed_form(grid, seed); },
      [&] { return check_flux_ordering(grid, seed); },
      [&] { return check_convergence_gaps(grid, seed); },
      [&] { return check_photon_statistics(grid, seed); },
      [&] { return check_generating_function_sums(grid, seed); },
      [&] { return check_thermal_field_threshold(grid, seed); },
      [&] { return check_thermal_field_vs_nullspace(grid, seed); },
      [&] { return check_thermal_cop_bound(grid, seed); },
      [&] { return check_monte_carlo_thermal(grid, seed); },
      [&] { return check_finite_kappa_cop(seed); },
      [&] {
        const RefrigeratorParams defaults;
        return check_flux_saturation(defaults, saturation_flux(defaults));
      },
  };
  std::vector<std::future<OracleReport>> futures;
  futures.reserve(tasks.size());
  for (const Task& task : tasks) futures.push_back(std::async(std::launch::async, task));
  std::vector<OracleReport> reports;
  reports.reserve(tasks.size());
  for (auto& f : futures) reports.push_back(f.get());
  return reports;
}

bool all_passed(const std::vector<OracleReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const OracleReport& r) { return r.pass; });
}

}  // namespace qref::oracle

#include "qref/photon_stats.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qref {

namespace {

// Factorial moments weight the table tail by n(n-1)...; at a mean of order
// one the n^2 amplification turns a 1e-14 tail into a 1e-12 moment error,
// so aim low enough that even weighted tails stay below rounding noise.
constexpr double kTailTarget = 1e-18;

// log(cosh(sqrt(l))) for l >= 0 without overflowing cosh:
// cosh x = e^x (1 + e^{-2x})/2.
double log_z_minus_nonneg(double lam) {
  const double x = std::sqrt(lam);
  return x + std::log1p(std::exp(-2.0 * x)) - std::numbers::ln2;
}

// log(z_plus(l)); for large l the direct form overflows, so switch to
// l - 2 log(l) + log1p(-(l+1)e^{-l}).
double log_z_plus(double lam) {
  if (lam > 36.0) return lam - 2.0 * std::log(lam) + std::log1p(-(lam + 1.0) * std::exp(-lam));
  return std::log(z_plus(lam));
}

// P_{n+1}/P_n for the built-in kinds.
double step_ratio(PhotonDistribution::Kind kind, double lam, double n) {
  switch (kind) {
    case PhotonDistribution::Kind::Coherent:
      return lam / (n + 1.0);
    case PhotonDistribution::Kind::Thermal:
      return lam / (1.0 + lam);
    case PhotonDistribution::Kind::SubPoisson:
      return lam / ((2.0 * n + 2.0) * (2.0 * n + 1.0));
    case PhotonDistribution::Kind::SuperPoisson:
      return lam / (n + 3.0);
    case PhotonDistribution::Kind::Custom:
      break;
  }
  throw std::logic_error("step_ratio: custom kind has no recurrence");
}

// log of the unnormalized weight; normalization happens once the table is
// assembled, keeping every kind safe at large parameters.
double log_weight(PhotonDistribution::Kind kind, double lam, int n) {
  switch (kind) {
    case PhotonDistribution::Kind::Coherent:
      return n * std::log(lam) - std::lgamma(n + 1.0);
    case PhotonDistribution::Kind::Thermal:
      return n * (std::log(lam) - std::log1p(lam));
    case PhotonDistribution::Kind::SubPoisson:
      return n * std::log(lam) - std::lgamma(2.0 * n + 1.0);
    case PhotonDistribution::Kind::SuperPoisson:
      return n * std::log(lam) - std::lgamma(n + 3.0);
    case PhotonDistribution::Kind::Custom:
      break;
  }
  throw std::logic_error("log_weight: custom kind has no recurrence");
}

double rough_mean(PhotonDistribution::Kind kind, double lam) {
  switch (kind) {
    case PhotonDistribution::Kind::Coherent:
    case PhotonDistribution::Kind::Thermal:
      return lam;
    case PhotonDistribution::Kind::SubPoisson:
      return 0.5 * std::sqrt(lam) + 1.0;
    default:
      return lam + 3.0;
  }
}

// Closed-form means used by the bisection inverter. Series/asymptotic
// branches keep them stable from lambda -> 0 up to arguments where exp
// would overflow.
double sub_poisson_mean(double lam) {
  if (lam == 0.0) return 0.0;
  const double r = std::sqrt(lam);
  return 0.5 * r * std::tanh(r);
}

double super_poisson_mean(double lam) {
  if (lam == 0.0) return 0.0;
  if (lam < 0.5) {
    // lam * Z'/Z with both factors from their Taylor series.
    double z = 0.0, zp = 0.0, inv_fact = 0.5, power = 1.0;  // 1/(k+2)!, lam^k
    for (int k = 0; k <= 20; ++k) {
      z += inv_fact * power;
      if (k >= 1) zp += k * inv_fact * power / lam;
      inv_fact /= (k + 3.0);
      power *= lam;
    }
    return lam * zp / z;
  }
  if (lam > 500.0) return lam - 2.0;  // corrections are O(lam^3 e^{-lam})
  // ((lam-2) e^lam + lam + 2)/(e^lam - lam - 1) written via expm1.
  const double em = std::expm1(lam);
  return (em * (lam - 2.0) + 2.0 * lam) / (em - lam);
}

}  // namespace

double z_minus(double lambda_arg) {
  if (lambda_arg >= 0.0) return std::cosh(std::sqrt(lambda_arg));
  return std::cos(std::sqrt(-lambda_arg));
}

double z_plus(double lambda_arg) {
  if (std::abs(lambda_arg) < 0.5) {
    // Taylor series sum_k lam^k/(k+2)!; the direct form below loses digits
    // to cancellation anywhere near the removable singularity.
    double sum = 0.0, term = 0.5;  // k = 0 term, 1/2!
    for (int k = 0; k <= 16; ++k) {
      sum += term;
      term *= lambda_arg / (k + 3.0);
    }
    return sum;
  }
  return (std::expm1(lambda_arg) - lambda_arg) / (lambda_arg * lambda_arg);
}

PhotonDistribution::PhotonDistribution(Kind kind, double param) : kind_(kind), param_(param) {}

PhotonDistribution PhotonDistribution::coherent(double nbar) {
  if (!(nbar >= 0.0)) throw std::invalid_argument("coherent: nbar must be non-negative");
  PhotonDistribution d(Kind::Coherent, nbar);
  d.build_table();
  return d;
}

PhotonDistribution PhotonDistribution::thermal(double nbar) {
  if (!(nbar >= 0.0)) throw std::invalid_argument("thermal: nbar must be non-negative");
  PhotonDistribution d(Kind::Thermal, nbar);
  d.build_table();
  return d;
}

PhotonDistribution PhotonDistribution::sub_poisson(double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("sub_poisson: lambda must be non-negative");
  PhotonDistribution d(Kind::SubPoisson, lambda);
  d.build_table();
  return d;
}

PhotonDistribution PhotonDistribution::super_poisson(double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("super_poisson: lambda must be non-negative");
  PhotonDistribution d(Kind::SuperPoisson, lambda);
  d.build_table();
  return d;
}

PhotonDistribution PhotonDistribution::custom(std::vector<double> pn) {
  if (pn.empty()) throw std::invalid_argument("custom: probability table is empty");
  for (std::size_t i = 0; i < pn.size(); ++i)
    if (!(pn[i] >= 0.0) || !std::isfinite(pn[i]))
      throw std::invalid_argument("custom: P_" + std::to_string(i) + " = " +
                                  std::to_string(pn[i]) + " is not a probability");
  const double total = std::accumulate(pn.begin(), pn.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-6)
    throw std::invalid_argument("custom: probabilities sum to " + std::to_string(total) +
                                ", more than 1e-6 away from 1");
  for (double& p : pn) p /= total;
  PhotonDistribution d(Kind::Custom, 0.0);
  d.pn_ = std::move(pn);
  d.tail_mass_ = 0.0;
  return d;
}

void PhotonDistribution::build_table() {
  if (param_ == 0.0) {  // vacuum for every built-in kind
    pn_ = {1.0};
    tail_mass_ = 0.0;
    return;
  }
  int n_max = std::max(50, static_cast<int>(10.0 * rough_mean(kind_, param_)) + 1);
  for (;;) {
    std::vector<double> logw(n_max + 1);
    double peak = -std::numeric_limits<double>::infinity();
    for (int n = 0; n <= n_max; ++n) {
      logw[n] = log_weight(kind_, param_, n);
      peak = std::max(peak, logw[n]);
    }
    pn_.assign(n_max + 1, 0.0);
    double total = 0.0;
    for (int n = 0; n <= n_max; ++n) total += (pn_[n] = std::exp(logw[n] - peak));

    const double r = step_ratio(kind_, param_, n_max);
    if (r < 1.0) {
      const double tail = pn_[n_max] * r / (1.0 - r);
      if (tail <= kTailTarget * total) {
        for (double& p : pn_) p /= total;
        tail_mass_ = tail / total;
        return;
      }
    }
    n_max *= 2;
    if (n_max > (1 << 22))
      throw std::runtime_error("PhotonDistribution: truncation bound not reachable");
  }
}

double PhotonDistribution::moment_sum(int k, double& tail_ratio) const {
  const int n_max = static_cast<int>(pn_.size()) - 1;
  double sum = 0.0;
  double ff_last = 0.0;  // n(n-1)...(n-k+1) at n = n_max
  for (int n = k; n <= n_max; ++n) {
    double ff = 1.0;
    for (int j = 0; j < k; ++j) ff *= static_cast<double>(n - j);
    sum += pn_[n] * ff;
    ff_last = ff;
  }
  if (kind_ == Kind::Custom || param_ == 0.0) {  // finite support: sum is exact
    tail_ratio = 0.0;
    return sum;
  }
  // Bound the truncated continuation: beyond the table each term picks up a
  // factor step_ratio * (n+1)/(n+1-k), decreasing in n for every kind, so a
  // geometric majorant at n = n_max covers the whole tail. A table shorter
  // than k holds no information about the moment at all.
  double tail_bound = std::numeric_limits<double>::infinity();
  if (n_max >= k) {
    const double growth =
        step_ratio(kind_, param_, n_max) * (n_max + 1.0) / (n_max + 1.0 - k);
    if (growth < 1.0) tail_bound = pn_[n_max] * ff_last * growth / (1.0 - growth);
  }
  tail_ratio = tail_bound / std::max(sum, std::numeric_limits<double>::min());
  return sum;
}

double PhotonDistribution::factorial_moment(int k) const {
  if (k < 1) throw std::invalid_argument("factorial_moment: k must be >= 1");
  double tail_ratio = 0.0;
  const double sum = moment_sum(k, tail_ratio);
  if (!std::isfinite(sum))
    throw std::runtime_error("factorial_moment: overflow at k = " + std::to_string(k));
  if (!(tail_ratio <= 1e-10))
    throw std::runtime_error("factorial_moment: truncated tail dominates at k = " +
                             std::to_string(k) + "; the moment is precision-limited");
  return sum;
}

bool PhotonDistribution::factorial_moment_reliable(int k) const {
  if (k < 1) throw std::invalid_argument("factorial_moment_reliable: k must be >= 1");
  double tail_ratio = 0.0;
  const double sum = moment_sum(k, tail_ratio);
  return std::isfinite(sum) && tail_ratio <= 1e-10;
}

double PhotonDistribution::mean() const { return factorial_moment(1); }

double PhotonDistribution::variance() const {
  const double m = mean();
  return factorial_moment(2) + m - m * m;
}

double PhotonDistribution::mandel_q() const {
  const double m = mean();
  if (!(m > 0.0)) throw std::domain_error("mandel_q: undefined at zero mean");
  return variance() / m - 1.0;
}

double PhotonDistribution::gk(int k) const {
  const double m = mean();
  if (!(m > 0.0)) throw std::domain_error("gk: undefined at zero mean photon number");
  return factorial_moment(k) / std::pow(m, k);
}

double PhotonDistribution::generating_function(double s_tilde) const {
  switch (kind_) {
    case Kind::Coherent:
      return std::exp(-s_tilde * param_);
    case Kind::Thermal: {
      if (param_ == 0.0) return 1.0;
      const double denom = 1.0 + param_ * s_tilde;
      if (!(denom > 0.0))
        throw std::domain_error("generating_function: thermal pole at s = -1/nbar reached");
      return 1.0 / denom;
    }
    case Kind::SubPoisson: {
      if (param_ == 0.0) return 1.0;
      const double arg = param_ * (1.0 - s_tilde);
      // Ratio of normalizers evaluated in the log domain; for negative
      // continuation arguments the numerator is an O(1) cosine.
      if (arg >= 0.0) return std::exp(log_z_minus_nonneg(arg) - log_z_minus_nonneg(param_));
      return std::cos(std::sqrt(-arg)) * std::exp(-log_z_minus_nonneg(param_));
    }
    case Kind::SuperPoisson: {
      if (param_ == 0.0) return 1.0;
      const double arg = param_ * (1.0 - s_tilde);
      if (arg > 36.0) return std::exp(log_z_plus(arg) - log_z_plus(param_));
      return z_plus(arg) * std::exp(-log_z_plus(param_));
    }
    case Kind::Custom: {
      double sum = 0.0, power = 1.0;
      const double base = 1.0 - s_tilde;
      for (double p : pn_) {
        sum += p * power;
        power *= base;
      }
      if (!std::isfinite(sum))
        throw std::runtime_error(
            "generating_function: custom table overflows at this argument");
      return sum;
    }
  }
  throw std::logic_error("generating_function: unreachable");
}

double lambda_for_mean(PhotonDistribution::Kind kind, double target_mean) {
  if (!(target_mean > 0.0))
    throw std::domain_error("lambda_for_mean: target mean must be positive");
  using Kind = PhotonDistribution::Kind;
  if (kind == Kind::Coherent || kind == Kind::Thermal) return target_mean;
  if (kind == Kind::Custom)
    throw std::invalid_argument("lambda_for_mean: custom tables have no parameter");

  const auto mean_of = (kind == Kind::SubPoisson) ? sub_poisson_mean : super_poisson_mean;
  double lo = 0.0, hi = 1.0;
  while (mean_of(hi) < target_mean) {
    hi *= 2.0;
    if (hi > 1e300) throw std::domain_error("lambda_for_mean: target mean out of range");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mean_of(mid) < target_mean ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qref

#pragma once

#include <vector>

// Photon-number statistics of the driving light: number distributions,
// factorial moments and g^(k) coherences, and the normal-order generating
// function F(s) = sum_n P_n (1-s)^n used by the Laplace flux route.
namespace qref {

/// Normalizer of the sub-Poissonian family: cosh(sqrt(l)) for l >= 0,
/// continued to cos(sqrt(-l)) for l < 0; continuous at 0 with value 1.
double z_minus(double lambda_arg);

/// Normalizer of the super-Poissonian family: (exp(l) - l - 1)/l^2 with the
/// removable singularity at 0 evaluated as 1/2. A truncated Taylor series is
/// used for |l| < 0.5 where the direct form loses digits to cancellation.
double z_plus(double lambda_arg);

class PhotonDistribution {
 public:
  enum class Kind { Coherent, Thermal, SubPoisson, SuperPoisson, Custom };

  /// Poissonian number statistics with mean nbar (drive phase never enters
  /// any flux in scope, so the number distribution is the whole state).
  static PhotonDistribution coherent(double nbar);
  /// Bose-Einstein statistics with mean nbar.
  static PhotonDistribution thermal(double nbar);
  /// P_n proportional to lambda^n/(2n)!; Mandel Q < 0.
  static PhotonDistribution sub_poisson(double lambda);
  /// P_n proportional to lambda^n/(n+2)!; Mandel Q > 0.
  static PhotonDistribution super_poisson(double lambda);
  /// Explicit table P_0..P_N; renormalized if the sum is within 1e-6 of 1,
  /// rejected otherwise.
  static PhotonDistribution custom(std::vector<double> pn);

  Kind kind() const { return kind_; }
  /// lambda for the sub/super kinds, nbar for coherent/thermal, 0 for custom.
  double parameter() const { return param_; }
  /// Truncated number distribution; sums to 1, truncated tail mass < 1e-14.
  const std::vector<double>& probabilities() const { return pn_; }
  double tail_mass() const { return tail_mass_; }

  double mean() const;
  double variance() const;
  double mandel_q() const;

  /// k-th factorial moment sum_n P_n n(n-1)...(n-k+1), k >= 1. Throws a
  /// precision error when the truncated tail could contribute more than
  /// 1e-10 of the result.
  double factorial_moment(int k) const;

  /// True when factorial_moment(k) would return rather than throw, i.e. the
  /// truncated table pins the moment to 1e-10 relative. Lets the moment
  /// series stop at the table's precision floor instead of erroring.
  bool factorial_moment_reliable(int k) const;

  /// Normalized coherence factorial_moment(k)/mean^k; g(1) = 1 identically.
  double gk(int k) const;

  /// F(s) = sum_n P_n (1-s)^n, evaluated in closed form for the built-in
  /// kinds (log-domain where the normalizers would overflow) and by direct
  /// summation for Custom.
  double generating_function(double s_tilde) const;

 private:
  PhotonDistribution(Kind kind, double param);
  void build_table();
  /// Truncated moment sum plus the relative bound on what the un-tabulated
  /// tail could add (0 for finite-support kinds).
  double moment_sum(int k, double& tail_ratio) const;

  Kind kind_;
  double param_;
  std::vector<double> pn_;
  double tail_mass_ = 0.0;
};

/// Inverts the closed-form mean(lambda) by bisection for the sub/super
/// kinds so sweeps can compare statistics at equal mean photon number; for
/// coherent/thermal the parameter is the mean already.
double lambda_for_mean(PhotonDistribution::Kind kind, double target_mean);

}  // namespace qref

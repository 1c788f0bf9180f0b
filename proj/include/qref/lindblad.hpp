#pragma once

#include <complex>
#include <Eigen/Dense>

#include "qref/model.hpp"

// Single coherent-branch physics: the rotating-frame master equation of the
// driven three-level cycle, its weak-spontaneous-decay (kappa -> 0) closed
// form, a brute-force Liouvillian steady-state solver valid at any kappa,
// and heat-current extraction.
//
// Density matrices are vectorized column-major (v[i + 3j] = rho(i, j)), so a
// map rho -> A rho B becomes kron(B^T, A) acting on v.
namespace qref {

using Matrix3cd = Eigen::Matrix3cd;
using Matrix9cd = Eigen::Matrix<std::complex<double>, 9, 9>;
using Vector9cd = Eigen::Matrix<std::complex<double>, 9, 1>;

// One coherent branch of the drive: n = |alpha|^2 photons with phase phi.
struct BranchDrive {
  explicit BranchDrive(double amplitude_sq = 0.0, double phase = 0.0);

  double amplitude_sq;  // branch photon number, >= 0
  double phase;         // normalized into [0, 2*pi)

  /// Complex drive strength E = exp(i*phase) * xi0 * sqrt(n) / 2, chosen so
  /// that 4|E|^2 equals the intensity variable x = xi0^2 * n.
  std::complex<double> strength(double xi0) const;
};

// A physical 3x3 state over (|g>, |e1>, |e2>): Hermitian to 1e-12, unit
// trace to 1e-12, eigenvalues >= -1e-10.
class DensityMatrix3 {
 public:
  explicit DensityMatrix3(const Matrix3cd& rho);

  const Matrix3cd& matrix() const { return rho_; }
  double population(int level) const;  // 0 = g, 1 = e1, 2 = e2

  static DensityMatrix3 ground();
  static DensityMatrix3 maximally_mixed();

 private:
  Matrix3cd rho_;
};

// The closed set of steady-state observables: level populations and the
// drive-transition coherence <e1|rho|e2>.
struct SteadyObservables {
  double pop_g;
  double pop_1;
  double pop_2;
  std::complex<double> tau_e_plus;
};

struct GammaCoefficients {
  double gamma1;    // gamma*(2 + nbar_c + nbar_h)
  double gamma2;    // gamma*(2 + 3*nbar_c + 3*nbar_h)
  double script_n;  // 1 + 2*nbar_h + 2*nbar_c + 3*nbar_c*nbar_h
};
GammaCoefficients gamma_coefficients(const RefrigeratorParams& params);

// Branch flux in rational form j = a*x/(b + c*x) with x = xi0^2 * n.
struct FluxCoefficients {
  double a;  // nbar_c - nbar_h
  double b;  // script_n * (gamma1 + 4*delta^2/gamma1)
  double c;  // gamma2 / gamma^2
};
FluxCoefficients flux_coefficients(const RefrigeratorParams& params);

/// Steady population flux of one branch with n drive photons (kappa -> 0
/// closed form; any kappa in params is deliberately ignored here).
double coherent_flux(const RefrigeratorParams& params, double branch_photons);

/// Large-intensity limit of coherent_flux: gamma^2*(nbar_c - nbar_h)/gamma2.
double saturation_flux(const RefrigeratorParams& params);

/// (q_h, q_c, q_e) = (-omega_h, omega_c, omega_drive) * j.
HeatCurrents heat_currents_from_flux(const RefrigeratorParams& params, double j);

/// Ideal coefficient of performance omega_c/(omega_h - omega_c).
double cop(const RefrigeratorParams& params);

// Transition operators in the (g, e1, e2) basis.
Matrix3cd sigma_minus();  // |e1><e2|, drive-transition lowering
Matrix3cd sigma_plus();   // |e2><e1|

/// Superoperator for the dissipator D[c] rho = c rho c+ - {c+ c, rho}/2.
Matrix9cd dissipator(const Matrix3cd& c);

/// Rotating-frame Hamiltonian. Convention: the detuning lands on |e2><e2|
/// with positive sign (the mirror choice only conjugates the coherence and
/// leaves all fluxes unchanged, since they depend on delta^2 only).
Matrix3cd drive_hamiltonian(const RefrigeratorParams& params, const BranchDrive& drive);

/// Full generator of d(vec rho)/dt for one coherent branch.
Matrix9cd build_liouvillian(const RefrigeratorParams& params, const BranchDrive& drive);

/// Kernel element of a generator with a one-dimensional null space, found by
/// full eigendecomposition (smallest-modulus eigenvalue) and refined by a
/// trace-constrained least-squares polish. Throws if the kernel is
/// degenerate, the eigensolve fails, or the residual exceeds 1e-11.
DensityMatrix3 steady_state_numeric(const Matrix9cd& liouvillian);

/// Closed-form steady state, valid for kappa <= 1e-8*gamma; throws
/// std::domain_error above that (use the numeric path instead).
SteadyObservables steady_state_analytic(const RefrigeratorParams& params, const BranchDrive& drive);

/// Populations and drive coherence read off a full density matrix.
SteadyObservables observables_from(const DensityMatrix3& state);

/// Bath heat currents from level populations plus the drive-transition
/// energy flow; j is the cold-bath population flux q_c/omega_c.
HeatCurrents heat_flows_from_state(const RefrigeratorParams& params, const BranchDrive& drive,
                                   const SteadyObservables& state);

/// Energy per unit time injected by the drive field alone (excludes the
/// spontaneous-decay channel), omega_drive * 2*Re(E * <tau+>). Dividing
/// q_c by this gives the work-referenced COP, which degrades below
/// omega_c/(omega_h - omega_c) once kappa > 0.
double drive_power(const RefrigeratorParams& params, const BranchDrive& drive,
                   const SteadyObservables& state);

/// Stiffness-based default step 0.01/max(gamma*(1+nbar_c+nbar_h), xi0*sqrt(n), |delta|, kappa).
double default_time_step(const RefrigeratorParams& params, const BranchDrive& drive);

/// Fixed-step classical 4th-order integration of d(vec rho)/dt = L vec rho.
DensityMatrix3 evolve_with(const Matrix9cd& liouvillian, const DensityMatrix3& rho0, double t,
                           double dt);
DensityMatrix3 evolve(const RefrigeratorParams& params, const BranchDrive& drive,
                      const DensityMatrix3& rho0, double t, double dt);
DensityMatrix3 evolve(const RefrigeratorParams& params, const BranchDrive& drive,
                      const DensityMatrix3& rho0, double t);

}  // namespace qref

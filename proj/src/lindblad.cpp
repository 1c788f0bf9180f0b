#include "qref/lindblad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

namespace qref {

namespace {

using std::complex;
constexpr complex<double> kI{0.0, 1.0};

Matrix3cd unit_matrix(int r, int c) {
  Matrix3cd m = Matrix3cd::Zero();
  m(r, c) = 1.0;
  return m;
}

// kron(P, Q)[3a+c, 3b+d] = P(a,b) Q(c,d); with column-major vectorization
// rho -> A rho B acts as kron(B^T, A).
Matrix9cd kron(const Matrix3cd& p, const Matrix3cd& q) {
  Matrix9cd m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m.block<3, 3>(3 * i, 3 * j) = p(i, j) * q;
  return m;
}

Vector9cd vectorize(const Matrix3cd& rho) {
  return Eigen::Map<const Vector9cd>(rho.data());
}

Matrix3cd unvectorize(const Vector9cd& v) {
  return Eigen::Map<const Matrix3cd>(v.data());
}

}  // namespace

BranchDrive::BranchDrive(double amplitude_sq_in, double phase_in)
    : amplitude_sq(amplitude_sq_in), phase(phase_in) {
  if (!(amplitude_sq >= 0.0))
    throw std::invalid_argument("BranchDrive: amplitude_sq must be non-negative (got " +
                                std::to_string(amplitude_sq_in) + ")");
  const double two_pi = 2.0 * std::numbers::pi;
  phase = std::fmod(phase, two_pi);
  if (phase < 0.0) phase += two_pi;
}

std::complex<double> BranchDrive::strength(double xi0) const {
  return std::polar(xi0 * std::sqrt(amplitude_sq) / 2.0, phase);
}

DensityMatrix3::DensityMatrix3(const Matrix3cd& rho) : rho_(rho) {
  const double herm_defect = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (!(herm_defect <= 1e-12))
    throw std::invalid_argument("DensityMatrix3: not Hermitian (defect " +
                                std::to_string(herm_defect) + ")");
  const double trace_defect = std::abs(rho_.trace() - 1.0);
  if (!(trace_defect <= 1e-12))
    throw std::invalid_argument("DensityMatrix3: trace differs from 1 by " +
                                std::to_string(trace_defect));
  Eigen::SelfAdjointEigenSolver<Matrix3cd> es(0.5 * (rho_ + rho_.adjoint()),
                                              Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument("DensityMatrix3: negative eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()));
}

double DensityMatrix3::population(int level) const {
  if (level < 0 || level > 2) throw std::out_of_range("DensityMatrix3: level must be 0, 1 or 2");
  return rho_(level, level).real();
}

DensityMatrix3 DensityMatrix3::ground() { return DensityMatrix3(unit_matrix(0, 0)); }

DensityMatrix3 DensityMatrix3::maximally_mixed() {
  return DensityMatrix3(Matrix3cd::Identity() / 3.0);
}

GammaCoefficients gamma_coefficients(const RefrigeratorParams& p) {
  return {p.gamma * (2.0 + p.nbar_c + p.nbar_h), p.gamma * (2.0 + 3.0 * p.nbar_c + 3.0 * p.nbar_h),
          1.0 + 2.0 * p.nbar_h + 2.0 * p.nbar_c + 3.0 * p.nbar_c * p.nbar_h};
}

FluxCoefficients flux_coefficients(const RefrigeratorParams& p) {
  const auto [g1, g2, n] = gamma_coefficients(p);
  // The detuning contribution carries the full factor n (the populated-level
  // count), as the exact kernel of the branch generator requires.
  return {p.nbar_c - p.nbar_h, n * (g1 + 4.0 * p.delta * p.delta / g1),
          g2 / (p.gamma * p.gamma)};
}

double coherent_flux(const RefrigeratorParams& p, double branch_photons) {
  if (!(branch_photons >= 0.0))
    throw std::invalid_argument("coherent_flux: branch_photons must be non-negative");
  const auto fc = flux_coefficients(p);
  const double x = p.xi0 * p.xi0 * branch_photons;
  return fc.a * x / (fc.b + fc.c * x);
}

double saturation_flux(const RefrigeratorParams& p) {
  const auto fc = flux_coefficients(p);
  return fc.a / fc.c;
}

HeatCurrents heat_currents_from_flux(const RefrigeratorParams& p, double j) {
  return {-p.omega_h * j, p.omega_c * j, p.omega_drive() * j, j};
}

double cop(const RefrigeratorParams& p) {
  if (!(p.omega_h > p.omega_c))
    throw std::domain_error("cop: requires omega_h > omega_c");
  return p.omega_c / (p.omega_h - p.omega_c);
}

Matrix3cd sigma_minus() { return unit_matrix(1, 2); }
Matrix3cd sigma_plus() { return unit_matrix(2, 1); }

Matrix9cd dissipator(const Matrix3cd& c) {
  const Matrix3cd cdc = c.adjoint() * c;
  const Matrix3cd id = Matrix3cd::Identity();
  return kron(c.conjugate(), c) - 0.5 * kron(id, cdc) - 0.5 * kron(cdc.transpose(), id);
}

Matrix3cd drive_hamiltonian(const RefrigeratorParams& p, const BranchDrive& d) {
  const complex<double> es = d.strength(p.xi0);
  Matrix3cd h = Matrix3cd::Zero();
  h(2, 2) = p.delta;
  h(2, 1) = kI * es;  // i E |e2><e1|
  h(1, 2) = std::conj(h(2, 1));
  return h;
}

Matrix9cd build_liouvillian(const RefrigeratorParams& p, const BranchDrive& d) {
  const Matrix3cd h = drive_hamiltonian(p, d);
  const Matrix3cd id = Matrix3cd::Identity();
  Matrix9cd ell = -kI * (kron(id, h) - kron(h.transpose(), id));
  ell += p.kappa * dissipator(sigma_minus());
  ell += p.gamma * p.nbar_c * dissipator(unit_matrix(1, 0));         // cold absorption
  ell += p.gamma * (p.nbar_c + 1.0) * dissipator(unit_matrix(0, 1)); // cold emission
  ell += p.gamma * p.nbar_h * dissipator(unit_matrix(2, 0));         // hot absorption
  ell += p.gamma * (p.nbar_h + 1.0) * dissipator(unit_matrix(0, 2)); // hot emission
  return ell;
}

DensityMatrix3 steady_state_numeric(const Matrix9cd& ell) {
  Eigen::ComplexEigenSolver<Matrix9cd> es(ell);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("steady_state_numeric: eigensolve did not converge");

  std::array<int, 9> order;
  for (int i = 0; i < 9; ++i) order[i] = i;
  const auto& vals = es.eigenvalues();
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return std::abs(vals(a)) < std::abs(vals(b)); });

  const double norm = ell.norm();
  const double smallest = std::abs(vals(order[0]));
  const double next = std::abs(vals(order[1]));
  if (!(smallest < 1e-10 * norm)) {
    std::ostringstream os;
    os << "steady_state_numeric: no kernel found (smallest |eigenvalue| " << smallest
       << " vs generator norm " << norm << ")";
    throw std::runtime_error(os.str());
  }
  // Demand an isolated kernel: the next eigenvalue must sit a factor 1e3
  // above the smallest (floored at roundoff scale so an exact zero does not
  // defeat the test).
  if (!(next > 1e3 * std::max(smallest, 1e-16 * norm))) {
    int dim = 0;
    for (int i = 0; i < 9; ++i)
      if (std::abs(vals(i)) < 1e-10 * norm) ++dim;
    std::ostringstream os;
    os << "steady_state_numeric: degenerate steady state, kernel dimension " << std::max(dim, 2)
       << " (|l0| = " << smallest << ", |l1| = " << next << ")";
    throw std::runtime_error(os.str());
  }

  Vector9cd v = es.eigenvectors().col(order[0]);
  const complex<double> tr = v(0) + v(4) + v(8);
  if (std::abs(tr) < 1e-8 * v.norm())
    throw std::runtime_error("steady_state_numeric: kernel vector is traceless");
  v /= tr;

  // Least-squares polish: minimize |L v| subject to unit trace (appended as
  // a row weighted by |L| so it binds), keeping the result if it lowers the
  // residual of the eigenvector estimate.
  Eigen::Matrix<complex<double>, 10, 9> bordered;
  bordered.topRows<9>() = ell;
  bordered.row(9).setZero();
  bordered(9, 0) = bordered(9, 4) = bordered(9, 8) = norm;
  Eigen::Matrix<complex<double>, 10, 1> rhs = Eigen::Matrix<complex<double>, 10, 1>::Zero();
  rhs(9) = norm;
  const Vector9cd polished = bordered.colPivHouseholderQr().solve(rhs);
  if ((ell * polished).norm() < (ell * v).norm()) v = polished;

  Matrix3cd rho = unvectorize(v);
  rho = 0.5 * (rho + rho.adjoint().eval());
  rho /= rho.trace().real();

  const double residual = (ell * vectorize(rho)).norm();
  if (!(residual < 1e-11)) {
    std::ostringstream os;
    os << "steady_state_numeric: residual " << residual << " exceeds 1e-11";
    throw std::runtime_error(os.str());
  }
  return DensityMatrix3(rho);
}

SteadyObservables steady_state_analytic(const RefrigeratorParams& p, const BranchDrive& d) {
  if (p.kappa > 1e-8 * p.gamma)
    throw std::domain_error(
        "steady_state_analytic: the closed form assumes negligible spontaneous decay "
        "(kappa <= 1e-8*gamma); use steady_state_numeric for finite kappa");
  const auto [g1, g2, n] = gamma_coefficients(p);
  const double g = p.gamma;
  const double dd = p.delta;
  const complex<double> es = d.strength(p.xi0);
  const double e2 = std::norm(es);
  const double phi = 4.0 * dd * dd * g * g * n + g1 * (g1 * g * g * n + 4.0 * e2 * g2);

  const double shared = 4.0 * e2 * g * (p.nbar_c + p.nbar_h) * g1;
  const double n1 =
      (4.0 * dd * dd * g * g * p.nbar_c * (1.0 + p.nbar_h) + shared +
       g * g * p.nbar_c * (1.0 + p.nbar_h) * g1 * g1) /
      phi;
  const double n2 =
      (4.0 * dd * dd * g * g * p.nbar_h * (1.0 + p.nbar_c) + shared +
       g * g * p.nbar_h * (1.0 + p.nbar_c) * g1 * g1) /
      phi;
  const complex<double> tau =
      (4.0 * kI * dd * std::conj(es) * g * g * (p.nbar_c - p.nbar_h) +
       2.0 * std::conj(es) * g * g * (p.nbar_c - p.nbar_h) * g1) /
      phi;
  return {1.0 - n1 - n2, n1, n2, tau};
}

SteadyObservables observables_from(const DensityMatrix3& state) {
  const Matrix3cd& rho = state.matrix();
  return {rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real(), rho(1, 2)};
}

HeatCurrents heat_flows_from_state(const RefrigeratorParams& p, const BranchDrive& d,
                                   const SteadyObservables& s) {
  const double q_c =
      p.omega_c * p.gamma * (p.nbar_c * s.pop_g - (p.nbar_c + 1.0) * s.pop_1);
  const double q_h =
      p.omega_h * p.gamma * (p.nbar_h * s.pop_g - (p.nbar_h + 1.0) * s.pop_2);
  const double q_e = drive_power(p, d, s) - p.omega_drive() * p.kappa * s.pop_2;
  return {q_h, q_c, q_e, q_c / p.omega_c};
}

double drive_power(const RefrigeratorParams& p, const BranchDrive& d,
                   const SteadyObservables& s) {
  return p.omega_drive() * 2.0 * std::real(d.strength(p.xi0) * s.tau_e_plus);
}

double default_time_step(const RefrigeratorParams& p, const BranchDrive& d) {
  const double stiffness =
      std::max({p.gamma * (1.0 + p.nbar_c + p.nbar_h), p.xi0 * std::sqrt(d.amplitude_sq),
                std::abs(p.delta), p.kappa});
  return 0.01 / stiffness;
}

DensityMatrix3 evolve_with(const Matrix9cd& ell, const DensityMatrix3& rho0, double t, double dt) {
  if (!(t >= 0.0)) throw std::invalid_argument("evolve: t must be non-negative");
  if (!(dt > 0.0)) throw std::invalid_argument("evolve: dt must be positive");

  Vector9cd v = vectorize(rho0.matrix());
  const auto step = [&](double h) {
    const Vector9cd k1 = ell * v;
    const Vector9cd k2 = ell * (v + 0.5 * h * k1);
    const Vector9cd k3 = ell * (v + 0.5 * h * k2);
    const Vector9cd k4 = ell * (v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };

  const auto steps = static_cast<long long>(t / dt);
  for (long long i = 0; i < steps; ++i) step(dt);
  const double remainder = t - static_cast<double>(steps) * dt;
  if (remainder > 0.0) step(remainder);

  Matrix3cd rho = unvectorize(v);
  rho = 0.5 * (rho + rho.adjoint().eval());
  const double drift = std::abs(rho.trace().real() - 1.0);
  if (drift > 1e-6) {
    std::ostringstream os;
    os << "evolve: trace drifted by " << drift << "; the step dt = " << dt
       << " is unstable for this generator, reduce it";
    throw std::runtime_error(os.str());
  }
  if (drift > 1e-12) {
    std::cerr << "evolve: renormalizing trace (drift " << drift << ")\n";
    rho /= rho.trace().real();
  }
  return DensityMatrix3(rho);
}

DensityMatrix3 evolve(const RefrigeratorParams& p, const BranchDrive& d,
                      const DensityMatrix3& rho0, double t, double dt) {
  return evolve_with(build_liouvillian(p, d), rho0, t, dt);
}

DensityMatrix3 evolve(const RefrigeratorParams& p, const BranchDrive& d,
                      const DensityMatrix3& rho0, double t) {
  return evolve_with(build_liouvillian(p, d), rho0, t, default_time_step(p, d));
}

}  // namespace qref

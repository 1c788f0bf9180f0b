#include "qref/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace qref {

namespace {

GaussLaguerre compute_rule(int n) {
  if (n < 1) throw std::invalid_argument("GaussLaguerre: need at least one node");
  // Golub-Welsch: the rule is the eigensystem of the Jacobi matrix of the
  // Laguerre recurrence, diagonal 2k+1 and off-diagonal k; the weight of a
  // node is the squared first component of its eigenvector (total mass 1).
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    jacobi(k, k) = 2.0 * k + 1.0;
    if (k > 0) jacobi(k, k - 1) = jacobi(k - 1, k) = static_cast<double>(k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("GaussLaguerre: Jacobi eigensolve failed");
  GaussLaguerre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = es.eigenvalues()(i);  // ascending
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = v0 * v0;
  }
  return rule;
}

struct SimpsonState {
  bool exhausted = false;
  double worst_tol = 0.0;
};

double simpson_panel(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_recurse(const std::function<double(double)>& f, double a, double fa, double b,
                       double fb, double m, double fm, double whole, double tol, int depth,
                       SimpsonState& state) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson_panel(a, fa, m, fm, flm);
  const double right = simpson_panel(m, fm, b, fb, frm);
  const double err = (left + right - whole) / 15.0;
  if (std::abs(err) <= tol || depth <= 0) {
    if (depth <= 0 && std::abs(err) > tol) {
      state.exhausted = true;
      state.worst_tol = std::max(state.worst_tol, std::abs(err));
    }
    return left + right + err;  // Richardson-corrected panel
  }
  return simpson_recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1, state) +
         simpson_recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1, state);
}

}  // namespace

const GaussLaguerre& GaussLaguerre::rule(int n) {
  static std::map<int, GaussLaguerre> cache;
  static std::mutex guard;
  std::lock_guard<std::mutex> lock(guard);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

double GaussLaguerre::integrate(const std::function<double(double)>& f) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
  return sum;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
  if (!(b > a)) throw std::invalid_argument("adaptive_simpson: need b > a");
  if (!(tol > 0.0)) throw std::invalid_argument("adaptive_simpson: need tol > 0");
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  SimpsonState state;
  const double whole = simpson_panel(a, fa, b, fb, fm);
  const double result =
      simpson_recurse(f, a, fa, b, fb, m, fm, whole, tol, max_depth, state);
  if (state.exhausted) {
    std::ostringstream os;
    os << "adaptive_simpson: tolerance " << tol << " not reached (achieved about "
       << state.worst_tol << ")";
    throw std::runtime_error(os.str());
  }
  return result;
}

}  // namespace qref

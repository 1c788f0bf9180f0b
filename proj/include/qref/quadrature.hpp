#pragma once

#include <functional>
#include <vector>

namespace qref {

// Gauss-Laguerre rule: integral_0^inf exp(-x) f(x) dx ~ sum_i w_i f(x_i),
// exact for polynomials f of degree <= 2n-1. Nodes and weights come from
// the Golub-Welsch symmetric-tridiagonal eigenproblem.
struct GaussLaguerre {
  std::vector<double> nodes;
  std::vector<double> weights;

  static const GaussLaguerre& rule(int n);  // cached per n

  double integrate(const std::function<double(double)>& f) const;
};

/// Recursive adaptive Simpson for integral_a^b f dx to absolute tolerance
/// tol; throws (reporting the tolerance actually achieved) if the recursion
/// depth is exhausted before convergence.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 52);

}  // namespace qref

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qref/quadrature.hpp"

using namespace qref;

TEST_CASE("gauss-laguerre is exact on polynomials up to degree 2n-1") {
  // integral_0^inf exp(-x) x^k dx = k!
  const GaussLaguerre& rule = GaussLaguerre::rule(6);
  double factorial = 1.0;
  for (int k = 0; k <= 11; ++k) {
    if (k > 0) factorial *= k;
    const double got = rule.integrate([k](double x) { return std::pow(x, k); });
    CHECK(got == doctest::Approx(factorial).epsilon(1e-12));
  }
}

TEST_CASE("gauss-laguerre nodes and weights are well formed") {
  const GaussLaguerre& rule = GaussLaguerre::rule(32);
  REQUIRE_EQ(rule.nodes.size(), 32);
  REQUIRE_EQ(rule.weights.size(), 32);
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    CHECK(rule.nodes[i] > 0.0);
    CHECK(rule.weights[i] > 0.0);
    if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
    weight_sum += rule.weights[i];
  }
  CHECK(weight_sum == doctest::Approx(1.0).epsilon(1e-13));  // integral of 1

  // The cache hands back the same object for repeated requests.
  CHECK_EQ(&rule, &GaussLaguerre::rule(32));
}

TEST_CASE("gauss-laguerre handles smooth non-polynomial integrands") {
  // integral_0^inf exp(-x) sin(x) dx = 1/2
  const double got = GaussLaguerre::rule(48).integrate([](double x) { return std::sin(x); });
  CHECK(got == doctest::Approx(0.5).epsilon(1e-10));

  // integral_0^inf exp(-x) exp(-x/2) dx = 2/3
  const double expgot =
      GaussLaguerre::rule(48).integrate([](double x) { return std::exp(-0.5 * x); });
  CHECK(expgot == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("adaptive simpson hits elementary integrals") {
  const double pi = 3.14159265358979323846;
  CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, pi, 1e-12) ==
        doctest::Approx(2.0).epsilon(1e-11));
  CHECK(adaptive_simpson([](double x) { return x * x * x; }, -1.0, 2.0, 1e-12) ==
        doctest::Approx(15.0 / 4.0).epsilon(1e-11));
  // Matches the libm error function on a Gaussian.
  const double got = adaptive_simpson([](double x) { return std::exp(-x * x); }, 0.0, 3.0, 1e-13);
  const double want = 0.5 * std::sqrt(pi) * std::erf(3.0);
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
  // Degenerate intervals are rejected, not silently returned as zero.
  CHECK_THROWS_WITH(adaptive_simpson([](double x) { return std::exp(x); }, 1.0, 1.0, 1e-12),
                    doctest::Contains("need b > a"));
}

TEST_CASE("adaptive simpson reports failure to converge") {
  // An integrable endpoint singularity cannot reach 1e-14 in three levels.
  CHECK_THROWS_AS(adaptive_simpson([](double x) { return 1.0 / std::sqrt(x + 1e-300); }, 0.0, 1.0,
                                   1e-14, 3),
                  std::runtime_error);
}

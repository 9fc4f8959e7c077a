#include <doctest.h>

#include <cmath>

#include "cesaro/special.hpp"
#include "support.hpp"

using namespace cesaro;

TEST_SUITE("special") {
  TEST_CASE("log_gamma_ratio against lgamma differences at moderate arguments") {
    for (double x : {0.3, 1.0, 2.5, 17.0, 140.0}) {
      for (double a : {-0.2, 0.5, 1.0, 3.7}) {
        CHECK(log_gamma_ratio(x, a) == doctest::Approx(std::lgamma(x + a) - std::lgamma(x)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("log_gamma_ratio keeps precision for large x") {
    // Gamma(x+3)/Gamma(x) = x(x+1)(x+2)
    const double x = 1e6;
    const double exact = std::log(x) + std::log1p(1.0 / x) + std::log(x) + std::log1p(2.0 / x) + std::log(x);
    CHECK(testing::rel_err(log_gamma_ratio(x, 3.0), exact) < 1e-14);
  }

  TEST_CASE("log_kernel_coeff hand values") {
    CHECK(log_kernel_coeff(0, 2.5) == 0.0);
    CHECK(log_kernel_coeff(7, 0.0) == 0.0);
    CHECK(std::exp(log_kernel_coeff(5, 1.0)) == doctest::Approx(6.0).epsilon(1e-14));
    // Gamma(n+3)/(n! Gamma(3)) = (n+1)(n+2)/2
    CHECK(std::exp(log_kernel_coeff(4, 2.0)) == doctest::Approx(15.0).epsilon(1e-14));
  }

  TEST_CASE("gauss_legendre integrates polynomials of degree 2n-1 exactly") {
    for (std::size_t n : {2u, 8u, 16u, 48u}) {
      const auto& rule = gauss_legendre(n);
      REQUIRE(rule.nodes.size() == n);
      double sum = 0.0;
      for (double w : rule.weights) sum += w;
      CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
      const std::size_t k = 2 * n - 1;
      CHECK(integrate_gl([k](double x) { return std::pow(x, static_cast<double>(k - 1)); }, 0.0, 1.0, n) ==
            doctest::Approx(1.0 / k).epsilon(1e-13));
    }
  }

  TEST_CASE("gauss_legendre nodes are ascending and symmetric") {
    const auto& rule = gauss_legendre(24);
    for (std::size_t i = 1; i < rule.nodes.size(); ++i) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      CHECK(rule.nodes[i] == doctest::Approx(-rule.nodes[rule.nodes.size() - 1 - i]).epsilon(1e-15));
    }
  }
}

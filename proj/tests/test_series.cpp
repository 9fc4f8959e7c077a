#include <doctest.h>

#include <cmath>
#include <random>

#include "cesaro/power_series.hpp"
#include "support.hpp"

using namespace cesaro;
using testing::max_rel_err;

namespace {

PowerSeries of(std::vector<double> c) { return PowerSeries(std::move(c)); }

void check_coeffs(const PowerSeries& f, const std::vector<double>& expected, double tol = 1e-15) {
  REQUIRE(f.size() == expected.size());
  for (std::size_t n = 0; n < expected.size(); ++n) CHECK(f[n] == doctest::Approx(expected[n]).epsilon(tol));
}

}  // namespace

TEST_SUITE("series") {
  TEST_CASE("kernel K hand values") {
    check_coeffs(make_kernel_K(0, 4), {1, 1, 1, 1, 1});
    check_coeffs(make_kernel_K(1, 3), {1, 2, 3, 4});
    // (1-z)^{-3/2}: 1, 3/2, 15/8, 35/16
    check_coeffs(make_kernel_K(0.5, 3), {1, 1.5, 15.0 / 8, 35.0 / 16}, 1e-14);
  }

  TEST_CASE("kernel G hand values") {
    check_coeffs(make_kernel_G(1, 3), {1, 0.5, 1.0 / 3, 0.25}, 1e-14);
    check_coeffs(make_kernel_G(0, 4), {1, 1, 1, 1, 1});
    // n! 2! / (n+2)!: 1, 2/6, 4/24
    check_coeffs(make_kernel_G(2, 2), {1, 1.0 / 3, 1.0 / 6}, 1e-14);
  }

  TEST_CASE("K_alpha times G_alpha is K_0") {
    for (double alpha : {0.5, 2.0, 7.0}) {
      const auto h = hadamard(make_kernel_K(alpha, 4096), make_kernel_G(alpha, 4096));
      double worst = 0.0;
      for (std::size_t n = 0; n < h.size(); ++n) worst = std::max(worst, std::abs(h[n] - 1.0));
      CHECK(worst <= 1e-13);
    }
  }

  TEST_CASE("kernel coefficients are positive and monotone by the sign of alpha") {
    for (double alpha : {-0.7, -0.2, 0.3, 2.5}) {
      const auto k = make_kernel_K(alpha, 2000);
      for (std::size_t n = 1; n < k.size(); ++n) {
        CHECK(k[n] > 0.0);
        if (alpha > 0) CHECK(k[n] > k[n - 1]);
        if (alpha < 0) CHECK(k[n] < k[n - 1]);
      }
    }
    CHECK_THROWS_AS(make_kernel_K(-1.0, 4), std::domain_error);
    CHECK_THROWS_AS(make_kernel_G(-0.1, 4), std::domain_error);
  }

  TEST_CASE("kernel coefficients stay finite at large degree") {
    const auto k = make_kernel_K(2.5, 1 << 20);
    CHECK(std::isfinite(k[k.degree()]));
    // A_n^a ~ n^a / Gamma(a+1)
    const double n = static_cast<double>(k.degree());
    CHECK(k[k.degree()] / (std::pow(n, 2.5) / std::tgamma(3.5)) == doctest::Approx(1.0).epsilon(1e-5));
  }

  TEST_CASE("hadamard") {
    std::mt19937_64 rng(3);
    const auto f = testing::random_series(rng, 50), g = testing::random_series(rng, 50),
               h = testing::random_series(rng, 50);
    CHECK(hadamard(f, make_kernel_K(0, 50)) == f);
    CHECK(hadamard(f, g) == hadamard(g, f));
    CHECK(max_rel_err(hadamard(hadamard(f, g), h), hadamard(f, hadamard(g, h))) < 1e-15);
    check_coeffs(hadamard(of({1, 2, 3}), of({1, 0.5, 1.0 / 3})), {1, 1, 1});
    // shorter operand wins
    CHECK(hadamard(f, make_kernel_K(0, 10)).degree() == 10);
  }

  TEST_CASE("cauchy product") {
    std::mt19937_64 rng(4);
    const auto f = testing::random_series(rng, 30);
    CHECK(max_rel_err(cauchy_product(f, PowerSeries::unit(30)), f) == 0.0);
    check_coeffs(cauchy_product(make_kernel_K(0, 5), make_kernel_K(0, 5)), {1, 2, 3, 4, 5, 6});
    for (double a : {0.0, 0.5, 1.0, 2.5}) {
      for (double b : {0.0, 0.5, 1.0, 2.5}) {
        CHECK(max_rel_err(cauchy_product(make_kernel_K(a, 512), make_kernel_K(b, 512)), make_kernel_K(a + b + 1, 512)) <
              1e-11);
      }
    }
  }

  TEST_CASE("fractional derivative and integral") {
    std::mt19937_64 rng(5);
    const auto f = testing::random_series(rng, 4096, 0.1, 1.0);
    CHECK(frac_derivative(f, 0.0) == f);
    check_coeffs(frac_derivative(make_kernel_K(0, 4), 1.0), {1, 2, 3, 4, 5}, 1e-14);
    {
      const auto g = frac_derivative(make_kernel_G(1.3, 300), 1.3);
      for (std::size_t n = 0; n < g.size(); ++n) CHECK(g[n] == doctest::Approx(1.0).epsilon(1e-13));
    }
    for (double alpha : {0.5, 2.5, 10.0}) {
      CHECK(max_rel_err(frac_integral(frac_derivative(f, alpha), alpha), f) <= 1e-12);
      CHECK(max_rel_err(frac_derivative(frac_integral(f, alpha), alpha), f) <= 1e-12);
    }
    check_coeffs(frac_integral(make_kernel_K(0, 3), 1.0), {1, 0.5, 1.0 / 3, 0.25}, 1e-14);
  }

  TEST_CASE("fractional integral agrees with its quadrature form") {
    // I_g f(z) = g int_0^1 f(tz) (1-t)^{g-1} dt
    const double g = 1.7, z = 0.5;
    const auto f = make_kernel_K(0.0, 200);
    const double series = evaluate(frac_integral(f, g), z);
    const double oracle = g * testing::jacobi_oracle([z](double t) { return 1.0 / (1.0 - t * z); }, g - 1.0);
    CHECK(series == doctest::Approx(oracle).epsilon(1e-8));
  }

  TEST_CASE("D and S") {
    check_coeffs(derivative_D(PowerSeries::unit(3)), {1, 0, 0, 0});
    check_coeffs(derivative_D(make_kernel_K(0, 4)), {1, 2, 3, 4, 5});
    std::mt19937_64 rng(6);
    const auto f = testing::random_series(rng, 40);
    CHECK(max_rel_err(derivative_D(f), frac_derivative(f, 1.0)) < 1e-14);
    check_coeffs(shift_S(of({1, 0, 0})), {0, 1, 0});
    check_coeffs(shift_S(make_kernel_K(0, 3)), {0, 1, 1, 1});
    CHECK(derivative_D(shift_S(make_kernel_K(1, 5)))[3] == doctest::Approx(12.0));
  }

  TEST_CASE("dilate and evaluate") {
    std::mt19937_64 rng(7);
    const auto f = testing::random_series(rng, 60);
    CHECK(dilate(f, 1.0) == f);
    const auto f0 = dilate(f, 0.0);
    CHECK(f0[0] == f[0]);
    for (std::size_t n = 1; n < f0.size(); ++n) CHECK(f0[n] == 0.0);
    check_coeffs(dilate(make_kernel_K(0, 3), 0.5), {1, 0.5, 0.25, 0.125});
    for (double z : {0.3, -0.8, 0.95}) {
      CHECK(evaluate(dilate(f, 0.7), z) == doctest::Approx(evaluate(f, 0.7 * z)).epsilon(1e-13));
    }
    CHECK(evaluate(make_kernel_K(0, 80), 0.5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(evaluate(make_kernel_K(1, 120), 0.5) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(evaluate(PowerSeries::unit(5), std::complex<double>(0.3, 0.4)) == std::complex<double>(1.0, 0.0));
    CHECK_THROWS_AS(dilate(f, 1.5), std::domain_error);
  }

  TEST_CASE("arithmetic truncates to the shorter operand") {
    const auto a = of({1, 2, 3}), b = of({1, 1});
    check_coeffs(a + b, {2, 3});
    check_coeffs(a - b, {0, 1});
    check_coeffs(2.0 * a, {2, 4, 6});
    check_coeffs(a.zero_extended(4), {1, 2, 3, 0, 0});
    CHECK_THROWS_AS(a.truncated(5), std::domain_error);
    CHECK_THROWS_AS(PowerSeries::monomial(4, 3), std::domain_error);
    CHECK_THROWS_AS(of({}), std::invalid_argument);
    CHECK_THROWS_AS(of({1.0, NAN}), std::domain_error);
  }

  TEST_CASE("serialization round trips exactly") {
    std::mt19937_64 rng(8);
    const auto f = testing::random_series(rng, 100);
    CHECK(series_from_json(to_json(f)) == f);
    CHECK(series_from_json(nlohmann::json::parse(to_json(f).dump())) == f);
    CHECK(series_from_csv(to_csv(f)) == f);
    CHECK(to_csv(of({0.1, 1})) == "n,coeff\n0,0.10000000000000001\n1,1\n");
    CHECK_THROWS_AS(series_from_csv("a,b\n0,1\n"), std::invalid_argument);
    CHECK_THROWS_AS(series_from_csv("n,coeff\n1,1\n"), std::invalid_argument);
    CHECK_THROWS_AS(load_series("/nonexistent/file.csv"), std::runtime_error);
  }

  TEST_CASE("format_double uses 17 significant digits") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  }
}

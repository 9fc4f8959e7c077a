#include <doctest.h>

#include <cmath>

#include "cesaro/power_series.hpp"
#include "cesaro/radial_measure.hpp"
#include "support.hpp"

using namespace cesaro;

namespace {

const char* kZoo[] = {"lebesgue",        "beta_weight:0.5", "beta_weight:2",         "power_carleson:0.7",
                      "dirac:0.5",       "dyadic_atomic:1", "dyadic_atomic:0.4",     "log_perturbed:0.7,1.5",
                      "log_perturbed:1,-1"};

}  // namespace

TEST_SUITE("measure") {
  TEST_CASE("closed-form moments") {
    const auto leb = moments(zoo("lebesgue"), 4);
    for (std::size_t n = 0; n <= 4; ++n) CHECK(leb[n] == doctest::Approx(1.0 / (n + 1)).epsilon(1e-15));
    CHECK(zoo("lebesgue").moment(3) == doctest::Approx(0.25));
    const auto dirac = moments(zoo("dirac", {0.5}), 3);
    CHECK(dirac.values == std::vector<double>{1, 0.5, 0.25, 0.125});
    const auto bw = moments(zoo("beta_weight", {2.0}), 200);
    for (std::size_t n = 0; n <= 200; ++n) {
      CHECK(bw[n] == doctest::Approx(2.0 / ((n + 1.0) * (n + 2.0))).epsilon(1e-13));
    }
  }

  TEST_CASE("beta_weight moments are the G kernel") {
    for (double b : {0.5, 1.0, 3.7}) {
      CHECK(testing::max_rel_err(PowerSeries(moments(zoo("beta_weight", {b}), 1000).values), make_kernel_G(b, 1000)) <
            1e-13);
    }
  }

  TEST_CASE("quadrature moments match closed forms up to n = 4096") {
    for (double s : {0.3, 0.7, 1.0, 2.0, 3.7}) {
      const auto closed = moments(zoo("power_carleson", {s}), 4096);
      const auto bare = RadialMeasure::density("bare", s - 1.0, [s](double) { return s; });
      const auto quad = moments(bare, 4096);
      CHECK(quad.method == MomentMethod::quadrature);
      CHECK(closed.method == MomentMethod::closed_form);
      double worst = 0.0;
      for (std::size_t n = 0; n <= 4096; ++n) worst = std::max(worst, testing::rel_err(closed[n], quad[n]));
      CHECK(worst <= 1e-10);
    }
  }

  TEST_CASE("quadrature moments against an independent Jacobi oracle") {
    // log_perturbed(1, 1): density (1 - log(1-t)) on [0,1)
    const auto mu = zoo("log_perturbed", {1.0, 1.0});
    const auto m = moments(mu, 64);
    for (std::size_t n : {0u, 1u, 7u, 64u}) {
      const double oracle = testing::jacobi_oracle(
          [n](double t) { return std::pow(t, static_cast<double>(n)) * (1.0 - std::log1p(-t)); }, 0.0, 400000);
      CHECK(m[n] == doctest::Approx(oracle).epsilon(1e-6));
    }
    // mu_0 = int_0^1 (1 - log x) dx = 2
    CHECK(m[0] == doctest::Approx(2.0).epsilon(1e-12));
  }

  TEST_CASE("moment sequences are nonincreasing, nonnegative, mu_0 = mass") {
    for (const char* spec : kZoo) {
      CAPTURE(spec);
      const auto mu = zoo_from_spec(spec);
      const auto m = moments(mu, 2048);
      CHECK(m[0] == doctest::Approx(mu.total_mass()).epsilon(1e-9));
      for (std::size_t n = 1; n <= m.degree(); ++n) {
        CHECK(m[n] >= 0.0);
        CHECK(m[n] <= m[n - 1]);
      }
    }
  }

  TEST_CASE("tails") {
    for (double s : {0.5, 1.3}) {
      for (double r : {0.0, 0.4, 0.99}) CHECK(tail(zoo("power_carleson", {s}), r) == doctest::Approx(std::pow(1 - r, s)));
    }
    CHECK(tail(zoo("dirac", {0.5}), 0.6) == 0.0);
    const auto dy = zoo("dyadic_atomic", {1.0});
    for (int k = 1; k <= 20; ++k) {
      double oracle = 0.0;
      for (int j = k; j <= 200; ++j) oracle += std::exp2(-j);
      CHECK(tail(dy, 1.0 - std::exp2(-k)) == doctest::Approx(oracle).epsilon(1e-12));
    }
    for (const char* spec : kZoo) {
      CAPTURE(spec);
      const auto mu = zoo_from_spec(spec);
      CHECK(tail(mu, 0.0) == doctest::Approx(mu.total_mass()).epsilon(1e-9));
      double prev = tail(mu, 0.0);
      for (double r = 0.05; r < 1.0; r += 0.05) {
        const double t = tail(mu, r);
        CHECK(t <= prev * (1 + 1e-12));
        prev = t;
      }
    }
    CHECK_THROWS_AS(tail(zoo("lebesgue"), 1.0), std::domain_error);
  }

  TEST_CASE("zoo parsing and validation") {
    CHECK(zoo_from_spec("beta_weight:2").label() == "beta_weight:2");
    CHECK(zoo_from_spec("log_perturbed:0.7,1.5").label() == "log_perturbed:0.7,1.5");
    CHECK_THROWS_AS(zoo_from_spec("nope"), std::domain_error);
    CHECK_THROWS_AS(zoo_from_spec("beta_weight"), std::domain_error);
    CHECK_THROWS_AS(zoo_from_spec("beta_weight:-1"), std::domain_error);
    CHECK_THROWS_AS(zoo_from_spec("beta_weight:x"), std::domain_error);
    CHECK_THROWS_AS(zoo_from_spec("dirac:1"), std::domain_error);
    CHECK_THROWS_AS(RadialMeasure::atomic("bad", {{0.5, -1.0}}), std::domain_error);
    CHECK_THROWS_AS(RadialMeasure::density("bad", -1.0, [](double) { return 1.0; }), std::domain_error);
    CHECK(zoo_from_spec("dirac:0.5").known_exponent()->infinite);
    CHECK_FALSE(zoo_from_spec("log_perturbed:0.7,1.5").known_exponent()->attained);
  }

  TEST_CASE("carleson exponent fits") {
    CHECK(carleson_exponent(zoo("power_carleson", {0.7}), CarlesonMethod::tail).s == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(carleson_exponent(zoo("lebesgue"), CarlesonMethod::moments).s == doctest::Approx(1.0).epsilon(0.02));
    CHECK(carleson_exponent(zoo("dyadic_atomic", {1.5}), CarlesonMethod::tail).s == doctest::Approx(1.5).epsilon(0.05));
    CHECK(carleson_exponent(zoo("dirac", {0.5}), CarlesonMethod::tail).infinite);
    CHECK_THROWS_AS(carleson_exponent(zoo("lebesgue"), CarlesonMethod::poisson), std::domain_error);
    for (double s : {0.3, 0.8, 1.7, 3.0}) {
      for (const char* family : {"power_carleson", "dyadic_atomic"}) {
        CAPTURE(family);
        CAPTURE(s);
        const auto mu = zoo(family, {s});
        const double t = carleson_exponent(mu, CarlesonMethod::tail).s;
        const double m = carleson_exponent(mu, CarlesonMethod::moments).s;
        const auto p = carleson_exponent(mu, CarlesonMethod::poisson, {}, s + 1.0);
        CHECK(std::abs(t - m) <= 0.05);
        CHECK_FALSE(p.lower_bound);
        CHECK(std::abs(p.s - s) <= 0.05);
      }
    }
  }

  TEST_CASE("poisson integral closed form") {
    // int_0^1 dt / (1 - t r)^2 = 1 / (1 - r)
    for (double r : {0.1, 0.5, 0.9, 0.999}) {
      CHECK(poisson_integral(zoo("lebesgue"), r, 2.0) == doctest::Approx(1.0 / (1.0 - r)).epsilon(1e-10));
    }
  }

  TEST_CASE("is_s_carleson") {
    const auto a = is_s_carleson(zoo("power_carleson", {1.0}), 1.0);
    CHECK(a.is_carleson);
    CHECK(a.constant == doctest::Approx(1.0).epsilon(1e-9));
    const auto b = is_s_carleson(zoo("power_carleson", {0.5}), 1.0);
    CHECK_FALSE(b.is_carleson);
    CHECK(b.ratios.back() > 100.0 * b.ratios.front());
    const auto c = is_s_carleson(zoo("dirac", {0.9}), 3.0);
    CHECK(c.is_carleson);
    CHECK(std::isfinite(c.constant));
  }

  TEST_CASE("fit_line recovers an exact line") {
    const auto fit = fit_line({0, 1, 2, 3}, {1, 3, 5, 7}, "test");
    CHECK(fit.slope == doctest::Approx(2.0));
    CHECK(fit.intercept == doctest::Approx(1.0));
    CHECK(fit.residual < 1e-12);
    CHECK_THROWS_AS(fit_line({1}, {1}, "x"), std::invalid_argument);
    const auto back = exponent_fit_from_json(to_json(fit));
    CHECK(back.slope == fit.slope);
    CHECK(back.abscissae == fit.abscissae);
  }

  TEST_CASE("moments csv has 17 digits") {
    const auto csv = moments_csv(moments(zoo("lebesgue"), 2));
    CHECK(csv == "n,mu_n\n0,1\n1,0.5\n2,0.33333333333333331\n");
  }
}

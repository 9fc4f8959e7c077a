#include <doctest.h>

#include <complex>
#include <random>
#include <vector>

#include "cesaro/kernels.hpp"
#include "support.hpp"

using namespace cesaro;

TEST_SUITE("kernels") {
  TEST_CASE("serial and parallel convolve agree") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> a(3000), b(2500);
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng);
    std::vector<double> s(2500), p(2500);
    kernels::serial::convolve(a, b, s);
    kernels::parallel::convolve(a, b, p);
    for (std::size_t n = 0; n < s.size(); ++n) CHECK(std::abs(s[n] - p[n]) <= 1e-13 * (1.0 + std::abs(s[n])));
  }

  TEST_CASE("convolve hand example") {
    const std::vector<double> a = {1, 2, 3}, b = {4, 5, 6};
    std::vector<double> out(3);
    kernels::serial::convolve(a, b, out);
    CHECK(out == std::vector<double>{4, 13, 28});
  }

  TEST_CASE("serial and parallel moments agree") {
    std::vector<QuadratureNode> nodes;
    for (int i = 1; i <= 300; ++i) nodes.push_back({1.0 / (i * i), 1.0 / i});
    std::vector<double> s(4096), p(4096);
    kernels::serial::moments(nodes, s);
    kernels::parallel::moments(nodes, p);
    for (std::size_t n = 0; n < s.size(); ++n) CHECK(testing::rel_err(s[n], p[n]) < 1e-13);
    // n = 0 is the total weight
    double mass = 0.0;
    for (const auto& node : nodes) mass += node.weight;
    CHECK(s[0] == doctest::Approx(mass).epsilon(1e-14));
  }

  TEST_CASE("serial and parallel evaluate_many agree") {
    std::vector<double> c(1000);
    for (std::size_t n = 0; n < c.size(); ++n) c[n] = 1.0 / (n + 1.0);
    std::vector<std::complex<double>> z, s(64), p(64);
    for (int j = 0; j < 64; ++j) z.push_back(std::polar(0.9, 0.1 * j));
    kernels::serial::evaluate_many(c, z, s);
    kernels::parallel::evaluate_many(c, z, p);
    for (int j = 0; j < 64; ++j) CHECK(std::abs(s[j] - p[j]) <= 1e-13 * std::abs(s[j]));
    // -log(1 - z)/z at z = 0.9
    CHECK(s[0].real() == doctest::Approx(-std::log(0.1) / 0.9).epsilon(1e-12));
  }

  TEST_CASE("max_threads is positive") { CHECK(kernels::max_threads() >= 1); }
}

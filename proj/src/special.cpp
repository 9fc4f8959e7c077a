#include "cesaro/special.hpp"

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <math.h>

namespace cesaro {

namespace {

// B_{2k} / (2k (2k - 1)) for k = 1..7.
constexpr std::array<double, 7> kStirling = {
    1.0 / 12.0,         -1.0 / 360.0,     1.0 / 1260.0,    -1.0 / 1680.0,
    1.0 / 1188.0,       -691.0 / 360360.0, 1.0 / 156.0,
};

constexpr double kShiftThreshold = 16.0;

// sum_k c_k (y^{1-2k} - x^{1-2k}), y = x + a
double stirling_tail_difference(double x, double y) {
  const double ix = 1.0 / x;
  const double iy = 1.0 / y;
  const double ix2 = ix * ix;
  const double iy2 = iy * iy;
  double px = ix;
  double py = iy;
  double acc = 0.0;
  for (double c : kStirling) {
    acc += c * (py - px);
    px *= ix2;
    py *= iy2;
  }
  return acc;
}

}  // namespace

double log_gamma(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double log_gamma_ratio(double x, double a) {
  if (!(x > 0.0) || !(x + a > 0.0)) {
    throw std::domain_error("log_gamma_ratio: need x > 0 and x + a > 0");
  }
  if (a == 0.0) return 0.0;

  double shift_sum = 0.0;
  const double low = std::min(x, x + a);
  if (low < kShiftThreshold) {
    const auto steps = static_cast<int>(std::ceil(kShiftThreshold - low));
    for (int j = 0; j < steps; ++j) {
      shift_sum += std::log1p(a / (x + j));
    }
    x += steps;
  }
  const double y = x + a;
  const double main = (x - 0.5) * std::log1p(a / x) + a * std::log(y) - a;
  return main + stirling_tail_difference(x, y) - shift_sum;
}

double log_kernel_coeff(std::size_t n, double alpha) {
  if (!(alpha > -1.0)) {
    throw std::domain_error("log_kernel_coeff: alpha must exceed -1");
  }
  if (alpha == 0.0 || n == 0) return 0.0;
  return log_gamma_ratio(static_cast<double>(n) + 1.0, alpha) - log_gamma(alpha + 1.0);
}

namespace {

GaussLegendreRule build_rule(std::size_t n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(std::size_t n) {
  if (n == 0) throw std::domain_error("gauss_legendre: need at least one node");
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    if (n == 1) {
      slot = std::make_unique<GaussLegendreRule>(GaussLegendreRule{{0.0}, {2.0}});
    } else {
      slot = std::make_unique<GaussLegendreRule>(build_rule(n));
    }
  }
  return *slot;
}

}  // namespace cesaro

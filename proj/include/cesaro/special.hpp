#ifndef CESARO_SPECIAL_HPP
#define CESARO_SPECIAL_HPP

#include <cstddef>
#include <vector>

namespace cesaro {

// log Gamma(x + a) - log Gamma(x) for x > 0 and x + a > 0.
//
// Large arguments use the difference of two Stirling series written so that
// the leading (x log x) terms cancel analytically; small arguments are first
// shifted upward with log1p steps. Accurate to a few ulps of the result even
// for x around 1e6, where the naive difference of lgamma values loses ~7
// digits.
double log_gamma_ratio(double x, double a);

// Thread-safe log|Gamma(x)| (glibc lgamma_r).
double log_gamma(double x);

// log of the Taylor coefficient of (1 - z)^{-(alpha + 1)}:
//   log( Gamma(n + alpha + 1) / (n! Gamma(alpha + 1)) ),  alpha > -1.
double log_kernel_coeff(std::size_t n, double alpha);

struct GaussLegendreRule {
  std::vector<double> nodes;   // on [-1, 1], ascending
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule (Newton iteration on P_n). Rules are cached per
// n, so repeated calls are cheap and safe from multiple threads.
const GaussLegendreRule& gauss_legendre(std::size_t n);

// Integrates fn over [a, b] with an n-point Gauss-Legendre rule.
template <typename Fn>
double integrate_gl(Fn&& fn, double a, double b, std::size_t n) {
  const auto& rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * fn(mid + half * rule.nodes[i]);
  }
  return acc * half;
}

}  // namespace cesaro

#endif  // CESARO_SPECIAL_HPP

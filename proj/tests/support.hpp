#ifndef CESARO_TESTS_SUPPORT_HPP
#define CESARO_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "cesaro/power_series.hpp"

namespace testing {

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

inline double max_rel_err(const cesaro::PowerSeries& f, const cesaro::PowerSeries& g) {
  double worst = 0.0;
  for (std::size_t n = 0; n < std::min(f.size(), g.size()); ++n) worst = std::max(worst, rel_err(f[n], g[n]));
  return worst;
}

inline cesaro::PowerSeries random_series(std::mt19937_64& rng, std::size_t degree, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> c(degree + 1);
  for (auto& x : c) x = u(rng);
  return cesaro::PowerSeries(c);
}

// Gauss-Jacobi style oracle for int_0^1 g(t) (1-t)^e dt: substitute
// u = (1-t)^{e+1}, then plain composite midpoint rule with many panels.
template <typename Fn>
double jacobi_oracle(Fn&& g, double e, std::size_t panels = 200000) {
  const double h = 1.0 / panels;
  double acc = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    const double u = (i + 0.5) * h;
    const double x = std::pow(u, 1.0 / (e + 1.0));
    acc += g(1.0 - x);
  }
  return acc * h / (e + 1.0);
}

}  // namespace testing

#endif

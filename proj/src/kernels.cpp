#include "cesaro/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cesaro::kernels {

namespace {

constexpr std::size_t kMomentChunk = 256;

void check_convolve(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  if (out.size() > a.size() || out.size() > b.size()) {
    throw std::invalid_argument("convolve: output longer than an operand");
  }
}

inline double convolve_one(std::span<const double> a, std::span<const double> b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k <= n; ++k) acc += a[k] * b[n - k];
  return acc;
}

inline std::complex<double> horner(std::span<const double> c, std::complex<double> z) {
  std::complex<double> acc = 0.0;
  for (std::size_t n = c.size(); n-- > 0;) acc = acc * z + c[n];
  return acc;
}

}  // namespace

namespace serial {

void convolve(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  check_convolve(a, b, out);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = convolve_one(a, b, n);
}

void moments(std::span<const QuadratureNode> nodes, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t n = 0; n < out.size(); ++n) {
    double acc = 0.0;
    for (const auto& node : nodes) {
      // an atom at t = 0 only reaches n = 0
      if (node.gap >= 1.0) {
        if (n == 0) acc += node.weight;
        continue;
      }
      acc += node.weight * std::exp(static_cast<double>(n) * std::log1p(-node.gap));
    }
    out[n] = acc;
  }
}

void evaluate_many(std::span<const double> coeffs, std::span<const std::complex<double>> points,
                   std::span<std::complex<double>> out) {
  for (std::size_t j = 0; j < points.size(); ++j) out[j] = horner(coeffs, points[j]);
}

}  // namespace serial

namespace parallel {

void convolve(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  check_convolve(a, b, out);
  const auto count = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t n = 0; n < count; ++n) {
    out[n] = convolve_one(a, b, static_cast<std::size_t>(n));
  }
}

void moments(std::span<const QuadratureNode> nodes, std::span<double> out) {
  const std::size_t total = out.size();
  const auto chunks = static_cast<std::ptrdiff_t>((total + kMomentChunk - 1) / kMomentChunk);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t c = 0; c < chunks; ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kMomentChunk;
    const std::size_t end = std::min(total, begin + kMomentChunk);
    for (std::size_t n = begin; n < end; ++n) out[n] = 0.0;
    for (const auto& node : nodes) {
      if (node.gap >= 1.0) {
        if (begin == 0) out[0] += node.weight;
        continue;
      }
      const double log_t = std::log1p(-node.gap);
      const double t = std::exp(log_t);
      double power = std::exp(static_cast<double>(begin) * log_t);
      for (std::size_t n = begin; n < end; ++n) {
        out[n] += node.weight * power;
        power *= t;
      }
    }
  }
}

void evaluate_many(std::span<const double> coeffs, std::span<const std::complex<double>> points,
                   std::span<std::complex<double>> out) {
  const auto count = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < count; ++j) out[j] = horner(coeffs, points[j]);
}

}  // namespace parallel

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace cesaro::kernels

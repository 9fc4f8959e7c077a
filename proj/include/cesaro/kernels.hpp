#ifndef CESARO_KERNELS_HPP
#define CESARO_KERNELS_HPP

// Data-parallel inner loops. Every kernel exists twice: a plain serial
// reference (namespace serial) kept for testing and benchmarking, and an
// OpenMP version (namespace parallel) used by the library. The parallel
// versions partition work on fixed boundaries so results do not depend on
// the thread count.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cesaro {

// A point mass of a discretized radial measure, stored by its distance to
// the boundary (gap = 1 - t) so points near t = 1 keep full precision.
struct QuadratureNode {
  double gap;
  double weight;
};

namespace kernels {

namespace serial {

// out[n] = sum_{k<=n} a[k] b[n-k], n < out.size() <= min(a.size(), b.size())
void convolve(std::span<const double> a, std::span<const double> b, std::span<double> out);

// out[n] = sum_i w_i (1 - gap_i)^n for n < out.size()
void moments(std::span<const QuadratureNode> nodes, std::span<double> out);

// out[j] = sum_n c[n] z_j^n
void evaluate_many(std::span<const double> coeffs, std::span<const std::complex<double>> points,
                   std::span<std::complex<double>> out);

}  // namespace serial

namespace parallel {

void convolve(std::span<const double> a, std::span<const double> b, std::span<double> out);
void moments(std::span<const QuadratureNode> nodes, std::span<double> out);
void evaluate_many(std::span<const double> coeffs, std::span<const std::complex<double>> points,
                   std::span<std::complex<double>> out);

}  // namespace parallel

// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int max_threads();

}  // namespace kernels
}  // namespace cesaro

#endif  // CESARO_KERNELS_HPP

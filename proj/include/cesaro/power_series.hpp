#ifndef CESARO_POWER_SERIES_HPP
#define CESARO_POWER_SERIES_HPP

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace cesaro {

inline constexpr std::size_t kDefaultDegree = 1024;

// Truncated Taylor expansion a_0 + a_1 z + ... + a_N z^N of a function
// analytic in the unit disc. Values are immutable; every operation returns a
// new series. Binary operations truncate to the shorter operand and never
// zero-extend implicitly.
class PowerSeries {
 public:
  PowerSeries() : coeffs_{0.0} {}
  explicit PowerSeries(std::vector<double> coeffs);

  static PowerSeries zeros(std::size_t degree);
  // 1 + 0 z + ... + 0 z^degree
  static PowerSeries unit(std::size_t degree = kDefaultDegree);
  // z^m truncated at `degree` (m <= degree)
  static PowerSeries monomial(std::size_t m, std::size_t degree);

  std::size_t degree() const { return coeffs_.size() - 1; }
  std::size_t size() const { return coeffs_.size(); }
  std::span<const double> coeffs() const { return coeffs_; }
  double operator[](std::size_t n) const { return coeffs_[n]; }

  // Keeps coefficients 0..degree (degree <= this->degree()).
  PowerSeries truncated(std::size_t degree) const;
  // Treats the series as an exact polynomial and pads with zeros. Only
  // meaningful when the truncation is known to be exact.
  PowerSeries zero_extended(std::size_t degree) const;

  PowerSeries& operator+=(const PowerSeries& other);
  PowerSeries& operator-=(const PowerSeries& other);
  PowerSeries& operator*=(double scale);

  friend bool operator==(const PowerSeries&, const PowerSeries&) = default;

 private:
  std::vector<double> coeffs_;
};

PowerSeries operator+(PowerSeries lhs, const PowerSeries& rhs);
PowerSeries operator-(PowerSeries lhs, const PowerSeries& rhs);
PowerSeries operator*(double scale, PowerSeries series);

// (1 - z)^{-(alpha+1)}: coefficients Gamma(n+alpha+1) / (n! Gamma(alpha+1)).
PowerSeries make_kernel_K(double alpha, std::size_t degree);
// sum n! Gamma(gamma+1) / Gamma(n+gamma+1) z^n; gamma = 0 gives 1/(1-z).
PowerSeries make_kernel_G(double gamma, std::size_t degree);

PowerSeries hadamard(const PowerSeries& f, const PowerSeries& g);
PowerSeries cauchy_product(const PowerSeries& f, const PowerSeries& g);

// D_alpha f = f * K_alpha (Hadamard), alpha > -1.
PowerSeries frac_derivative(const PowerSeries& f, double alpha);
// I_gamma f = f * G_gamma (Hadamard), gamma >= 0.
PowerSeries frac_integral(const PowerSeries& f, double gamma);
// Df = (z f)': coefficients (n + 1) a_n.
PowerSeries derivative_D(const PowerSeries& f);
// Sf = z f. The top coefficient a_N falls off so the degree is preserved.
PowerSeries shift_S(const PowerSeries& f);
// f_r(z) = f(r z), 0 <= r <= 1.
PowerSeries dilate(const PowerSeries& f, double r);

std::complex<double> evaluate(const PowerSeries& f, std::complex<double> z);
double evaluate(const PowerSeries& f, double x);

// Serialization: JSON array of numbers, or CSV with header "n,coeff".
// Numbers are written with 17 significant digits.
nlohmann::json to_json(const PowerSeries& f);
PowerSeries series_from_json(const nlohmann::json& j);
std::string to_csv(const PowerSeries& f);
PowerSeries series_from_csv(const std::string& text);
PowerSeries load_series(const std::string& path);
void save_series(const PowerSeries& f, const std::string& path);

// Shortest round-trippable fixed format used by every report writer.
std::string format_double(double value);

}  // namespace cesaro

#endif  // CESARO_POWER_SERIES_HPP

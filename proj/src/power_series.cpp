#include "cesaro/power_series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cesaro/kernels.hpp"
#include "cesaro/special.hpp"

namespace cesaro {

namespace {

void require_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw std::domain_error("PowerSeries: non-finite coefficient");
  }
}

std::size_t common_size(const PowerSeries& f, const PowerSeries& g) {
  return std::min(f.size(), g.size());
}

}  // namespace

PowerSeries::PowerSeries(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw std::invalid_argument("PowerSeries: need at least one coefficient");
  require_finite(coeffs_);
}

PowerSeries PowerSeries::zeros(std::size_t degree) {
  return PowerSeries(std::vector<double>(degree + 1, 0.0));
}

PowerSeries PowerSeries::unit(std::size_t degree) {
  std::vector<double> c(degree + 1, 0.0);
  c[0] = 1.0;
  return PowerSeries(std::move(c));
}

PowerSeries PowerSeries::monomial(std::size_t m, std::size_t degree) {
  if (m > degree) throw std::domain_error("monomial: power exceeds truncation degree");
  std::vector<double> c(degree + 1, 0.0);
  c[m] = 1.0;
  return PowerSeries(std::move(c));
}

PowerSeries PowerSeries::truncated(std::size_t degree) const {
  if (degree > this->degree()) throw std::domain_error("truncated: degree exceeds series degree");
  return PowerSeries(std::vector<double>(coeffs_.begin(), coeffs_.begin() + degree + 1));
}

PowerSeries PowerSeries::zero_extended(std::size_t degree) const {
  std::vector<double> c = coeffs_;
  if (degree + 1 > c.size()) c.resize(degree + 1, 0.0);
  return PowerSeries(std::move(c));
}

PowerSeries& PowerSeries::operator+=(const PowerSeries& other) {
  coeffs_.resize(std::min(coeffs_.size(), other.size()));
  for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] += other[n];
  return *this;
}

PowerSeries& PowerSeries::operator-=(const PowerSeries& other) {
  coeffs_.resize(std::min(coeffs_.size(), other.size()));
  for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] -= other[n];
  return *this;
}

PowerSeries& PowerSeries::operator*=(double scale) {
  for (double& c : coeffs_) c *= scale;
  require_finite(coeffs_);
  return *this;
}

PowerSeries operator+(PowerSeries lhs, const PowerSeries& rhs) { return lhs += rhs; }
PowerSeries operator-(PowerSeries lhs, const PowerSeries& rhs) { return lhs -= rhs; }
PowerSeries operator*(double scale, PowerSeries series) { return series *= scale; }

PowerSeries make_kernel_K(double alpha, std::size_t degree) {
  if (!(alpha > -1.0)) throw std::domain_error("make_kernel_K: alpha must exceed -1");
  std::vector<double> c(degree + 1);
  for (std::size_t n = 0; n <= degree; ++n) c[n] = std::exp(log_kernel_coeff(n, alpha));
  return PowerSeries(std::move(c));
}

PowerSeries make_kernel_G(double gamma, std::size_t degree) {
  if (!(gamma >= 0.0)) throw std::domain_error("make_kernel_G: gamma must be nonnegative");
  std::vector<double> c(degree + 1);
  // exp(-L) with the same L as K_gamma, so K_gamma * G_gamma = 1 to rounding.
  for (std::size_t n = 0; n <= degree; ++n) c[n] = std::exp(-log_kernel_coeff(n, gamma));
  return PowerSeries(std::move(c));
}

PowerSeries hadamard(const PowerSeries& f, const PowerSeries& g) {
  std::vector<double> c(common_size(f, g));
  for (std::size_t n = 0; n < c.size(); ++n) c[n] = f[n] * g[n];
  return PowerSeries(std::move(c));
}

PowerSeries cauchy_product(const PowerSeries& f, const PowerSeries& g) {
  std::vector<double> c(common_size(f, g));
  kernels::parallel::convolve(f.coeffs(), g.coeffs(), c);
  return PowerSeries(std::move(c));
}

PowerSeries frac_derivative(const PowerSeries& f, double alpha) {
  if (!(alpha > -1.0)) throw std::domain_error("frac_derivative: alpha must exceed -1");
  if (alpha == 0.0) return f;
  return hadamard(f, make_kernel_K(alpha, f.degree()));
}

PowerSeries frac_integral(const PowerSeries& f, double gamma) {
  if (!(gamma >= 0.0)) throw std::domain_error("frac_integral: gamma must be nonnegative");
  if (gamma == 0.0) return f;
  return hadamard(f, make_kernel_G(gamma, f.degree()));
}

PowerSeries derivative_D(const PowerSeries& f) {
  std::vector<double> c(f.size());
  for (std::size_t n = 0; n < c.size(); ++n) c[n] = static_cast<double>(n + 1) * f[n];
  return PowerSeries(std::move(c));
}

PowerSeries shift_S(const PowerSeries& f) {
  std::vector<double> c(f.size(), 0.0);
  for (std::size_t n = 1; n < c.size(); ++n) c[n] = f[n - 1];
  return PowerSeries(std::move(c));
}

PowerSeries dilate(const PowerSeries& f, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw std::domain_error("dilate: r must lie in [0, 1]");
  std::vector<double> c(f.size());
  double power = 1.0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    c[n] = f[n] * power;
    power *= r;
  }
  return PowerSeries(std::move(c));
}

std::complex<double> evaluate(const PowerSeries& f, std::complex<double> z) {
  std::complex<double> acc = 0.0;
  for (std::size_t n = f.size(); n-- > 0;) acc = acc * z + f[n];
  return acc;
}

double evaluate(const PowerSeries& f, double x) {
  double acc = 0.0;
  for (std::size_t n = f.size(); n-- > 0;) acc = acc * x + f[n];
  return acc;
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

nlohmann::json to_json(const PowerSeries& f) {
  return nlohmann::json(std::vector<double>(f.coeffs().begin(), f.coeffs().end()));
}

PowerSeries series_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("series JSON must be an array of numbers");
  return PowerSeries(j.get<std::vector<double>>());
}

std::string to_csv(const PowerSeries& f) {
  std::string out = "n,coeff\n";
  for (std::size_t n = 0; n < f.size(); ++n) {
    out += std::to_string(n);
    out += ',';
    out += format_double(f[n]);
    out += '\n';
  }
  return out;
}

PowerSeries series_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("n,coeff", 0) != 0) {
    throw std::invalid_argument("series CSV must start with header n,coeff");
  }
  std::vector<double> c;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("series CSV: malformed row: " + line);
    const auto index = std::stoull(line.substr(0, comma));
    if (index != c.size()) throw std::invalid_argument("series CSV: rows must be consecutive from 0");
    c.push_back(std::stod(line.substr(comma + 1)));
  }
  return PowerSeries(std::move(c));
}

PowerSeries load_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open series file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    return series_from_json(nlohmann::json::parse(text));
  }
  return series_from_csv(text);
}

void save_series(const PowerSeries& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write series file: " + path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
    out << to_csv(f);
  } else {
    out << to_json(f).dump() << '\n';
  }
}

}  // namespace cesaro

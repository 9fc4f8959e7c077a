#ifndef CESARO_RADIAL_MEASURE_HPP
#define CESARO_RADIAL_MEASURE_HPP

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cesaro/kernels.hpp"

namespace cesaro {

// Raised when a quadrature fails its own doubling certification or a
// computed sequence violates a structural invariant.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exponent s of a radial Carleson condition mu([r,1)) = O((1-r)^s).
// `infinite` marks measures supported away from t = 1 (s-Carleson for every
// s); `attained` is false when only every smaller exponent holds (e.g. a
// positive power of a logarithm multiplies the power law).
struct CarlesonExponent {
  double s = 0.0;
  bool infinite = false;
  bool attained = true;

  static CarlesonExponent finite(double s, bool attained = true) { return {s, false, attained}; }
  static CarlesonExponent unbounded() { return {0.0, true, true}; }
};

// Positive Borel measure on [0, 1): either finitely many atoms, or a density
// w(t) = (1-t)^e h(1-t) with h bounded near the boundary. Points are handled
// through their gap x = 1 - t throughout.
class RadialMeasure {
 public:
  using MomentRule = std::function<double(std::size_t)>;
  using TailRule = std::function<double(double)>;       // argument: x = 1 - r
  using SmoothFactor = std::function<double(double)>;   // h(x)

  static RadialMeasure atomic(std::string label, std::vector<QuadratureNode> atoms);
  static RadialMeasure density(std::string label, double endpoint_exponent, SmoothFactor h);

  RadialMeasure with_moment_rule(MomentRule rule) const;
  RadialMeasure with_tail_rule(TailRule rule) const;
  RadialMeasure with_total_mass(double mass) const;
  RadialMeasure with_exponent(CarlesonExponent exponent) const;

  const std::string& label() const;
  bool is_atomic() const;
  double endpoint_exponent() const;  // 0 for atomic measures
  std::optional<CarlesonExponent> known_exponent() const;
  bool has_closed_form_moments() const;
  bool has_closed_form_tail() const;
  double total_mass() const;

  // Default discretization: the atoms themselves, or graded Gauss-Legendre
  // panels (order 24) for densities.
  std::span<const QuadratureNode> nodes() const;

  // Density discretization over x = 1 - t in [0, x_max]: panels
  // [x_max 2^{-j-1}, x_max 2^{-j}] plus a last panel at the boundary, each
  // integrated with `order` Gauss-Legendre nodes after u = x^{e+1}, which
  // removes the endpoint singularity. Atomic measures return the atoms with
  // gap <= x_max.
  std::vector<QuadratureNode> discretize(std::size_t order, double x_max = 1.0) const;

  // sum_i w_i g(gap_i) over the default discretization.
  template <typename Fn>
  auto integrate(Fn&& g) const {
    using R = decltype(g(0.5));
    R acc{};
    for (const auto& node : nodes()) acc += node.weight * g(node.gap);
    return acc;
  }

  // Single moment, closed form when available.
  double moment(std::size_t n) const;
  // mu([1-x, 1)) from the closed-form rule, if the measure carries one.
  std::optional<double> closed_form_tail(double x) const;

 private:
  struct State;
  explicit RadialMeasure(std::shared_ptr<const State> state) : state_(std::move(state)) {}
  std::shared_ptr<const State> state_;
};

// Measure zoo addressed by name:
//   lebesgue, beta_weight(beta), power_carleson(s), dirac(t0),
//   dyadic_atomic(s), log_perturbed(s, a)
RadialMeasure zoo(const std::string& name, const std::vector<double>& params = {});
// Parses "name:param1,param2" (params optional).
RadialMeasure zoo_from_spec(const std::string& spec);

enum class MomentMethod { closed_form, quadrature };

struct MomentSequence {
  std::vector<double> values;
  std::string source;
  MomentMethod method = MomentMethod::closed_form;

  std::size_t degree() const { return values.size() - 1; }
  double operator[](std::size_t n) const { return values[n]; }
};

// mu_0..mu_N. Quadrature moments are certified by node doubling to 1e-10
// relative; a non-monotone result raises NumericError.
MomentSequence moments(const RadialMeasure& mu, std::size_t N);
std::string moments_csv(const MomentSequence& m);

// mu([r, 1)), 0 <= r < 1.
double tail(const RadialMeasure& mu, double r);

// Least-squares line through (abscissae, ordinates).
struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS
  std::vector<double> abscissae;
  std::vector<double> ordinates;
  std::string grid;
};

ExponentFit fit_line(std::vector<double> xs, std::vector<double> ys, std::string grid);
nlohmann::json to_json(const ExponentFit& fit);
ExponentFit exponent_fit_from_json(const nlohmann::json& j);

enum class CarlesonMethod { tail, moments, poisson };

struct CarlesonGrid {
  int k_min = 4;
  int k_max = 20;
  int window = 10;  // points used by the fit, counted from the boundary end
};

struct CarlesonFit {
  CarlesonMethod method = CarlesonMethod::tail;
  ExponentFit fit;
  double s = 0.0;             // estimated Carleson exponent
  bool infinite = false;      // quantity vanished on the fit window
  bool lower_bound = false;   // poisson probe saturated: only s >= sigma known
  double probe_exponent = 0;  // sigma for the poisson method
};

// tail:    slope of log mu([r,1)) against log(1-r), r_k = 1 - 2^{-k}
// moments: slope of log mu_n against -log n, n_k = 2^k
// poisson: growth g of int dmu(t)/(1-tr)^sigma against -log(1-r); s = sigma - g
CarlesonFit carleson_exponent(const RadialMeasure& mu, CarlesonMethod method,
                              const CarlesonGrid& grid = {}, double sigma = 0.0);

// int dmu(t) / (1 - t r)^sigma
double poisson_integral(const RadialMeasure& mu, double r, double sigma);

struct CarlesonCheck {
  bool is_carleson = false;
  double constant = 0.0;       // max over the grid of mu([r,1))/(1-r)^s
  std::vector<double> ratios;  // per grid point
};

CarlesonCheck is_s_carleson(const RadialMeasure& mu, double s, const CarlesonGrid& grid = {});

std::string to_string(CarlesonMethod method);

}  // namespace cesaro

#endif  // CESARO_RADIAL_MEASURE_HPP

#ifndef CESARO_NORM_ENGINE_HPP
#define CESARO_NORM_ENGINE_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cesaro/power_series.hpp"
#include "cesaro/radial_measure.hpp"

namespace cesaro {

// An exponent in (0, inf] with an explicit infinity flag.
struct Exponent {
  double value = 1.0;
  bool infinite = false;

  static Exponent finite(double v);
  static Exponent inf() { return {0.0, true}; }
  // Parses "inf", "infinity", "oo" or a positive number.
  static Exponent parse(const std::string& text);

  double reciprocal() const { return infinite ? 0.0 : 1.0 / value; }
  // p' with 1/p + 1/p' = 1; inf for p = 1 and 1 for p = inf. Requires p >= 1.
  Exponent conjugate() const;
  std::string str() const;
  bool operator==(const Exponent&) const = default;
};

struct MixedNormParams {
  Exponent p;
  Exponent q;
  double gamma = 1.0;

  MixedNormParams() = default;
  MixedNormParams(Exponent p_, Exponent q_, double gamma_);
  Exponent p_conjugate() const { return p.conjugate(); }
  std::string str() const;  // "H(p,q,gamma)"
  bool operator==(const MixedNormParams&) const = default;
};

nlohmann::json to_json(const MixedNormParams& params);
MixedNormParams mixed_norm_params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Exponent& e);
Exponent exponent_from_json(const nlohmann::json& j);

struct NormResult {
  double value = 0.0;
  bool converged = false;  // when false, value is only a lower bound
  double error_estimate = 0.0;
  std::vector<double> diagnostics;  // per-block contributions Phi(k)
};

nlohmann::json to_json(const NormResult& result);

// I_0 = {0}, I_n = [2^{n-1}, 2^n).
struct DyadicBlocks {
  static std::size_t block_of(std::size_t index);
  static std::pair<std::size_t, std::size_t> range(std::size_t block);  // half-open
  static std::size_t count(std::size_t degree);                          // blocks covering 0..degree
};

// ---------------------------------------------------------------------------
// integral means

struct MeanResult {
  double value = 0.0;
  bool certified = true;  // angular doubling agreed (always true for p = 2)
};

// M_p(f, r). p = 2 by Parseval, otherwise by M = max(8N, 512) uniform angular
// samples computed with a real-to-complex FFT.
double integral_mean(const PowerSeries& f, Exponent p, double r);
// As above, doubling M (at most six times) until two successive values agree
// to rel_tol; certified is false when they never do.
MeanResult integral_mean_certified(const PowerSeries& f, Exponent p, double r, double rel_tol = 1e-9);
// Same quantity from uniform samples even for p = 2 (used to cross-check Parseval).
double integral_mean_sampled(const PowerSeries& f, Exponent p, double r, std::size_t samples = 0);

// Upper estimate of the omitted part of the series beyond its degree at radius
// r: max of the top coefficients times r^{N+1}/(1-r).
double truncation_tail_estimate(const PowerSeries& f, double r);
// tail estimate <= rel_tol * M_2(f, r)
bool truncation_adequate(const PowerSeries& f, double r, double rel_tol = 1e-6);

// How a series is interpreted when r approaches 1.
enum class SeriesSemantics {
  polynomial,  // the series is the function; all radii are valid
  truncation,  // the series truncates an infinite one; radii beyond adequacy are skipped
};

struct MixedNormOptions {
  SeriesSemantics semantics = SeriesSemantics::polynomial;
  std::size_t gl_order = 16;
  std::size_t max_blocks = 80;
  double adequacy_tol = 1e-6;
  // > 0: integrate (or take the sup) only over r <= 1 - min_gap, which must be
  // a power of two; the result is the exact restricted quantity
  double min_gap = 0.0;
};

// ||f||_{(p,q,gamma)}. q < inf: dyadic blocks x = 1-r in [2^{-k-1}, 2^{-k}];
// q = inf: sup of (1-r)^gamma M_p(f,r) over the same blocks, refined at the max.
NormResult mixed_norm(const PowerSeries& f, const MixedNormParams& params, const MixedNormOptions& options = {});

// Contribution of one dyadic block x in [2^{-k-1}, 2^{-k}]: the integral of
// x^{gamma q - 1} M_p^q for q < inf, the block sup of x^gamma M_p for q = inf.
double block_contribution(const PowerSeries& f, const MixedNormParams& params, std::size_t k,
                          std::size_t gl_order = 16);

double hardy_norm(const PowerSeries& f, Exponent p);

double kellogg_norm(const std::vector<double>& a, Exponent p, Exponent q);

struct WeightedMomentResult {
  double value = 0.0;   // partial l^q norm at the full length (sup for q = inf)
  bool converged = false;
  bool diverged = false;  // increments clearly not decaying
  std::vector<double> partial;  // norms at N/4, N/2, N
  double ratio = 0.0;           // increment ratio used for the decision
};

// l^q behaviour of ((n+1)^theta mu_n).
WeightedMomentResult weighted_moment_lq(const MomentSequence& mu, double theta, Exponent q);

struct GrowthGrid {
  std::size_t k_min = 4;
  std::size_t k_max = 0;  // 0: largest k with 2^k <= N/16
  std::size_t window = 6;
};

// Least-squares slope of log M_p(f, 1-2^{-k}) against k log 2.
ExponentFit growth_exponent(const PowerSeries& f, Exponent p, GrowthGrid grid = {});

enum class Membership { member, non_member, inconclusive };
std::string to_string(Membership m);

// Coefficients of a fixed analytic function up to the requested degree.
using CoefficientRule = std::function<PowerSeries(std::size_t degree)>;

struct MembershipOptions {
  std::size_t k_min = 1;
  std::size_t k_max = 12;
  std::size_t window = 6;
  std::size_t base = 8;  // truncation N(k) = base * 2^k
  double member_ratio = 0.8;
  double nonmember_ratio = 0.9;
  double sup_member_ratio = 1.05;
  double sup_nonmember_ratio = 1.1;
};

struct MembershipResult {
  Membership verdict = Membership::inconclusive;
  std::vector<std::size_t> blocks;
  std::vector<double> phi;     // Phi(k) computed with truncation N(k)
  std::vector<double> ratios;  // Phi(k+1)/Phi(k) over the window
};

MembershipResult membership_classify(const CoefficientRule& rule, const MixedNormParams& params,
                                     const MembershipOptions& options = {});

std::string membership_csv(const MembershipResult& result);

}  // namespace cesaro

#endif  // CESARO_NORM_ENGINE_HPP

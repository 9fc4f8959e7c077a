#ifndef CESARO_BOUNDEDNESS_LAB_HPP
#define CESARO_BOUNDEDNESS_LAB_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cesaro/cesaro_ops.hpp"
#include "cesaro/norm_engine.hpp"
#include "cesaro/radial_measure.hpp"

namespace cesaro {

// A^p_alpha = H(p, p, (1 + alpha)/p); A^inf_gamma = H(inf, inf, gamma).
MixedNormParams bergman_space(double p, double alpha);
MixedNormParams korenblum_space(double gamma);

struct SpacePair {
  MixedNormParams source;
  MixedNormParams target;
  // set when a side was given as a weighted Bergman space A^p_alpha
  std::optional<double> source_bergman_alpha;
  std::optional<double> target_bergman_alpha;

  SpacePair() = default;
  SpacePair(MixedNormParams s, MixedNormParams t) : source(s), target(t) {}
  static SpacePair bergman(double p1, double alpha1, double p2, double alpha2);
  bool bergman_alias() const { return source_bergman_alpha.has_value() || target_bergman_alpha.has_value(); }
  SpacePair translated() const { return {source, target}; }
  // beta + gamma1 - gamma2 + 1/p1 - 1/p2
  double s_required(double beta) const;
  std::string str() const;
};

// "p,q,gamma" (p and q may be "inf"), "A:p,alpha" or "Ainf:gamma".
MixedNormParams parse_space(const std::string& text, std::optional<double>* bergman_alpha = nullptr);
std::string space_to_string(const MixedNormParams& params, std::optional<double> bergman_alpha = std::nullopt);

enum class Prediction { bounded, unbounded, critical, uncovered };
std::string to_string(Prediction p);
Prediction prediction_from_string(const std::string& text);

enum class Diagnosis { bounded, unbounded, inconclusive };
std::string to_string(Diagnosis d);
Diagnosis diagnosis_from_string(const std::string& text);

struct RulePrediction {
  Prediction predicted = Prediction::uncovered;
  std::string rule;      // "R1".."R8" or "none"
  std::string via;       // for R8: the rule applied to the translated pair
  double s_required = 0.0;
  bool has_s_required = false;
  std::string criterion;  // human-readable evaluation note
};

// Theorem oracle. R6/R7 need the measure itself (moment criteria); without it
// those cases come back uncovered.
RulePrediction predict(const CarlesonExponent& s_measure, double beta, const SpacePair& pair,
                       const RadialMeasure* mu = nullptr);

// Exponent used by the oracle: the measure's known exponent, otherwise a tail
// fit (never treated as attained).
CarlesonExponent oracle_exponent(const RadialMeasure& mu);

enum class FamilyKind { monomials, kernels, boundary_kernels };
std::string to_string(FamilyKind kind);
FamilyKind family_from_string(const std::string& text);

struct FamilyMember {
  std::size_t index = 0;     // k for kernel families (a = 1 - 2^{-k}), n for monomials
  double coordinate = 0.0;   // -log(1 - a) or log n
  double a = 0.0;            // dilation (kernel families)
  double eta = 0.0;          // kernel exponent (kernel families)
  std::size_t degree = 0;    // truncation used
  double source_law = 0.0;   // known source-norm law, up to constants
  PowerSeries series;
};

struct FamilyOptions {
  std::size_t k_min = 4;
  std::size_t k_max = 10;
  std::size_t base = 128;  // truncation N(k) = base * 2^k
};

// Kernel families use eta = gamma1 + 1/p1 (kernels) or 1/p1 + 1/q1 + gamma1
// (boundary_kernels). Monomials take n = 2^k.
std::vector<FamilyMember> test_family(FamilyKind kind, const MixedNormParams& source, const FamilyOptions& options = {});

// Family suited to a pair: kernels when q1 = inf, boundary kernels otherwise.
FamilyKind default_family(const SpacePair& pair);

struct ProbeRow {
  std::size_t index = 0;
  double coordinate = 0.0;
  double source_norm = 0.0;
  double target_norm = 0.0;
  double ratio = 0.0;
};

struct ProbeResult {
  FamilyKind family = FamilyKind::kernels;
  std::vector<ProbeRow> rows;
  ExponentFit fit;
  Diagnosis diagnosis = Diagnosis::inconclusive;
};

struct ProbeOptions {
  FamilyOptions family;
  std::size_t fit_window = 5;  // last points used for the slope
  double bounded_slope = 0.05;
  double unbounded_slope = 0.15;
};

// Ratio of the target norm of C f (over r <= 1 - 2^{-(k+2)} for kernel
// families) to the source norm of f along the family; slope against the
// family coordinate. Moments are computed once at the largest truncation.
ProbeResult probe(const RadialMeasure& mu, double beta, const SpacePair& pair, FamilyKind family,
                  const ProbeOptions& options = {});
ProbeResult probe(const MomentSequence& moments, double beta, const SpacePair& pair, FamilyKind family,
                  const ProbeOptions& options = {});
std::string probe_csv(const ProbeResult& result);

struct BoundednessVerdict {
  std::string measure;
  double beta = 0.0;
  SpacePair pair;
  CarlesonExponent s_measure;
  RulePrediction prediction;
  std::optional<ProbeResult> empirical;
  std::optional<bool> agreement;  // empty when either side is not definite
};

BoundednessVerdict evaluate_case(const RadialMeasure& mu, double beta, const SpacePair& pair,
                                 std::optional<FamilyKind> family = std::nullopt, const ProbeOptions& options = {});

nlohmann::json to_json(const BoundednessVerdict& verdict);
BoundednessVerdict verdict_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ProbeResult& result);
ProbeResult probe_result_from_json(const nlohmann::json& j);

struct MonomialProbeReport {
  std::vector<std::size_t> n;
  std::vector<double> mean;   // M_inf(C u_n, n/(n+1))
  std::vector<double> bound;  // (n+1)^beta mu_{2n}
  std::vector<double> ratio;
  double min_ratio = 0.0;
  double median_ratio = 0.0;
  bool stable = false;  // min >= median / 2
};

// n runs over powers of two from n_min up to N/2.
MonomialProbeReport monomial_lower_bound_probe(const RadialMeasure& mu, double beta, std::size_t N,
                                               std::size_t n_min = 8);

struct CrosscheckReport {
  double alpha = 0.0;
  MixedNormParams params;
  double theta = 0.0;  // weight exponent of the moment criterion
  bool theorem_applies = false;
  MembershipResult membership;
  WeightedMomentResult moment;
  std::optional<bool> agree;  // empty when a verdict is not definite
  bool contradiction = false;
};

// Membership of D_alpha F_mu in H(p,q,gamma) against the moment criterion
// ((n+1)^{alpha - gamma + 1/p' - 1/q} mu_n) in l^q.
CrosscheckReport fmu_membership_crosscheck(const RadialMeasure& mu, double alpha, const MixedNormParams& params,
                                           const MembershipOptions& options = {});

struct MeanwiseReport {
  std::vector<std::string> inputs;
  std::vector<std::size_t> k;                 // r_k = 1 - 2^{-k}
  std::vector<std::vector<double>> ratios;    // per input, per k
  std::vector<double> coarse_max;
  std::vector<double> refined_max;            // including half-integer k
  std::vector<double> tail_slope;             // slope of log ratio over the last points
  bool bounded = false;
};

// Ratio M_p(C f, r) / M_p(D_{beta+gamma-1/p'} F_mu, r) with f normalized in
// H(p, inf, gamma), p in {2, inf}.
MeanwiseReport mainprop_meanwise_check(const RadialMeasure& mu, double beta, double gamma, Exponent p,
                                       const std::vector<std::pair<std::string, PowerSeries>>& corpus,
                                       std::size_t k_min = 2, std::size_t k_max = 10);

struct GridCase {
  std::string id;
  std::string measure;  // zoo spec
  double beta = 1.0;
  SpacePair pair;
  std::optional<FamilyKind> family;
};

// The fixed 40-case agreement grid (rules R1, R2, R3, R7; margin >= 0.25).
std::vector<GridCase> released_grid();

}  // namespace cesaro

#endif  // CESARO_BOUNDEDNESS_LAB_HPP

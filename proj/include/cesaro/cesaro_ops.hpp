#ifndef CESARO_CESARO_OPS_HPP
#define CESARO_CESARO_OPS_HPP

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "cesaro/power_series.hpp"
#include "cesaro/radial_measure.hpp"

namespace cesaro {

// The operator C_{mu,beta} f(z) = int_0^1 f(tz) (1 - tz)^{-beta} dmu(t).
struct CesaroParams {
  RadialMeasure mu;
  double beta;

  CesaroParams(RadialMeasure measure, double b);
};

// F_mu = sum mu_n z^n
PowerSeries f_mu(const RadialMeasure& mu, std::size_t N);
// D_alpha F_mu = int dmu(t) / (1 - tz)^{alpha+1}; coefficients A_n^alpha mu_n.
PowerSeries d_alpha_f_mu(const RadialMeasure& mu, double alpha, std::size_t N);
PowerSeries d_alpha_f_mu(const MomentSequence& moments, double alpha);

// Coefficient path through the factorization mu_n * (f K_{beta-1})_n.
PowerSeries apply_cesaro(const CesaroParams& params, const PowerSeries& f);
PowerSeries apply_cesaro(const MomentSequence& moments, double beta, const PowerSeries& f);

// Second coefficient path: the double sum
//   mu_n sum_{k<=n} Gamma(n-k+beta)/((n-k)! Gamma(beta)) a_k
// with the Gamma ratios generated by their product recurrence instead of
// log-Gamma evaluation. Serial; used to cross-check apply_cesaro.
PowerSeries apply_cesaro_direct(const MomentSequence& moments, double beta, const PowerSeries& f);

// C_{mu,beta} applied to (1 - az)^{-eta}, 0 <= a < 1, eta > 0. The inner
// product (1 - az)^{-eta}(1 - z)^{-beta} is generated in O(N) by the
// three-term recurrence that follows from its logarithmic derivative; the
// forward direction follows the dominant solution, so it is stable.
PowerSeries apply_cesaro_to_kernel(const MomentSequence& moments, double beta, double a, double eta);
// (1 - az)^{-eta} truncated at the given degree.
PowerSeries dilated_kernel(double a, double eta, std::size_t degree);

// Integral path: quadrature of f(tz)(1-tz)^{-beta} against mu, |z| < 1.
std::complex<double> apply_cesaro_integral_at(const CesaroParams& params, const PowerSeries& f,
                                              std::complex<double> z);

// Generalized Cesaro operator C^{beta-1}: coefficients
//   (1/A_n^beta) sum_k A_{n-k}^{beta-1} a_k,  A_n^a = Gamma(n+1+a)/(n! Gamma(1+a)).
PowerSeries andersen_cbeta(const PowerSeries& f, double beta);

enum class Identity {
  factor0,           // C f = F_mu * (f K_{beta-1})
  factor1,           // C f = D_beta F_mu * C^{beta-1} f
  commutator,        // D C - C D = beta (C_{beta+1} - C_beta)
  leibniz_mix,       // D C f = C(Df) + beta C_{beta+1}(Sf)
  ibeta,             // I_beta(C f)(z) = int C^{beta-1}f(tz) dmu(t)
  gamma_recurrence,  // (g+1) D_{g+1} f = D_g D f + g D_g f
  beta_shift,        // C_{beta1+beta2} f = C_{beta2}(f K_{beta1-1})
};

inline constexpr Identity kAllIdentities[] = {
    Identity::factor0, Identity::factor1,         Identity::commutator, Identity::leibniz_mix,
    Identity::ibeta,   Identity::gamma_recurrence, Identity::beta_shift,
};

std::string to_string(Identity id);
Identity identity_from_string(const std::string& name);

struct IdentityParams {
  RadialMeasure mu;
  double beta = 1.0;
  double beta2 = 1.0;  // second shift for beta_shift (beta is beta1)
  double gamma = 1.0;  // order for gamma_recurrence
};

struct IdentityReport {
  Identity identity = Identity::factor0;
  std::string measure;
  double beta = 0.0;
  double beta2 = 0.0;
  double gamma = 0.0;
  std::size_t degree = 0;
  std::string input;  // label of the test input
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// Max per-coefficient relative deviation |l - r| / max(|l|, |r|, 1e-300).
double relative_deviation(const PowerSeries& lhs, const PowerSeries& rhs);

IdentityReport verify_identity(Identity id, const IdentityParams& params, const PowerSeries& f,
                               double tolerance, const std::string& input_label = "");

// Evaluation grid for the ibeta identity.
inline constexpr double kIbetaGrid[] = {0.1, 0.3, 0.5, 0.7, 0.9};

struct IdentitySuiteInput {
  std::vector<RadialMeasure> measures;
  std::vector<double> betas;
  std::vector<std::pair<std::string, PowerSeries>> corpus;
  double tolerance = 1e-11;
};

// Runs every identity over measures x betas x corpus, in parallel, and
// returns the reports sorted by (identity, measure, beta, input).
std::vector<IdentityReport> run_identity_suite(const IdentitySuiteInput& input);

// Seeded corpus of random polynomials with coefficients uniform in [0, 1).
std::vector<std::pair<std::string, PowerSeries>> random_corpus(std::size_t count, std::size_t degree,
                                                               unsigned seed);

nlohmann::json to_json(const IdentityReport& report);
IdentityReport identity_report_from_json(const nlohmann::json& j);

}  // namespace cesaro

#endif  // CESARO_CESARO_OPS_HPP

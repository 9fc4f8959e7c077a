#include "cesaro/cesaro_ops.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <tuple>

#include "cesaro/kernels.hpp"
#include "cesaro/special.hpp"

namespace cesaro {

CesaroParams::CesaroParams(RadialMeasure measure, double b) : mu(std::move(measure)), beta(b) {
  if (!(beta > 0.0)) throw std::domain_error("CesaroParams: beta must be positive");
}

PowerSeries f_mu(const RadialMeasure& mu, std::size_t N) { return PowerSeries(moments(mu, N).values); }

PowerSeries d_alpha_f_mu(const MomentSequence& m, double alpha) {
  return frac_derivative(PowerSeries(m.values), alpha);
}

PowerSeries d_alpha_f_mu(const RadialMeasure& mu, double alpha, std::size_t N) {
  if (!(alpha > -1.0)) throw std::domain_error("d_alpha_f_mu: alpha must exceed -1");
  return d_alpha_f_mu(moments(mu, N), alpha);
}

PowerSeries apply_cesaro(const MomentSequence& m, double beta, const PowerSeries& f) {
  if (!(beta > 0.0)) throw std::domain_error("apply_cesaro: beta must be positive");
  const std::size_t N = std::min(f.degree(), m.degree());
  const auto product = cauchy_product(f.truncated(N), make_kernel_K(beta - 1.0, N));
  std::vector<double> c(N + 1);
  for (std::size_t n = 0; n <= N; ++n) c[n] = m[n] * product[n];
  return PowerSeries(std::move(c));
}

PowerSeries apply_cesaro(const CesaroParams& params, const PowerSeries& f) {
  return apply_cesaro(moments(params.mu, f.degree()), params.beta, f);
}

PowerSeries apply_cesaro_direct(const MomentSequence& m, double beta, const PowerSeries& f) {
  if (!(beta > 0.0)) throw std::domain_error("apply_cesaro_direct: beta must be positive");
  const std::size_t N = std::min(f.degree(), m.degree());
  // weight[j] = Gamma(j+beta)/(j! Gamma(beta)) = prod_{i=1}^{j} (i-1+beta)/i
  std::vector<double> weight(N + 1);
  weight[0] = 1.0;
  for (std::size_t j = 1; j <= N; ++j) weight[j] = weight[j - 1] * ((j - 1.0 + beta) / j);
  std::vector<double> c(N + 1);
  for (std::size_t n = 0; n <= N; ++n) {
    double inner = 0.0;
    for (std::size_t k = 0; k <= n; ++k) inner += weight[n - k] * f[k];
    c[n] = m[n] * inner;
  }
  return PowerSeries(std::move(c));
}

PowerSeries dilated_kernel(double a, double eta, std::size_t degree) {
  if (!(a >= 0.0 && a < 1.0)) throw std::domain_error("dilated_kernel: need 0 <= a < 1");
  if (!(eta > 0.0)) throw std::domain_error("dilated_kernel: eta must be positive");
  std::vector<double> c(degree + 1, 0.0);
  c[0] = 1.0;
  if (a == 0.0) return PowerSeries(std::move(c));
  const double log_a = std::log(a);
  for (std::size_t n = 1; n <= degree; ++n) {
    c[n] = std::exp(static_cast<double>(n) * log_a + log_kernel_coeff(n, eta - 1.0));
  }
  return PowerSeries(std::move(c));
}

PowerSeries apply_cesaro_to_kernel(const MomentSequence& m, double beta, double a, double eta) {
  if (!(beta > 0.0)) throw std::domain_error("apply_cesaro_to_kernel: beta must be positive");
  if (!(a >= 0.0 && a < 1.0)) throw std::domain_error("apply_cesaro_to_kernel: need 0 <= a < 1");
  if (!(eta > 0.0)) throw std::domain_error("apply_cesaro_to_kernel: eta must be positive");
  const std::size_t N = m.degree();
  // g = (1-az)^{-eta}(1-z)^{-beta}:  (1-az)(1-z) g' = (a eta (1-z) + beta (1-az)) g, so
  // (n+1) g_{n+1} = ((1+a) n + a eta + beta) g_n - a (n - 1 + eta + beta) g_{n-1}
  std::vector<double> g(N + 1);
  g[0] = 1.0;
  if (N >= 1) g[1] = a * eta + beta;
  for (std::size_t n = 1; n < N; ++n) {
    const double dn = static_cast<double>(n);
    g[n + 1] = (((1.0 + a) * dn + a * eta + beta) * g[n] - a * (dn - 1.0 + eta + beta) * g[n - 1]) / (dn + 1.0);
  }
  for (std::size_t n = 0; n <= N; ++n) g[n] *= m[n];
  return PowerSeries(std::move(g));
}

std::complex<double> apply_cesaro_integral_at(const CesaroParams& params, const PowerSeries& f,
                                              std::complex<double> z) {
  if (!(std::abs(z) < 1.0)) throw std::domain_error("apply_cesaro_integral_at: need |z| < 1");
  const double beta = params.beta;
  const auto nodes = params.mu.nodes();
  std::vector<std::complex<double>> points(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) points[i] = (1.0 - nodes[i].gap) * z;
  std::vector<std::complex<double>> values(nodes.size());
  kernels::parallel::evaluate_many(f.coeffs(), points, values);
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    // 1 - tz = (1 - z) + x z
    const std::complex<double> base = (1.0 - z) + nodes[i].gap * z;
    acc += nodes[i].weight * values[i] * std::pow(base, -beta);
  }
  if (!std::isfinite(acc.real()) || !std::isfinite(acc.imag())) {
    throw NumericError("apply_cesaro_integral_at: non-finite quadrature result");
  }
  return acc;
}

PowerSeries andersen_cbeta(const PowerSeries& f, double beta) {
  if (!(beta > 0.0)) throw std::domain_error("andersen_cbeta: beta must be positive");
  const std::size_t N = f.degree();
  const auto product = cauchy_product(f, make_kernel_K(beta - 1.0, N));
  return hadamard(product, make_kernel_G(beta, N));
}

// ---------------------------------------------------------------------------
// identities

std::string to_string(Identity id) {
  switch (id) {
    case Identity::factor0: return "factor0";
    case Identity::factor1: return "factor1";
    case Identity::commutator: return "commutator";
    case Identity::leibniz_mix: return "leibniz-mix";
    case Identity::ibeta: return "ibeta";
    case Identity::gamma_recurrence: return "gamma-recurrence";
    case Identity::beta_shift: return "beta-shift";
  }
  return "?";
}

Identity identity_from_string(const std::string& name) {
  for (Identity id : kAllIdentities) {
    if (to_string(id) == name) return id;
  }
  throw std::domain_error("unknown identity '" + name + "'");
}

double relative_deviation(const PowerSeries& lhs, const PowerSeries& rhs) {
  const std::size_t count = std::min(lhs.size(), rhs.size());
  double worst = 0.0;
  for (std::size_t n = 0; n < count; ++n) {
    const double diff = std::abs(lhs[n] - rhs[n]);
    if (diff == 0.0) continue;
    const double scale = std::max({std::abs(lhs[n]), std::abs(rhs[n]), 1e-300});
    worst = std::max(worst, diff / scale);
  }
  return worst;
}

namespace {

double pointwise_deviation(double lhs, double rhs) {
  const double diff = std::abs(lhs - rhs);
  if (diff == 0.0) return 0.0;
  return diff / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
}

}  // namespace

IdentityReport verify_identity(Identity id, const IdentityParams& params, const PowerSeries& f,
                               double tolerance, const std::string& input_label) {
  const double beta = params.beta;
  if (!(beta > 0.0)) throw std::domain_error("verify_identity: beta must be positive");
  const std::size_t N = f.degree();
  IdentityReport report;
  report.identity = id;
  report.measure = params.mu.label();
  report.beta = beta;
  report.degree = N;
  report.input = input_label;
  report.tolerance = tolerance;

  const bool needs_measure = id != Identity::gamma_recurrence;
  MomentSequence m;
  if (needs_measure) m = moments(params.mu, N);

  switch (id) {
    case Identity::factor0: {
      const auto lhs = apply_cesaro_direct(m, beta, f);
      const auto rhs = hadamard(PowerSeries(m.values), cauchy_product(f, make_kernel_K(beta - 1.0, N)));
      report.deviation = relative_deviation(lhs, rhs);
      break;
    }
    case Identity::factor1: {
      const auto lhs = apply_cesaro_direct(m, beta, f);
      const auto rhs = hadamard(d_alpha_f_mu(m, beta), andersen_cbeta(f, beta));
      report.deviation = relative_deviation(lhs, rhs);
      break;
    }
    case Identity::commutator: {
      const auto lhs = derivative_D(apply_cesaro(m, beta, f)) - apply_cesaro(m, beta, derivative_D(f));
      const auto rhs = beta * (apply_cesaro(m, beta + 1.0, f) - apply_cesaro(m, beta, f));
      report.deviation = relative_deviation(lhs, rhs);
      break;
    }
    case Identity::leibniz_mix: {
      const auto lhs = derivative_D(apply_cesaro(m, beta, f));
      const auto rhs = apply_cesaro(m, beta, derivative_D(f)) + beta * apply_cesaro(m, beta + 1.0, shift_S(f));
      report.deviation = relative_deviation(lhs, rhs);
      break;
    }
    case Identity::ibeta: {
      const auto lhs = frac_integral(apply_cesaro(m, beta, f), beta);
      const auto inner = andersen_cbeta(f, beta);
      // coefficient form of the right side: mu_n (C^{beta-1} f)_n
      double dev = relative_deviation(lhs, hadamard(PowerSeries(m.values), inner));
      // pointwise form: quadrature of C^{beta-1}f(tz) against mu
      const auto nodes = params.mu.nodes();
      std::vector<std::complex<double>> points(nodes.size());
      std::vector<std::complex<double>> values(nodes.size());
      for (double z : kIbetaGrid) {
        for (std::size_t i = 0; i < nodes.size(); ++i) points[i] = (1.0 - nodes[i].gap) * z;
        kernels::parallel::evaluate_many(inner.coeffs(), points, values);
        double rhs = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) rhs += nodes[i].weight * values[i].real();
        dev = std::max(dev, pointwise_deviation(evaluate(lhs, z), rhs));
      }
      report.deviation = dev;
      break;
    }
    case Identity::gamma_recurrence: {
      const double g = params.gamma;
      if (!(g >= 0.0)) throw std::domain_error("gamma-recurrence: gamma must be nonnegative");
      report.gamma = g;
      const auto lhs = (g + 1.0) * frac_derivative(f, g + 1.0);
      const auto rhs = frac_derivative(derivative_D(f), g) + g * frac_derivative(f, g);
      report.deviation = relative_deviation(lhs, rhs);
      break;
    }
    case Identity::beta_shift: {
      const double b2 = params.beta2;
      if (!(b2 > 0.0)) throw std::domain_error("beta-shift: second beta must be positive");
      report.beta2 = b2;
      const auto lhs = apply_cesaro(m, beta + b2, f);
      const auto rhs = apply_cesaro(m, b2, cauchy_product(f, make_kernel_K(beta - 1.0, N)));
      report.deviation = relative_deviation(lhs, rhs);
      break;
    }
  }
  report.pass = report.deviation <= tolerance;
  return report;
}

std::vector<IdentityReport> run_identity_suite(const IdentitySuiteInput& input) {
  struct Case {
    Identity id;
    std::size_t measure, beta, f;
  };
  std::vector<Case> cases;
  for (Identity id : kAllIdentities) {
    for (std::size_t m = 0; m < input.measures.size(); ++m) {
      for (std::size_t b = 0; b < input.betas.size(); ++b) {
        for (std::size_t f = 0; f < input.corpus.size(); ++f) cases.push_back({id, m, b, f});
      }
    }
  }
  std::vector<IdentityReport> reports(cases.size());
  const auto count = static_cast<std::ptrdiff_t>(cases.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto& c = cases[i];
    IdentityParams params{input.measures[c.measure], input.betas[c.beta], 1.0, input.betas[c.beta]};
    const auto& [label, f] = input.corpus[c.f];
    reports[i] = verify_identity(c.id, params, f, input.tolerance, label);
  }
  std::stable_sort(reports.begin(), reports.end(), [](const auto& a, const auto& b) {
    const auto ka = to_string(a.identity), kb = to_string(b.identity);
    return std::tie(ka, a.measure, a.beta, a.input) < std::tie(kb, b.measure, b.beta, b.input);
  });
  return reports;
}

std::vector<std::pair<std::string, PowerSeries>> random_corpus(std::size_t count, std::size_t degree,
                                                               unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<std::pair<std::string, PowerSeries>> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> c(degree + 1);
    for (double& v : c) v = dist(rng);
    out.emplace_back("random-" + std::to_string(seed) + "-" + std::to_string(i), PowerSeries(std::move(c)));
  }
  return out;
}

nlohmann::json to_json(const IdentityReport& r) {
  nlohmann::json params = {{"beta", r.beta}, {"degree", r.degree}, {"input", r.input}};
  if (r.identity == Identity::beta_shift) params["beta2"] = r.beta2;
  if (r.identity == Identity::gamma_recurrence) params["gamma"] = r.gamma;
  return {{"identity", to_string(r.identity)},
          {"measure", r.measure},
          {"params", params},
          {"deviation", r.deviation},
          {"tolerance", r.tolerance},
          {"pass", r.pass}};
}

IdentityReport identity_report_from_json(const nlohmann::json& j) {
  IdentityReport r;
  r.identity = identity_from_string(j.at("identity").get<std::string>());
  r.measure = j.at("measure").get<std::string>();
  const auto& p = j.at("params");
  r.beta = p.at("beta").get<double>();
  r.degree = p.at("degree").get<std::size_t>();
  r.input = p.at("input").get<std::string>();
  r.beta2 = p.value("beta2", 0.0);
  r.gamma = p.value("gamma", 0.0);
  r.deviation = j.at("deviation").get<double>();
  r.tolerance = j.at("tolerance").get<double>();
  r.pass = j.at("pass").get<bool>();
  return r;
}

}  // namespace cesaro

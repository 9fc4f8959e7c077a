#include "cesaro/norm_engine.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "cesaro/special.hpp"

namespace cesaro {

// ---------------------------------------------------------------------------
// exponents and parameters

Exponent Exponent::finite(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::domain_error("exponent must be a positive finite number");
  return {v, false};
}

Exponent Exponent::parse(const std::string& text) {
  std::string t;
  for (char c : text) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "inf" || t == "infinity" || t == "oo") return inf();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw std::domain_error("cannot parse exponent '" + text + "'");
  }
  if (used != t.size()) throw std::domain_error("cannot parse exponent '" + text + "'");
  if (std::isinf(v) && v > 0) return inf();
  return finite(v);
}

Exponent Exponent::conjugate() const {
  if (infinite) return finite(1.0);
  if (value < 1.0) throw std::domain_error("conjugate exponent needs p >= 1");
  if (value == 1.0) return inf();
  return finite(value / (value - 1.0));
}

std::string Exponent::str() const { return infinite ? "inf" : format_double(value); }

MixedNormParams::MixedNormParams(Exponent p_, Exponent q_, double gamma_) : p(p_), q(q_), gamma(gamma_) {
  if (!p.infinite && !(p.value > 0.0)) throw std::domain_error("MixedNormParams: p must be positive");
  if (!q.infinite && !(q.value > 0.0)) throw std::domain_error("MixedNormParams: q must be positive");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::domain_error("MixedNormParams: gamma must be positive");
}

std::string MixedNormParams::str() const {
  return "H(" + p.str() + "," + q.str() + "," + format_double(gamma) + ")";
}

nlohmann::json to_json(const Exponent& e) {
  if (e.infinite) return "inf";
  return e.value;
}

Exponent exponent_from_json(const nlohmann::json& j) {
  if (j.is_string()) return Exponent::parse(j.get<std::string>());
  return Exponent::finite(j.get<double>());
}

nlohmann::json to_json(const MixedNormParams& params) {
  return {{"p", to_json(params.p)}, {"q", to_json(params.q)}, {"gamma", params.gamma}};
}

MixedNormParams mixed_norm_params_from_json(const nlohmann::json& j) {
  return MixedNormParams(exponent_from_json(j.at("p")), exponent_from_json(j.at("q")), j.at("gamma").get<double>());
}

nlohmann::json to_json(const NormResult& result) {
  return {{"value", result.value},
          {"converged", result.converged},
          {"error_estimate", result.error_estimate},
          {"diagnostics", result.diagnostics}};
}

std::size_t DyadicBlocks::block_of(std::size_t index) {
  std::size_t block = 0;
  while (index > 0) {
    index >>= 1;
    ++block;
  }
  return block;
}

std::pair<std::size_t, std::size_t> DyadicBlocks::range(std::size_t block) {
  if (block == 0) return {0, 1};
  return {std::size_t{1} << (block - 1), std::size_t{1} << block};
}

std::size_t DyadicBlocks::count(std::size_t degree) { return block_of(degree) + 1; }

// ---------------------------------------------------------------------------
// angular sampling

namespace {

std::mutex plan_mutex;
std::map<std::size_t, fftw_plan> plans;

fftw_plan plan_for(std::size_t m) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto it = plans.find(m);
  if (it != plans.end()) return it->second;
  double* in = fftw_alloc_real(m);
  fftw_complex* out = fftw_alloc_complex(m / 2 + 1);
  fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(m), in, out, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(in);
  fftw_free(out);
  if (plan == nullptr) throw std::runtime_error("FFTW planning failed");
  plans.emplace(m, plan);
  return plan;
}

// Length past which |a_n| r^n < 1e-20 max_k |a_k| r^k. Each term is bounded
// by M_1(f, r), so the dropped part is negligible against M_p for p >= 1.
std::size_t effective_size(const PowerSeries& f, double r) {
  std::vector<double> mag(f.size());
  double power = 1.0, peak = 0.0;
  for (std::size_t n = 0; n < f.size(); ++n) {
    mag[n] = std::abs(f[n]) * power;
    peak = std::max(peak, mag[n]);
    power *= r;
  }
  std::size_t last = f.size();
  while (last > 1 && mag[last - 1] <= 1e-20 * peak) --last;
  return last;
}

// M_p from m uniform samples of f(r e^{i theta}); m = 0 selects 8 times the
// effective length, at least kMinSamples. The coefficients are real, so |f| is symmetric under
// theta -> -theta and the half spectrum suffices.
constexpr std::size_t kMinSamples = 512;

double sampled_mean(const PowerSeries& f, Exponent p, double r, std::size_t m) {
  const std::size_t len = effective_size(f, r);
  if (m == 0) m = std::max(8 * len, kMinSamples);
  if (m < 2 * len) m = 2 * len;
  if (m % 2 != 0) ++m;
  std::vector<double> in(m, 0.0);
  double power = 1.0;
  for (std::size_t n = 0; n < len; ++n) {
    in[n] = f[n] * power;
    power *= r;
  }
  std::vector<std::complex<double>> out(m / 2 + 1);
  fftw_execute_dft_r2c(plan_for(m), in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  if (p.infinite) {
    double best = 0.0;
    for (const auto& v : out) best = std::max(best, std::abs(v));
    return best;
  }
  // scale by the max modulus before raising to p to avoid under/overflow
  double peak = 0.0;
  for (const auto& v : out) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double w = (j == 0 || j == m / 2) ? 1.0 : 2.0;
    acc += w * std::pow(std::abs(out[j]) / peak, p.value);
  }
  return peak * std::pow(acc / static_cast<double>(m), 1.0 / p.value);
}

double parseval_mean(const PowerSeries& f, double r) {
  const double r2 = r * r;
  // Horner in r^2 keeps the sum stable for r close to 1
  double acc = 0.0;
  for (std::size_t n = f.size(); n-- > 0;) acc = acc * r2 + f[n] * f[n];
  return std::sqrt(acc);
}

bool nonnegative(const PowerSeries& f) {
  return std::all_of(f.coeffs().begin(), f.coeffs().end(), [](double c) { return c >= 0.0; });
}

// f(r) for nonnegative coefficients, which is then the max of |f| on |z| = r
double horner_abs(const PowerSeries& f, double r) {
  double acc = 0.0;
  for (std::size_t n = f.size(); n-- > 0;) acc = acc * r + f[n];
  return acc;
}

void check_radius(double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw std::domain_error("integral_mean: r must lie in [0, 1]");
}

}  // namespace

double integral_mean(const PowerSeries& f, Exponent p, double r) {
  check_radius(r);
  if (!p.infinite && p.value == 2.0) return parseval_mean(f, r);
  if (p.infinite && nonnegative(f)) return horner_abs(f, r);
  if (f.size() == 1) return std::abs(f[0]);
  return sampled_mean(f, p, r, 0);
}

constexpr int kMaxDoublings = 6;

MeanResult integral_mean_certified(const PowerSeries& f, Exponent p, double r, double rel_tol) {
  check_radius(r);
  if ((!p.infinite && p.value == 2.0) || f.size() == 1) return {integral_mean(f, p, r), true};
  std::size_t m = std::max(8 * effective_size(f, r), kMinSamples);
  double coarse = sampled_mean(f, p, r, m);
  for (int doubling = 0; doubling < kMaxDoublings; ++doubling) {
    m *= 2;
    const double fine = sampled_mean(f, p, r, m);
    if (std::abs(fine - coarse) <= rel_tol * std::max(std::abs(fine), 1e-300)) return {fine, true};
    coarse = fine;
  }
  return {coarse, false};
}

double integral_mean_sampled(const PowerSeries& f, Exponent p, double r, std::size_t samples) {
  check_radius(r);
  return sampled_mean(f, p, r, samples);
}

double truncation_tail_estimate(const PowerSeries& f, double r) {
  if (r >= 1.0) return std::numeric_limits<double>::infinity();
  const std::size_t N = f.degree();
  const std::size_t first = N >= 7 ? N - 7 : 0;
  double top = 0.0;
  for (std::size_t n = first; n <= N; ++n) top = std::max(top, std::abs(f[n]));
  if (top == 0.0) return 0.0;
  return top * std::exp(static_cast<double>(N + 1) * std::log(r)) / (1.0 - r);
}

bool truncation_adequate(const PowerSeries& f, double r, double rel_tol) {
  return truncation_tail_estimate(f, r) <= rel_tol * parseval_mean(f, r);
}

// ---------------------------------------------------------------------------
// mixed norms

namespace {

// Integral of x^{gamma q - 1} M_p(f, 1-x)^q over [lo, hi].
double block_integral(const PowerSeries& f, const MixedNormParams& params, double lo, double hi, std::size_t order) {
  const auto& rule = gauss_legendre(order);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  const double q = params.q.value;
  const double a = params.gamma * q - 1.0;
  std::vector<double> terms(rule.nodes.size());
  const auto count = static_cast<std::ptrdiff_t>(terms.size());
#pragma omp parallel for schedule(static) if (f.size() > 4096)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const double x = mid + half * rule.nodes[i];
    const double mean = integral_mean(f, params.p, 1.0 - x);
    terms[i] = rule.weights[i] * std::exp(a * std::log(x)) * std::pow(mean, q);
  }
  double acc = 0.0;
  for (double t : terms) acc += t;
  return acc * half;
}

double weighted_sup_at(const PowerSeries& f, const MixedNormParams& params, double x) {
  return std::pow(x, params.gamma) * integral_mean(f, params.p, 1.0 - x);
}

// Sample points: the block endpoints and the Gauss-Legendre nodes.
std::vector<double> sup_samples(double lo, double hi, std::size_t order) {
  const auto& rule = gauss_legendre(order);
  std::vector<double> xs{lo, hi};
  for (double t : rule.nodes) xs.push_back(0.5 * (hi + lo) + 0.5 * (hi - lo) * t);
  std::sort(xs.begin(), xs.end());
  return xs;
}

double block_sup(const PowerSeries& f, const MixedNormParams& params, double lo, double hi, std::size_t order,
                 double* argmax = nullptr) {
  const auto xs = sup_samples(lo, hi, order);
  std::vector<double> values(xs.size());
  const auto count = static_cast<std::ptrdiff_t>(xs.size());
#pragma omp parallel for schedule(static) if (f.size() > 4096)
  for (std::ptrdiff_t i = 0; i < count; ++i) values[i] = weighted_sup_at(f, params, xs[i]);
  const auto best = std::max_element(values.begin(), values.end());
  if (argmax != nullptr) *argmax = xs[static_cast<std::size_t>(best - values.begin())];
  return *best;
}

// Golden-section refinement of a sampled maximum in log x.
double refine_sup(const PowerSeries& f, const MixedNormParams& params, double x, double lo, double hi) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = std::log(std::max(lo, x / 1.5));
  double b = std::log(std::min(hi, x * 1.5));
  auto g = [&](double u) { return weighted_sup_at(f, params, std::exp(u)); };
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double gc = g(c), gd = g(d);
  double best = std::max({gc, gd, g(std::log(x))});
  for (int it = 0; it < 60 && (b - a) > 1e-12; ++it) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + phi * (b - a);
      gd = g(d);
    }
    best = std::max({best, gc, gd});
  }
  return best;
}

double block_lo(std::size_t k) { return std::ldexp(1.0, -static_cast<int>(k) - 1); }
double block_hi(std::size_t k) { return std::ldexp(1.0, -static_cast<int>(k)); }

}  // namespace

double block_contribution(const PowerSeries& f, const MixedNormParams& params, std::size_t k, std::size_t gl_order) {
  if (params.q.infinite) return block_sup(f, params, block_lo(k), block_hi(k), gl_order);
  return block_integral(f, params, block_lo(k), block_hi(k), gl_order);
}

NormResult mixed_norm(const PowerSeries& f, const MixedNormParams& params, const MixedNormOptions& options) {
  NormResult result;
  const bool exact = options.semantics == SeriesSemantics::polynomial;
  // below this gap a degree-N polynomial has M_p(f, 1-x) essentially frozen
  const double frozen = 1.0 / (64.0 * static_cast<double>(std::max<std::size_t>(f.size(), 1)));
  const bool sup = params.q.infinite;
  bool stopped_early = false;
  std::size_t k = 0;
  const bool restricted = options.min_gap > 0.0;
  for (; k < options.max_blocks; ++k) {
    const double lo = block_lo(k);
    if (restricted && lo < options.min_gap * (1.0 - 1e-12)) break;
    if (!exact && !truncation_adequate(f, 1.0 - lo, options.adequacy_tol)) {
      stopped_early = true;
      break;
    }
    result.diagnostics.push_back(block_contribution(f, params, k, options.gl_order));
    if (exact && block_hi(k) < frozen) {
      ++k;
      break;
    }
  }
  const auto& phi = result.diagnostics;
  if (phi.empty()) {
    result.converged = false;
    return result;
  }

  if (restricted) {
    if (sup) {
      const auto best = std::max_element(phi.begin(), phi.end());
      const std::size_t kb = static_cast<std::size_t>(best - phi.begin());
      double argmax = 0.0;
      block_sup(f, params, block_lo(kb), block_hi(kb), options.gl_order, &argmax);
      result.value = std::max(*best, refine_sup(f, params, argmax, std::max(block_lo(kb + 1), block_lo(k - 1)),
                                                std::min(1.0, block_hi(kb) * 2)));
    } else {
      double total = 0.0;
      for (double v : phi) total += v;
      result.value = std::pow(total, 1.0 / params.q.value);
    }
    result.converged = !stopped_early;
    if (!result.converged) result.error_estimate = result.value;
    return result;
  }

  if (sup) {
    const auto best = std::max_element(phi.begin(), phi.end());
    const std::size_t kb = static_cast<std::size_t>(best - phi.begin());
    double argmax = 0.0;
    block_sup(f, params, block_lo(kb), block_hi(kb), options.gl_order, &argmax);
    result.value = std::max(*best, refine_sup(f, params, argmax, block_lo(kb + 1), std::min(1.0, block_hi(kb) * 2)));
    if (exact || !stopped_early) {
      result.converged = true;
    } else {
      // still growing at the resolution limit: the sup may lie beyond it
      const std::size_t n = phi.size();
      result.converged = n >= 2 && phi[n - 1] <= phi[n - 2] * (1.0 + 1e-3) && kb + 1 < n;
      if (!result.converged) result.error_estimate = result.value;
    }
    return result;
  }

  double total = 0.0;
  for (double v : phi) total += v;
  const double q = params.q.value;
  const double a = params.gamma * q;
  if (exact) {
    // remaining [0, x_k]: M_p frozen at its value at r = 1
    const double x = block_lo(k - 1);
    const double tail = std::pow(integral_mean(f, params.p, 1.0), q) * std::pow(x, a) / a;
    total += tail;
    result.converged = true;
    result.error_estimate = std::pow(total, 1.0 / q) * 1e-12 + (tail > 0 ? std::pow(tail, 1.0 / q) * 1e-3 : 0.0);
  } else if (!stopped_early) {
    result.converged = true;
  } else {
    const std::size_t n = phi.size();
    double rho = 1.0;
    if (n >= 3 && phi[n - 2] > 0 && phi[n - 3] > 0) {
      rho = std::max(phi[n - 1] / phi[n - 2], phi[n - 2] / phi[n - 3]);
    } else if (n >= 2 && phi[n - 2] > 0) {
      rho = phi[n - 1] / phi[n - 2];
    }
    if (phi[n - 1] == 0.0) rho = 0.0;
    if (rho <= 0.8) {
      const double tail = phi[n - 1] * rho / (1.0 - rho);
      total += tail;
      result.converged = true;
      result.error_estimate = std::pow(total, 1.0 / q) - std::pow(total - tail, 1.0 / q);
    } else {
      result.converged = false;
    }
  }
  result.value = std::pow(total, 1.0 / q);
  if (!result.converged) result.error_estimate = result.value;
  return result;
}

double hardy_norm(const PowerSeries& f, Exponent p) { return integral_mean(f, p, 1.0); }

double kellogg_norm(const std::vector<double>& a, Exponent p, Exponent q) {
  if (a.empty()) return 0.0;
  const std::size_t blocks = DyadicBlocks::count(a.size() - 1);
  std::vector<double> inner(blocks, 0.0);
  for (std::size_t b = 0; b < blocks; ++b) {
    auto [first, last] = DyadicBlocks::range(b);
    last = std::min(last, a.size());
    double acc = 0.0;
    for (std::size_t n = first; n < last; ++n) {
      if (p.infinite) {
        acc = std::max(acc, std::abs(a[n]));
      } else {
        acc += std::pow(std::abs(a[n]), p.value);
      }
    }
    inner[b] = p.infinite ? acc : std::pow(acc, 1.0 / p.value);
  }
  if (q.infinite) return *std::max_element(inner.begin(), inner.end());
  double acc = 0.0;
  for (double v : inner) acc += std::pow(v, q.value);
  return std::pow(acc, 1.0 / q.value);
}

WeightedMomentResult weighted_moment_lq(const MomentSequence& mu, double theta, Exponent q) {
  const std::size_t len = mu.values.size();
  if (len < 8) throw std::domain_error("weighted_moment_lq: need at least 8 moments");
  std::vector<double> terms(len);
  for (std::size_t n = 0; n < len; ++n) {
    terms[n] = mu[n] == 0.0 ? 0.0 : std::exp(theta * std::log(static_cast<double>(n + 1)) + std::log(mu[n]));
  }
  const std::size_t cuts[3] = {len / 4, len / 2, len};
  WeightedMomentResult result;
  if (q.infinite) {
    double running = 0.0, prev_block = 0.0, last_block = 0.0;
    std::size_t start = 0;
    for (std::size_t c = 0; c < 3; ++c) {
      double block = 0.0;
      for (std::size_t n = start; n < cuts[c]; ++n) block = std::max(block, terms[n]);
      running = std::max(running, block);
      result.partial.push_back(running);
      prev_block = last_block;
      last_block = block;
      start = cuts[c];
    }
    result.value = running;
    result.ratio = prev_block > 0.0 ? last_block / prev_block : (last_block > 0.0 ? 2.0 : 0.0);
    result.converged = result.ratio <= 1.05;
    result.diverged = result.ratio >= 1.1;
    return result;
  }
  double sum = 0.0;
  std::vector<double> increments;
  std::size_t start = 0;
  for (std::size_t c = 0; c < 3; ++c) {
    double inc = 0.0;
    for (std::size_t n = start; n < cuts[c]; ++n) inc += std::pow(terms[n], q.value);
    sum += inc;
    increments.push_back(inc);
    result.partial.push_back(std::pow(sum, 1.0 / q.value));
    start = cuts[c];
  }
  result.value = result.partial.back();
  const double d1 = increments[1], d2 = increments[2];
  result.ratio = d1 > 0.0 ? d2 / d1 : (d2 > 0.0 ? 2.0 : 0.0);
  result.converged = result.ratio <= 0.8;
  result.diverged = result.ratio >= 0.95;
  return result;
}

ExponentFit growth_exponent(const PowerSeries& f, Exponent p, GrowthGrid grid) {
  std::size_t k_cap = 0;
  while ((std::size_t{16} << (k_cap + 1)) <= f.size()) ++k_cap;
  if (grid.k_max == 0) grid.k_max = k_cap;
  if (grid.k_max > k_cap) throw std::domain_error("growth_exponent: grid exceeds truncation adequacy (2^k <= N/16)");
  if (grid.k_max < grid.k_min + 1) throw std::domain_error("growth_exponent: series too short for the grid");
  const std::size_t first = grid.k_max + 1 >= grid.k_min + grid.window ? grid.k_max + 1 - grid.window : grid.k_min;
  std::vector<double> xs, ys;
  for (std::size_t k = std::max(first, grid.k_min); k <= grid.k_max; ++k) {
    const double r = 1.0 - std::ldexp(1.0, -static_cast<int>(k));
    const double m = integral_mean(f, p, r);
    if (!(m > 0.0)) throw NumericError("growth_exponent: vanishing integral mean");
    xs.push_back(static_cast<double>(k) * std::log(2.0));
    ys.push_back(std::log(m));
  }
  char label[64];
  std::snprintf(label, sizeof label, "r=1-2^-k,k=%zu..%zu", grid.k_min, grid.k_max);
  return fit_line(std::move(xs), std::move(ys), label);
}

std::string to_string(Membership m) {
  switch (m) {
    case Membership::member: return "member";
    case Membership::non_member: return "non-member";
    case Membership::inconclusive: return "inconclusive";
  }
  return "?";
}

MembershipResult membership_classify(const CoefficientRule& rule, const MixedNormParams& params,
                                     const MembershipOptions& options) {
  if (options.window < 2 || options.k_max + 1 < options.k_min + options.window) {
    throw std::domain_error("membership_classify: window does not fit in the block range");
  }
  MembershipResult result;
  for (std::size_t k = options.k_min; k <= options.k_max; ++k) {
    const PowerSeries f = rule(options.base << k);
    result.blocks.push_back(k);
    result.phi.push_back(block_contribution(f, params, k));
  }
  const std::size_t n = result.phi.size();
  for (std::size_t i = n - options.window + 1; i < n; ++i) {
    const double prev = result.phi[i - 1];
    result.ratios.push_back(prev > 0.0 ? result.phi[i] / prev : (result.phi[i] > 0.0 ? 2.0 : 0.0));
  }
  const double lo = *std::min_element(result.ratios.begin(), result.ratios.end());
  const double hi = *std::max_element(result.ratios.begin(), result.ratios.end());
  const bool all_zero = std::all_of(result.phi.end() - options.window, result.phi.end(), [](double v) { return v == 0.0; });
  if (params.q.infinite) {
    if (all_zero || hi <= options.sup_member_ratio) {
      result.verdict = Membership::member;
    } else if (lo >= options.sup_nonmember_ratio) {
      result.verdict = Membership::non_member;
    }
  } else {
    if (all_zero || hi <= options.member_ratio) {
      result.verdict = Membership::member;
    } else if (lo >= options.nonmember_ratio) {
      result.verdict = Membership::non_member;
    }
  }
  return result;
}

std::string membership_csv(const MembershipResult& result) {
  std::ostringstream out;
  out << "k,phi,ratio\n";
  const std::size_t offset = result.phi.size() - result.ratios.size();
  for (std::size_t i = 0; i < result.phi.size(); ++i) {
    out << result.blocks[i] << ',' << format_double(result.phi[i]) << ',';
    if (i >= offset) out << format_double(result.ratios[i - offset]);
    out << '\n';
  }
  return out.str();
}

}  // namespace cesaro

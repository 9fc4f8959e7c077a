#include "cesaro/boundedness_lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "cesaro/special.hpp"

namespace cesaro {

namespace {

constexpr double kEps = 1e-12;

bool same(double a, double b) { return std::abs(a - b) <= kEps * std::max({1.0, std::abs(a), std::abs(b)}); }

// a <= b for exponents in (0, inf]
bool exp_le(const Exponent& a, const Exponent& b) {
  if (b.infinite) return true;
  if (a.infinite) return false;
  return a.value <= b.value + kEps;
}

bool exp_eq(const Exponent& a, const Exponent& b) {
  if (a.infinite || b.infinite) return a.infinite == b.infinite;
  return same(a.value, b.value);
}

bool at_least_one(const Exponent& p) { return p.infinite || p.value >= 1.0 - kEps; }

}  // namespace

// ---------------------------------------------------------------------------
// spaces

MixedNormParams bergman_space(double p, double alpha) {
  if (!(p > 0.0) || !std::isfinite(p)) throw std::domain_error("bergman_space: p must be positive and finite");
  if (!(alpha > -1.0)) throw std::domain_error("bergman_space: alpha must exceed -1");
  return MixedNormParams(Exponent::finite(p), Exponent::finite(p), (1.0 + alpha) / p);
}

MixedNormParams korenblum_space(double gamma) { return MixedNormParams(Exponent::inf(), Exponent::inf(), gamma); }

SpacePair SpacePair::bergman(double p1, double alpha1, double p2, double alpha2) {
  SpacePair pair(bergman_space(p1, alpha1), bergman_space(p2, alpha2));
  pair.source_bergman_alpha = alpha1;
  pair.target_bergman_alpha = alpha2;
  return pair;
}

double SpacePair::s_required(double beta) const {
  return beta + source.gamma - target.gamma + source.p.reciprocal() - target.p.reciprocal();
}

std::string space_to_string(const MixedNormParams& params, std::optional<double> bergman_alpha) {
  if (bergman_alpha) return "A:" + params.p.str() + "," + format_double(*bergman_alpha);
  return params.p.str() + "," + params.q.str() + "," + format_double(params.gamma);
}

std::string SpacePair::str() const {
  return space_to_string(source, source_bergman_alpha) + "->" + space_to_string(target, target_bergman_alpha);
}

MixedNormParams parse_space(const std::string& text, std::optional<double>* bergman_alpha) {
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) parts.push_back(item);
    return parts;
  };
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw std::domain_error("cannot parse space '" + text + "'");
    }
    if (used != s.size()) throw std::domain_error("cannot parse space '" + text + "'");
    return v;
  };
  if (bergman_alpha != nullptr) bergman_alpha->reset();
  if (text.rfind("A:", 0) == 0) {
    const auto parts = split(text.substr(2));
    if (parts.size() != 2) throw std::domain_error("Bergman space needs 'A:p,alpha': '" + text + "'");
    const double alpha = number(parts[1]);
    if (bergman_alpha != nullptr) *bergman_alpha = alpha;
    return bergman_space(number(parts[0]), alpha);
  }
  if (text.rfind("Ainf:", 0) == 0) return korenblum_space(number(text.substr(5)));
  const auto parts = split(text);
  if (parts.size() != 3) throw std::domain_error("space needs 'p,q,gamma': '" + text + "'");
  return MixedNormParams(Exponent::parse(parts[0]), Exponent::parse(parts[1]), number(parts[2]));
}

std::string to_string(Prediction p) {
  switch (p) {
    case Prediction::bounded: return "bounded";
    case Prediction::unbounded: return "unbounded";
    case Prediction::critical: return "critical";
    case Prediction::uncovered: return "uncovered";
  }
  return "?";
}

Prediction prediction_from_string(const std::string& text) {
  for (auto p : {Prediction::bounded, Prediction::unbounded, Prediction::critical, Prediction::uncovered}) {
    if (to_string(p) == text) return p;
  }
  throw std::domain_error("unknown prediction '" + text + "'");
}

std::string to_string(Diagnosis d) {
  switch (d) {
    case Diagnosis::bounded: return "bounded";
    case Diagnosis::unbounded: return "unbounded";
    case Diagnosis::inconclusive: return "inconclusive";
  }
  return "?";
}

Diagnosis diagnosis_from_string(const std::string& text) {
  for (auto d : {Diagnosis::bounded, Diagnosis::unbounded, Diagnosis::inconclusive}) {
    if (to_string(d) == text) return d;
  }
  throw std::domain_error("unknown diagnosis '" + text + "'");
}

// ---------------------------------------------------------------------------
// oracle

namespace {

struct RuleContext {
  const MixedNormParams& s;
  const MixedNormParams& t;
  double beta;
  double s_req;
};

bool match_r5(const RuleContext& c) {
  const double inv_p1_conj = 1.0 - c.s.p.reciprocal();
  return at_least_one(c.s.p) && at_least_one(c.t.p) && exp_le(c.s.q, c.t.q) && c.beta > inv_p1_conj + kEps &&
         c.s_req <= kEps;
}

bool same_shape(const RuleContext& c) {
  return !c.s.p.infinite && exp_eq(c.s.p, c.t.p) && !c.s.q.infinite && exp_eq(c.s.q, c.t.q);
}

bool match_r1(const RuleContext& c) { return at_least_one(c.s.p) && same_shape(c) && c.s_req > kEps; }

bool match_r2(const RuleContext& c) {
  return c.s.q.infinite && c.t.q.infinite && at_least_one(c.s.p) && at_least_one(c.t.p) && c.s_req > kEps;
}

bool h1q_frame(const RuleContext& c) {
  return !c.s.p.infinite && !c.t.p.infinite && c.t.p.value >= 1.0 - kEps && c.t.p.value <= c.s.p.value + kEps &&
         !c.s.q.infinite && !c.t.q.infinite && c.s.q.value <= c.t.q.value + kEps && c.s_req > kEps && !same_shape(c);
}

bool match_r3(const RuleContext& c) { return h1q_frame(c) && c.s.gamma < c.t.gamma - kEps; }

bool match_r4(const RuleContext& c) {
  const double d = c.t.p.reciprocal() - c.s.p.reciprocal();
  return h1q_frame(c) && !match_r3(c) && c.beta > d + kEps && c.s.gamma - d > kEps && c.s.gamma - d < c.t.gamma - kEps;
}

bool seq_shape(const RuleContext& c) {
  return c.s.q.infinite && !c.t.q.infinite && exp_eq(c.s.p, c.t.p) && at_least_one(c.s.p) && same(c.s.gamma, c.t.gamma);
}

bool match_r7(const RuleContext& c) {
  return seq_shape(c) && same(c.beta, 1.0) && (c.s.p.infinite || c.s.p.value >= 2.0 - kEps);
}

bool match_r6(const RuleContext& c) { return seq_shape(c) && !match_r7(c); }

struct Rule {
  const char* tag;
  bool (*matches)(const RuleContext&);
};

constexpr Rule kRules[] = {
    {"R5", match_r5}, {"R1", match_r1}, {"R2", match_r2}, {"R3", match_r3},
    {"R4", match_r4}, {"R7", match_r7}, {"R6", match_r6},
};

// Whether mu is s_req-Carleson; critical when the exponents coincide and the
// power law is not attained.
Prediction carleson_verdict(const CarlesonExponent& e, double s_req) {
  if (e.infinite) return Prediction::bounded;
  if (e.s > s_req + kEps) return Prediction::bounded;
  if (e.s < s_req - kEps) return Prediction::unbounded;
  return e.attained ? Prediction::bounded : Prediction::critical;
}

constexpr std::size_t kCriterionMoments = 16384;

Prediction from_moment_test(const WeightedMomentResult& r) {
  if (r.converged) return Prediction::bounded;
  if (r.diverged) return Prediction::unbounded;
  return Prediction::critical;
}

std::string describe_moment_test(double theta, const Exponent& q, const WeightedMomentResult& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "((n+1)^%.6g mu_n) in l^%s: increment ratio %.6g", theta, q.str().c_str(), r.ratio);
  return buf;
}

}  // namespace

CarlesonExponent oracle_exponent(const RadialMeasure& mu) {
  if (auto known = mu.known_exponent()) return *known;
  const auto fit = carleson_exponent(mu, CarlesonMethod::tail);
  if (fit.infinite) return CarlesonExponent::unbounded();
  return CarlesonExponent::finite(fit.s, false);
}

RulePrediction predict(const CarlesonExponent& s_measure, double beta, const SpacePair& pair, const RadialMeasure* mu) {
  if (!(beta > 0.0)) throw std::domain_error("predict: beta must be positive");
  const double s_req = pair.s_required(beta);
  const RuleContext ctx{pair.source, pair.target, beta, s_req};
  std::vector<const Rule*> hits;
  for (const auto& rule : kRules) {
    if (rule.matches(ctx)) hits.push_back(&rule);
  }
  if (hits.size() > 1) {
    throw std::logic_error("predict: rules " + std::string(hits[0]->tag) + " and " + hits[1]->tag + " overlap");
  }
  RulePrediction out;
  out.s_required = s_req;
  if (hits.empty()) {
    out.rule = "none";
    out.predicted = Prediction::uncovered;
    out.criterion = "no rule of the table covers this pair";
    return out;
  }
  const std::string tag = hits[0]->tag;
  out.rule = tag;
  const auto& s = pair.source;
  const auto& t = pair.target;
  if (tag == "R5") {
    out.predicted = Prediction::bounded;
    out.has_s_required = true;
    out.criterion = "gamma2 >= beta + gamma1 + 1/p1 - 1/p2: bounded for every measure";
  } else if (tag == "R1" || tag == "R3" || tag == "R4") {
    out.has_s_required = true;
    out.predicted = carleson_verdict(s_measure, s_req);
    out.criterion = "mu is s-Carleson with s = " + format_double(s_req);
  } else if (tag == "R2") {
    out.has_s_required = true;
    const double d = t.p.reciprocal() - s.p.reciprocal();
    const bool equivalence = exp_eq(s.p, t.p) || (exp_le(t.p, s.p) && beta > d + kEps);
    const Prediction v = carleson_verdict(s_measure, s_req);
    if (equivalence || v == Prediction::unbounded) {
      out.predicted = v;
      out.criterion = "mu is s-Carleson with s = " + format_double(s_req);
    } else {
      out.predicted = Prediction::uncovered;
      out.criterion = "only the necessity of the s-Carleson condition is known for this pair";
    }
  } else if (tag == "R7" || tag == "R6") {
    if (mu == nullptr) {
      out.predicted = Prediction::uncovered;
      out.criterion = "moment criterion needs the measure";
    } else if (tag == "R7") {
      const double theta = 1.0 - t.q.reciprocal();
      const auto r = weighted_moment_lq(moments(*mu, kCriterionMoments), theta, t.q);
      out.predicted = from_moment_test(r);
      out.criterion = describe_moment_test(theta, t.q, r);
    } else {
      const double gamma = s.gamma;
      const double inv_pc = 1.0 - s.p.reciprocal();
      const double alpha = beta + gamma - inv_pc;
      if (s.p.infinite || alpha < gamma - kEps) {
        const double theta = beta - t.q.reciprocal();
        const auto r = weighted_moment_lq(moments(*mu, kCriterionMoments), theta, t.q);
        out.predicted = from_moment_test(r);
        out.criterion = "D_" + format_double(alpha) + " F_mu in " + t.str() + " via " + describe_moment_test(theta, t.q, r);
      } else {
        MembershipOptions mopt;
        const auto m = moments(*mu, mopt.base << mopt.k_max);
        const auto rule = [&](std::size_t N) {
          return d_alpha_f_mu(MomentSequence{std::vector<double>(m.values.begin(), m.values.begin() + N + 1), m.source,
                                             m.method},
                              alpha);
        };
        const auto r = membership_classify(rule, t, mopt);
        out.predicted = r.verdict == Membership::member       ? Prediction::bounded
                        : r.verdict == Membership::non_member ? Prediction::unbounded
                                                               : Prediction::critical;
        out.criterion = "D_" + format_double(alpha) + " F_mu in " + t.str() + ": " + to_string(r.verdict);
      }
    }
  }
  if (pair.bergman_alias()) {
    out.via = out.rule;
    out.rule = "R8";
  }
  return out;
}

// ---------------------------------------------------------------------------
// families and probes

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::monomials: return "monomials";
    case FamilyKind::kernels: return "kernels";
    case FamilyKind::boundary_kernels: return "boundary_kernels";
  }
  return "?";
}

FamilyKind family_from_string(const std::string& text) {
  for (auto k : {FamilyKind::monomials, FamilyKind::kernels, FamilyKind::boundary_kernels}) {
    if (to_string(k) == text) return k;
  }
  throw std::domain_error("unknown family '" + text + "'");
}

FamilyKind default_family(const SpacePair& pair) {
  return pair.source.q.infinite ? FamilyKind::kernels : FamilyKind::boundary_kernels;
}

namespace {

// ||z^n||_{(p,q,gamma)}: M_p(z^n, r) = r^n for every p.
double monomial_norm(std::size_t n, const MixedNormParams& params) {
  const double g = params.gamma;
  const double dn = static_cast<double>(n);
  if (params.q.infinite) {
    if (n == 0) return 1.0;
    return std::exp(g * std::log(g / (dn + g)) + dn * std::log(dn / (dn + g)));
  }
  const double q = params.q.value;
  // int_0^1 (1-r)^{gamma q - 1} r^{nq} dr = B(gamma q, nq + 1)
  const double log_b = log_gamma(g * q) + log_gamma(dn * q + 1.0) - log_gamma(g * q + dn * q + 1.0);
  return std::exp(log_b / q);
}

double kernel_eta(FamilyKind kind, const MixedNormParams& source) {
  if (kind == FamilyKind::kernels) return source.gamma + source.p.reciprocal();
  return source.p.reciprocal() + source.q.reciprocal() + source.gamma;
}

}  // namespace

std::vector<FamilyMember> test_family(FamilyKind kind, const MixedNormParams& source, const FamilyOptions& options) {
  if (options.k_max < options.k_min) throw std::domain_error("test_family: empty index range");
  if (options.k_max > 16) throw std::domain_error("test_family: index beyond the truncation policy (k <= 16)");
  if (options.base < 8) throw std::domain_error("test_family: truncation base below 8");
  std::vector<FamilyMember> out;
  for (std::size_t k = options.k_min; k <= options.k_max; ++k) {
    FamilyMember m;
    m.index = k;
    m.degree = options.base << k;
    if (kind == FamilyKind::monomials) {
      const std::size_t n = std::size_t{1} << k;
      m.coordinate = std::log(static_cast<double>(n));
      m.source_law = monomial_norm(n, source);
      m.series = PowerSeries::monomial(n, m.degree);
    } else {
      m.a = 1.0 - std::ldexp(1.0, -static_cast<int>(k));
      m.eta = kernel_eta(kind, source);
      m.coordinate = static_cast<double>(k) * std::log(2.0);
      m.source_law = kind == FamilyKind::kernels ? 1.0 : std::pow(1.0 - m.a, -source.q.reciprocal());
      m.series = dilated_kernel(m.a, m.eta, m.degree);
    }
    out.push_back(std::move(m));
  }
  return out;
}

namespace {

MomentSequence prefix(const MomentSequence& m, std::size_t N) {
  if (N > m.degree()) throw std::domain_error("probe: moments shorter than the family truncation");
  return MomentSequence{std::vector<double>(m.values.begin(), m.values.begin() + N + 1), m.source, m.method};
}

// C_{mu,beta} z^n: coefficients mu_k A^{beta-1}_{k-n}, k >= n.
PowerSeries cesaro_of_monomial(const MomentSequence& m, double beta, std::size_t n) {
  const std::size_t N = m.degree();
  std::vector<double> c(N + 1, 0.0);
  double w = 1.0;
  for (std::size_t k = n; k <= N; ++k) {
    const std::size_t j = k - n;
    if (j > 0) w *= (static_cast<double>(j) - 1.0 + beta) / static_cast<double>(j);
    c[k] = m[k] * w;
  }
  return PowerSeries(std::move(c));
}

}  // namespace

ProbeResult probe(const MomentSequence& m, double beta, const SpacePair& pair, FamilyKind family,
                  const ProbeOptions& options) {
  if (!(beta > 0.0)) throw std::domain_error("probe: beta must be positive");
  ProbeResult result;
  result.family = family;
  const auto members = test_family(family, pair.source, options.family);
  result.rows.resize(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto& f = members[i];
    const auto mk = prefix(m, f.degree);
    ProbeRow row;
    row.index = f.index;
    row.coordinate = f.coordinate;
    PowerSeries image = family == FamilyKind::monomials ? cesaro_of_monomial(mk, beta, std::size_t{1} << f.index)
                                                        : apply_cesaro_to_kernel(mk, beta, f.a, f.eta);
    if (family == FamilyKind::monomials) {
      row.source_norm = f.source_law;
    } else {
      const auto src = mixed_norm(f.series, pair.source);
      row.source_norm = src.value;
    }
    MixedNormOptions target_options;
    // kernel families: up to two dyadic blocks past the dilation scale
    const int depth = static_cast<int>(f.index) + (family == FamilyKind::monomials ? 1 : 2);
    target_options.min_gap = std::ldexp(1.0, -depth);
    const auto tgt = mixed_norm(image, pair.target, target_options);
    row.target_norm = tgt.value;
    row.ratio = row.source_norm > 0.0 ? row.target_norm / row.source_norm : std::numeric_limits<double>::infinity();
    result.rows[i] = row;
  }
  std::vector<double> xs, ys;
  const std::size_t first = result.rows.size() > options.fit_window ? result.rows.size() - options.fit_window : 0;
  bool infinite = false;
  for (std::size_t i = first; i < result.rows.size(); ++i) {
    if (!std::isfinite(result.rows[i].ratio)) infinite = true;
    xs.push_back(result.rows[i].coordinate);
    ys.push_back(std::log(result.rows[i].ratio));
  }
  char grid[96];
  std::snprintf(grid, sizeof grid, "%s,k=%zu..%zu,N(k)=%zu*2^k,fit=last%zu", to_string(family).c_str(),
                options.family.k_min, options.family.k_max, options.family.base, options.fit_window);
  if (infinite) {
    result.fit.grid = grid;
    result.fit.slope = std::numeric_limits<double>::infinity();
    result.diagnosis = Diagnosis::unbounded;
    return result;
  }
  result.fit = fit_line(xs, ys, grid);
  if (result.fit.slope <= options.bounded_slope) {
    result.diagnosis = Diagnosis::bounded;
  } else if (result.fit.slope >= options.unbounded_slope) {
    result.diagnosis = Diagnosis::unbounded;
  }
  return result;
}

ProbeResult probe(const RadialMeasure& mu, double beta, const SpacePair& pair, FamilyKind family,
                  const ProbeOptions& options) {
  return probe(moments(mu, options.family.base << options.family.k_max), beta, pair, family, options);
}

std::string probe_csv(const ProbeResult& result) {
  std::ostringstream out;
  out << "index,source_norm,target_norm,ratio\n";
  for (const auto& row : result.rows) {
    out << row.index << ',' << format_double(row.source_norm) << ',' << format_double(row.target_norm) << ','
        << format_double(row.ratio) << '\n';
  }
  return out.str();
}

BoundednessVerdict evaluate_case(const RadialMeasure& mu, double beta, const SpacePair& pair,
                                 std::optional<FamilyKind> family, const ProbeOptions& options) {
  BoundednessVerdict v;
  v.measure = mu.label();
  v.beta = beta;
  v.pair = pair;
  v.s_measure = oracle_exponent(mu);
  v.prediction = predict(v.s_measure, beta, pair, &mu);
  v.empirical = probe(mu, beta, pair, family.value_or(default_family(pair)), options);
  const bool definite = v.prediction.predicted == Prediction::bounded || v.prediction.predicted == Prediction::unbounded;
  if (definite && v.empirical->diagnosis != Diagnosis::inconclusive) {
    v.agreement = (v.prediction.predicted == Prediction::bounded) == (v.empirical->diagnosis == Diagnosis::bounded);
  }
  return v;
}

// ---------------------------------------------------------------------------
// json

namespace {

nlohmann::json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

double number_or_inf(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::domain_error("expected a number, got '" + s + "'");
  }
  return j.get<double>();
}

nlohmann::json space_json(const MixedNormParams& params, std::optional<double> alpha) {
  auto j = to_json(params);
  if (alpha) j["bergman_alpha"] = *alpha;
  return j;
}

}  // namespace

nlohmann::json to_json(const ProbeResult& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"index", r.index},
                    {"coordinate", r.coordinate},
                    {"source_norm", finite_or_string(r.source_norm)},
                    {"target_norm", finite_or_string(r.target_norm)},
                    {"ratio", finite_or_string(r.ratio)}});
  }
  auto fit = to_json(result.fit);
  fit["slope"] = finite_or_string(result.fit.slope);
  return {{"family", to_string(result.family)},
          {"diagnosis", to_string(result.diagnosis)},
          {"fit", fit},
          {"rows", rows}};
}

ProbeResult probe_result_from_json(const nlohmann::json& j) {
  ProbeResult r;
  r.family = family_from_string(j.at("family").get<std::string>());
  r.diagnosis = diagnosis_from_string(j.at("diagnosis").get<std::string>());
  auto fit = j.at("fit");
  const double slope = number_or_inf(fit.at("slope"));
  fit["slope"] = 0.0;
  r.fit = exponent_fit_from_json(fit);
  r.fit.slope = slope;
  for (const auto& row : j.at("rows")) {
    r.rows.push_back({row.at("index").get<std::size_t>(), row.at("coordinate").get<double>(),
                      number_or_inf(row.at("source_norm")), number_or_inf(row.at("target_norm")),
                      number_or_inf(row.at("ratio"))});
  }
  return r;
}

nlohmann::json to_json(const BoundednessVerdict& v) {
  nlohmann::json j;
  j["measure"] = v.measure;
  j["beta"] = v.beta;
  j["source"] = space_json(v.pair.source, v.pair.source_bergman_alpha);
  j["target"] = space_json(v.pair.target, v.pair.target_bergman_alpha);
  j["predicted"] = to_string(v.prediction.predicted);
  j["predicted_by"] = v.prediction.rule;
  if (!v.prediction.via.empty()) j["via"] = v.prediction.via;
  j["s_required"] = v.prediction.has_s_required ? nlohmann::json(v.prediction.s_required) : nlohmann::json(nullptr);
  j["s_measure"] = v.s_measure.infinite ? nlohmann::json("inf") : nlohmann::json(v.s_measure.s);
  j["s_attained"] = v.s_measure.attained;
  j["criterion"] = v.prediction.criterion;
  j["slope"] = v.empirical ? finite_or_string(v.empirical->fit.slope) : nlohmann::json(nullptr);
  j["diagnosis"] = v.empirical ? nlohmann::json(to_string(v.empirical->diagnosis)) : nlohmann::json(nullptr);
  j["agreement"] = v.agreement ? nlohmann::json(*v.agreement) : nlohmann::json("n/a");
  if (v.empirical) j["probe"] = to_json(*v.empirical);
  return j;
}

BoundednessVerdict verdict_from_json(const nlohmann::json& j) {
  BoundednessVerdict v;
  v.measure = j.at("measure").get<std::string>();
  v.beta = j.at("beta").get<double>();
  v.pair.source = mixed_norm_params_from_json(j.at("source"));
  v.pair.target = mixed_norm_params_from_json(j.at("target"));
  if (j.at("source").contains("bergman_alpha")) v.pair.source_bergman_alpha = j.at("source").at("bergman_alpha").get<double>();
  if (j.at("target").contains("bergman_alpha")) v.pair.target_bergman_alpha = j.at("target").at("bergman_alpha").get<double>();
  v.prediction.predicted = prediction_from_string(j.at("predicted").get<std::string>());
  v.prediction.rule = j.at("predicted_by").get<std::string>();
  v.prediction.via = j.value("via", std::string());
  v.prediction.has_s_required = !j.at("s_required").is_null();
  v.prediction.s_required = v.prediction.has_s_required ? j.at("s_required").get<double>() : v.pair.s_required(v.beta);
  const auto& sm = j.at("s_measure");
  v.s_measure = sm.is_string() ? CarlesonExponent::unbounded() : CarlesonExponent::finite(sm.get<double>());
  v.s_measure.attained = j.at("s_attained").get<bool>();
  v.prediction.criterion = j.at("criterion").get<std::string>();
  if (j.contains("probe")) v.empirical = probe_result_from_json(j.at("probe"));
  if (j.at("agreement").is_boolean()) v.agreement = j.at("agreement").get<bool>();
  return v;
}

// ---------------------------------------------------------------------------
// cross-checks

MonomialProbeReport monomial_lower_bound_probe(const RadialMeasure& mu, double beta, std::size_t N, std::size_t n_min) {
  if (!(beta > 0.0)) throw std::domain_error("monomial_lower_bound_probe: beta must be positive");
  if (n_min == 0 || 2 * n_min > N) throw std::domain_error("monomial_lower_bound_probe: need 1 <= n_min <= N/2");
  const auto m = moments(mu, N);
  MonomialProbeReport report;
  for (std::size_t n = n_min; 2 * n <= N; n *= 2) {
    const double r = static_cast<double>(n) / static_cast<double>(n + 1);
    // nonnegative coefficients: M_inf is the value at z = r
    const double mean = integral_mean(cesaro_of_monomial(m, beta, n), Exponent::inf(), r);
    const double bound = std::pow(static_cast<double>(n + 1), beta) * m[2 * n];
    report.n.push_back(n);
    report.mean.push_back(mean);
    report.bound.push_back(bound);
    report.ratio.push_back(bound > 0.0 ? mean / bound : std::numeric_limits<double>::infinity());
  }
  auto sorted = report.ratio;
  std::sort(sorted.begin(), sorted.end());
  report.min_ratio = sorted.front();
  const std::size_t h = sorted.size() / 2;
  report.median_ratio = sorted.size() % 2 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);
  report.stable = report.min_ratio >= 0.5 * report.median_ratio;
  return report;
}

CrosscheckReport fmu_membership_crosscheck(const RadialMeasure& mu, double alpha, const MixedNormParams& params,
                                           const MembershipOptions& options) {
  if (!(alpha > -1.0)) throw std::domain_error("fmu_membership_crosscheck: alpha must exceed -1");
  if (!at_least_one(params.p)) throw std::domain_error("fmu_membership_crosscheck: needs p >= 1");
  CrosscheckReport report;
  report.alpha = alpha;
  report.params = params;
  const double inv_pc = 1.0 - params.p.reciprocal();
  report.theta = alpha - params.gamma + inv_pc - params.q.reciprocal();
  report.theorem_applies = params.p.infinite || alpha < params.gamma;
  const auto m = moments(mu, options.base << options.k_max);
  const auto rule = [&](std::size_t N) { return d_alpha_f_mu(prefix(m, N), alpha); };
  report.membership = membership_classify(rule, params, options);
  report.moment = weighted_moment_lq(m, report.theta, params.q);
  const bool member_definite = report.membership.verdict != Membership::inconclusive;
  const bool moment_definite = report.moment.converged || report.moment.diverged;
  if (member_definite && moment_definite) {
    report.agree = (report.membership.verdict == Membership::member) == report.moment.converged;
    report.contradiction = !*report.agree;
  }
  return report;
}

MeanwiseReport mainprop_meanwise_check(const RadialMeasure& mu, double beta, double gamma, Exponent p,
                                       const std::vector<std::pair<std::string, PowerSeries>>& corpus,
                                       std::size_t k_min, std::size_t k_max) {
  if (!(p.infinite || p.value == 2.0)) throw std::domain_error("mainprop_meanwise_check: p must be 2 or inf");
  if (k_max < k_min + 4) throw std::domain_error("mainprop_meanwise_check: need at least five grid points");
  const std::size_t N = std::size_t{16} << k_max;
  const auto m = moments(mu, N);
  const double alpha = beta + gamma - (1.0 - p.reciprocal());
  const auto dominant = d_alpha_f_mu(m, alpha);
  const MixedNormParams source(p, Exponent::inf(), gamma);
  MeanwiseReport report;
  for (std::size_t k = k_min; k <= k_max; ++k) report.k.push_back(k);
  report.bounded = true;
  for (const auto& [label, f] : corpus) {
    const double norm = mixed_norm(f, source).value;
    if (!(norm > 0.0)) throw std::domain_error("mainprop_meanwise_check: input '" + label + "' has zero norm");
    const auto image = apply_cesaro(m, beta, (1.0 / norm) * f.zero_extended(N));
    auto ratio_at = [&](double k) {
      const double r = 1.0 - std::exp2(-k);
      return integral_mean(image, p, r) / integral_mean(dominant, p, r);
    };
    std::vector<double> ratios;
    double coarse = 0.0, refined = 0.0;
    for (std::size_t k = k_min; k <= k_max; ++k) {
      const double v = ratio_at(static_cast<double>(k));
      ratios.push_back(v);
      coarse = std::max(coarse, v);
      refined = std::max(refined, v);
      if (k < k_max) refined = std::max(refined, ratio_at(static_cast<double>(k) + 0.5));
    }
    std::vector<double> xs, ys;
    for (std::size_t i = ratios.size() - 5; i < ratios.size(); ++i) {
      xs.push_back(static_cast<double>(report.k[i]) * std::log(2.0));
      ys.push_back(std::log(ratios[i]));
    }
    const double slope = fit_line(xs, ys, "meanwise").slope;
    report.inputs.push_back(label);
    report.ratios.push_back(ratios);
    report.coarse_max.push_back(coarse);
    report.refined_max.push_back(refined);
    report.tail_slope.push_back(slope);
    if (!(slope <= 0.05 && refined <= 1.25 * coarse)) report.bounded = false;
  }
  return report;
}

// ---------------------------------------------------------------------------
// released grid

std::vector<GridCase> released_grid() {
  struct Row {
    const char* id;
    const char* measure;
    double beta;
    const char* source;
    const char* target;
  };
  // Every case sits at least 0.25 away from the critical exponent of its rule.
  static const Row rows[] = {
      {"R1-01", "lebesgue", 0.5, "2,2,1", "2,2,1"},
      {"R1-02", "power_carleson:0.5", 1, "2,2,1", "2,2,1"},
      {"R1-03", "beta_weight:2", 1.5, "2,2,0.5", "2,2,0.5"},
      {"R1-04", "dyadic_atomic:1", 1, "2,1,1", "2,1,0.5"},
      {"R1-05", "dirac:0.5", 2, "2,2,1", "2,2,0.5"},
      {"R1-06", "log_perturbed:0.7,1.5", 1, "2,2,1", "2,2,1"},
      {"R1-07", "power_carleson:1.5", 1, "2,4,0.5", "2,4,0.5"},
      {"R1-08", "lebesgue", 2, "2,2,0.5", "2,2,0.5"},
      {"R1-09", "power_carleson:2.5", 1, "1,2,1", "1,2,0.5"},
      {"R1-10", "beta_weight:0.5", 0.5, "2,3,1", "2,3,0.6"},
      {"R2-01", "lebesgue", 0.5, "2,inf,1", "2,inf,1"},
      {"R2-02", "power_carleson:0.5", 1, "2,inf,1", "2,inf,1"},
      {"R2-03", "dirac:0.5", 1, "2,inf,1", "2,inf,1"},
      {"R2-04", "beta_weight:2", 1, "inf,inf,1", "inf,inf,0.5"},
      {"R2-05", "dyadic_atomic:1", 1, "inf,inf,1", "inf,inf,0.5"},
      {"R2-06", "lebesgue", 1, "inf,inf,1", "2,inf,1"},
      {"R2-07", "power_carleson:0.5", 1.5, "inf,inf,1", "2,inf,1"},
      {"R2-08", "log_perturbed:1.5,1", 1, "2,inf,1", "2,inf,1"},
      {"R2-09", "beta_weight:0.5", 2, "2,inf,1", "2,inf,1.5"},
      {"R2-10", "dyadic_atomic:2", 1, "2,inf,0.5", "2,inf,0.5"},
      {"R3-01", "lebesgue", 1, "2,1,0.5", "2,2,1"},
      {"R3-02", "power_carleson:0.5", 1.5, "2,1,0.5", "2,2,1"},
      {"R3-03", "dirac:0.5", 2, "2,1,0.5", "2,2,1"},
      {"R3-04", "beta_weight:2", 1.5, "2,2,0.5", "2,3,0.75"},
      {"R3-05", "dyadic_atomic:0.5", 1.5, "2,1,0.5", "2,4,1"},
      {"R3-06", "power_carleson:2.5", 2, "4,2,0.5", "2,2,1"},
      {"R3-07", "log_perturbed:0.7,1.5", 1.5, "2,1,0.5", "2,2,1"},
      {"R3-08", "lebesgue", 2.5, "2,2,0.5", "2,4,1"},
      {"R3-09", "beta_weight:3", 2, "2,1,1", "2,2,1.5"},
      {"R3-10", "dyadic_atomic:1.5", 1, "2,1,0.25", "2,2,0.5"},
      {"R7-01", "beta_weight:1.5", 1, "2,inf,1", "2,2,1"},
      {"R7-02", "power_carleson:0.5", 1, "2,inf,1", "2,2,1"},
      {"R7-03", "dirac:0.5", 1, "2,inf,1", "2,2,1"},
      {"R7-04", "dyadic_atomic:2", 1, "2,inf,0.5", "2,1,0.5"},
      {"R7-05", "dyadic_atomic:0.5", 1, "inf,inf,1", "inf,2,1"},
      {"R7-06", "beta_weight:0.6", 1, "2,inf,1", "2,3,1"},
      {"R7-07", "power_carleson:2.5", 1, "inf,inf,0.5", "inf,1,0.5"},
      {"R7-08", "log_perturbed:1.5,1", 1, "2,inf,1", "2,2,1"},
      {"R7-09", "log_perturbed:0.5,-1", 1, "inf,inf,1", "inf,2,1"},
      {"R7-10", "beta_weight:1.25", 1, "2,inf,2", "2,4,2"},
  };
  std::vector<GridCase> grid;
  for (const auto& row : rows) {
    grid.push_back({row.id, row.measure, row.beta, SpacePair(parse_space(row.source), parse_space(row.target)), std::nullopt});
  }
  return grid;
}

}  // namespace cesaro

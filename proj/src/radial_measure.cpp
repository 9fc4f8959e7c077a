#include "cesaro/radial_measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cesaro/power_series.hpp"
#include "cesaro/special.hpp"

namespace cesaro {

namespace {

constexpr std::size_t kDefaultOrder = 24;
constexpr double kMomentTolerance = 1e-10;

}  // namespace

struct RadialMeasure::State {
  std::string label;
  bool atomic = false;
  std::vector<QuadratureNode> atoms;  // atomic measures
  double endpoint_exponent = 0.0;
  SmoothFactor smooth;
  MomentRule moment_rule;
  TailRule tail_rule;
  std::optional<double> total_mass;
  std::optional<CarlesonExponent> exponent;
  std::vector<QuadratureNode> default_nodes;
};

namespace {

std::vector<QuadratureNode> density_nodes(double e, const RadialMeasure::SmoothFactor& h,
                                          std::size_t order, double x_max) {
  const double power = e + 1.0;
  // Panels reach down to x_max 2^{-J}; the mass left below is at most
  // 2^{-73} of the panel scale and J >= 64 resolves features at any dyadic
  // scale the library probes (r = 1 - 2^{-k}, n = 2^k with k <= 40).
  const int panels = std::max(64, static_cast<int>(std::ceil(73.0 / power)));
  const auto& rule = gauss_legendre(order);
  std::vector<QuadratureNode> nodes;
  nodes.reserve(static_cast<std::size_t>(panels + 1) * order);
  auto add_panel = [&](double xa, double xb) {
    const double ua = std::pow(xa, power);
    const double ub = std::pow(xb, power);
    const double half = 0.5 * (ub - ua);
    const double mid = 0.5 * (ub + ua);
    for (std::size_t i = 0; i < order; ++i) {
      const double u = mid + half * rule.nodes[i];
      const double x = std::pow(u, 1.0 / power);
      if (!(x > 0.0)) continue;
      nodes.push_back({x, half * rule.weights[i] / power * h(x)});
    }
  };
  double xb = x_max;
  for (int j = 0; j < panels; ++j) {
    const double xa = 0.5 * xb;
    add_panel(xa, xb);
    xb = xa;
  }
  add_panel(0.0, xb);
  return nodes;
}

}  // namespace

RadialMeasure RadialMeasure::atomic(std::string label, std::vector<QuadratureNode> atoms) {
  if (atoms.empty()) throw std::domain_error("atomic measure needs at least one atom");
  for (const auto& a : atoms) {
    if (!(a.gap > 0.0 && a.gap <= 1.0)) {
      throw std::domain_error("atomic measure: points must lie in [0, 1)");
    }
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
      throw std::domain_error("atomic measure: weights must be positive and finite");
    }
  }
  auto state = std::make_shared<State>();
  state->label = std::move(label);
  state->atomic = true;
  state->atoms = std::move(atoms);
  state->default_nodes = state->atoms;
  return RadialMeasure(std::move(state));
}

RadialMeasure RadialMeasure::density(std::string label, double endpoint_exponent, SmoothFactor h) {
  if (!(endpoint_exponent > -1.0)) {
    throw std::domain_error("density measure: endpoint exponent must exceed -1");
  }
  auto state = std::make_shared<State>();
  state->label = std::move(label);
  state->endpoint_exponent = endpoint_exponent;
  state->smooth = std::move(h);
  state->default_nodes = density_nodes(endpoint_exponent, state->smooth, kDefaultOrder, 1.0);
  return RadialMeasure(std::move(state));
}

RadialMeasure RadialMeasure::with_moment_rule(MomentRule rule) const {
  auto s = std::make_shared<State>(*state_);
  s->moment_rule = std::move(rule);
  return RadialMeasure(std::move(s));
}

RadialMeasure RadialMeasure::with_tail_rule(TailRule rule) const {
  auto s = std::make_shared<State>(*state_);
  s->tail_rule = std::move(rule);
  return RadialMeasure(std::move(s));
}

RadialMeasure RadialMeasure::with_total_mass(double mass) const {
  auto s = std::make_shared<State>(*state_);
  s->total_mass = mass;
  return RadialMeasure(std::move(s));
}

RadialMeasure RadialMeasure::with_exponent(CarlesonExponent exponent) const {
  auto s = std::make_shared<State>(*state_);
  s->exponent = exponent;
  return RadialMeasure(std::move(s));
}

const std::string& RadialMeasure::label() const { return state_->label; }
bool RadialMeasure::is_atomic() const { return state_->atomic; }
double RadialMeasure::endpoint_exponent() const { return state_->endpoint_exponent; }
std::optional<CarlesonExponent> RadialMeasure::known_exponent() const { return state_->exponent; }
bool RadialMeasure::has_closed_form_moments() const { return static_cast<bool>(state_->moment_rule); }
bool RadialMeasure::has_closed_form_tail() const { return static_cast<bool>(state_->tail_rule); }

double RadialMeasure::total_mass() const {
  if (state_->total_mass) return *state_->total_mass;
  if (state_->moment_rule) return state_->moment_rule(0);
  return integrate([](double) { return 1.0; });
}

std::span<const QuadratureNode> RadialMeasure::nodes() const { return state_->default_nodes; }

std::vector<QuadratureNode> RadialMeasure::discretize(std::size_t order, double x_max) const {
  if (state_->atomic) {
    std::vector<QuadratureNode> kept;
    for (const auto& a : state_->atoms) {
      if (a.gap <= x_max) kept.push_back(a);
    }
    return kept;
  }
  return density_nodes(state_->endpoint_exponent, state_->smooth, order, x_max);
}

double RadialMeasure::moment(std::size_t n) const {
  if (state_->moment_rule) return state_->moment_rule(n);
  const double dn = static_cast<double>(n);
  return integrate([dn](double x) { return std::exp(dn * std::log1p(-x)); });
}

std::optional<double> RadialMeasure::closed_form_tail(double x) const {
  if (!state_->tail_rule) return std::nullopt;
  return state_->tail_rule(x);
}

// ---------------------------------------------------------------------------
// zoo

namespace {

std::string make_label(const std::string& name, const std::vector<double>& params) {
  std::string label = name;
  for (std::size_t i = 0; i < params.size(); ++i) {
    label += (i == 0 ? ':' : ',');
    std::ostringstream os;
    os << params[i];
    label += os.str();
  }
  return label;
}

void expect_params(const std::string& name, const std::vector<double>& params, std::size_t count) {
  if (params.size() != count) {
    throw std::domain_error("zoo: " + name + " expects " + std::to_string(count) + " parameter(s)");
  }
}

RadialMeasure power_weight(std::string label, double s) {
  // density s (1-t)^{s-1}: moments n! Gamma(s+1)/Gamma(n+s+1), tail (1-r)^s
  return RadialMeasure::density(std::move(label), s - 1.0, [s](double) { return s; })
      .with_moment_rule([s](std::size_t n) { return std::exp(-log_kernel_coeff(n, s)); })
      .with_tail_rule([s](double x) { return std::pow(x, s); })
      .with_total_mass(1.0)
      .with_exponent(CarlesonExponent::finite(s));
}

}  // namespace

RadialMeasure zoo(const std::string& name, const std::vector<double>& params) {
  const std::string label = make_label(name, params);
  if (name == "lebesgue") {
    expect_params(name, params, 0);
    return RadialMeasure::density(label, 0.0, [](double) { return 1.0; })
        .with_moment_rule([](std::size_t n) { return 1.0 / (static_cast<double>(n) + 1.0); })
        .with_tail_rule([](double x) { return x; })
        .with_total_mass(1.0)
        .with_exponent(CarlesonExponent::finite(1.0));
  }
  if (name == "beta_weight" || name == "power_carleson") {
    expect_params(name, params, 1);
    if (!(params[0] > 0.0)) throw std::domain_error("zoo: " + name + " needs a positive parameter");
    return power_weight(label, params[0]);
  }
  if (name == "dirac") {
    expect_params(name, params, 1);
    const double t0 = params[0];
    if (!(t0 >= 0.0 && t0 < 1.0)) throw std::domain_error("zoo: dirac point must lie in [0, 1)");
    return RadialMeasure::atomic(label, {{1.0 - t0, 1.0}})
        .with_moment_rule([t0](std::size_t n) { return std::pow(t0, static_cast<double>(n)); })
        .with_total_mass(1.0)
        .with_exponent(CarlesonExponent::unbounded());
  }
  if (name == "dyadic_atomic") {
    expect_params(name, params, 1);
    const double s = params[0];
    if (!(s > 0.0)) throw std::domain_error("zoo: dyadic_atomic needs s > 0");
    // atoms t_k = 1 - 2^{-k}, weight 2^{-ks}, k >= 1; the omitted remainder
    // weighs at most 2^{-100} relative to the first atom.
    const int count = std::min(1000, static_cast<int>(std::ceil(
                                         (100.0 + std::max(0.0, -std::log2(std::exp2(s) - 1.0))) / s)));
    std::vector<QuadratureNode> atoms;
    double mass = 0.0;
    for (int k = 1; k <= count; ++k) {
      atoms.push_back({std::exp2(-k), std::exp2(-k * s)});
      mass += atoms.back().weight;
    }
    return RadialMeasure::atomic(label, std::move(atoms))
        .with_total_mass(mass)
        .with_exponent(CarlesonExponent::finite(s));
  }
  if (name == "log_perturbed") {
    expect_params(name, params, 2);
    const double s = params[0];
    const double a = params[1];
    if (!(s > 0.0)) throw std::domain_error("zoo: log_perturbed needs s > 0");
    // density s (1-t)^{s-1} log(e/(1-t))^a
    return RadialMeasure::density(label, s - 1.0,
                                  [s, a](double x) { return s * std::pow(1.0 - std::log(x), a); })
        .with_exponent(CarlesonExponent::finite(s, a <= 0.0));
  }
  throw std::domain_error("zoo: unknown measure '" + name + "'");
}

RadialMeasure zoo_from_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::vector<double> params;
  if (colon != std::string::npos) {
    std::stringstream rest(spec.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      try {
        std::size_t used = 0;
        params.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw std::domain_error("zoo: bad parameter '" + item + "' in '" + spec + "'");
      }
    }
  }
  return zoo(name, params);
}

// ---------------------------------------------------------------------------
// moments and tails

MomentSequence moments(const RadialMeasure& mu, std::size_t N) {
  MomentSequence out;
  out.source = mu.label();
  out.values.resize(N + 1);
  if (mu.has_closed_form_moments()) {
    out.method = MomentMethod::closed_form;
    for (std::size_t n = 0; n <= N; ++n) out.values[n] = mu.moment(n);
  } else {
    out.method = MomentMethod::quadrature;
    kernels::parallel::moments(mu.nodes(), out.values);
    if (!mu.is_atomic()) {
      const auto fine_nodes = mu.discretize(2 * kDefaultOrder);
      std::vector<double> check(N + 1);
      kernels::parallel::moments(fine_nodes, check);
      for (std::size_t n = 0; n <= N; ++n) {
        const double scale = std::max(std::abs(check[n]), 1e-300);
        if (std::abs(check[n] - out.values[n]) > kMomentTolerance * scale) {
          std::ostringstream os;
          os << "moments(" << mu.label() << "): quadrature not certified at n = " << n
             << " (order 24: " << format_double(out.values[n])
             << ", order 48: " << format_double(check[n]) << ")";
          throw NumericError(os.str());
        }
      }
      out.values = std::move(check);
    }
  }
  for (std::size_t n = 0; n < N; ++n) {
    if (out.values[n + 1] > out.values[n] * (1.0 + 1e-12) || out.values[n + 1] < 0.0) {
      throw NumericError("moments(" + mu.label() + "): sequence not nonincreasing at n = " +
                         std::to_string(n));
    }
  }
  return out;
}

std::string moments_csv(const MomentSequence& m) {
  std::string out = "n,mu_n\n";
  for (std::size_t n = 0; n < m.values.size(); ++n) {
    out += std::to_string(n) + "," + format_double(m.values[n]) + "\n";
  }
  return out;
}

double tail(const RadialMeasure& mu, double r) {
  if (!(r >= 0.0 && r < 1.0)) throw std::domain_error("tail: r must lie in [0, 1)");
  const double x = 1.0 - r;
  if (auto closed = mu.closed_form_tail(x)) return *closed;
  if (mu.is_atomic()) {
    double acc = 0.0;
    for (const auto& a : mu.nodes()) {
      if (a.gap <= x) acc += a.weight;
    }
    return acc;
  }
  double acc = 0.0;
  for (const auto& node : mu.discretize(kDefaultOrder, x)) acc += node.weight;
  return acc;
}

// ---------------------------------------------------------------------------
// fits

ExponentFit fit_line(std::vector<double> xs, std::vector<double> ys, std::string grid) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("fit_line: need at least two matching points");
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  ExponentFit fit;
  fit.slope = sxx > 0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  fit.abscissae = std::move(xs);
  fit.ordinates = std::move(ys);
  fit.grid = std::move(grid);
  return fit;
}

nlohmann::json to_json(const ExponentFit& fit) {
  return {{"slope", fit.slope},
          {"intercept", fit.intercept},
          {"residual", fit.residual},
          {"grid", fit.grid},
          {"abscissae", fit.abscissae},
          {"ordinates", fit.ordinates}};
}

ExponentFit exponent_fit_from_json(const nlohmann::json& j) {
  ExponentFit fit;
  fit.slope = j.at("slope").get<double>();
  fit.intercept = j.at("intercept").get<double>();
  fit.residual = j.at("residual").get<double>();
  fit.grid = j.at("grid").get<std::string>();
  if (j.contains("abscissae")) fit.abscissae = j.at("abscissae").get<std::vector<double>>();
  if (j.contains("ordinates")) fit.ordinates = j.at("ordinates").get<std::vector<double>>();
  return fit;
}

std::string to_string(CarlesonMethod method) {
  switch (method) {
    case CarlesonMethod::tail: return "tail";
    case CarlesonMethod::moments: return "moments";
    case CarlesonMethod::poisson: return "poisson";
  }
  return "?";
}

double poisson_integral(const RadialMeasure& mu, double r, double sigma) {
  const double xr = 1.0 - r;
  // 1 - t r = x + xr - x xr with x = 1 - t
  return mu.integrate([xr, sigma](double x) { return std::pow(x + xr - x * xr, -sigma); });
}

CarlesonFit carleson_exponent(const RadialMeasure& mu, CarlesonMethod method,
                              const CarlesonGrid& grid, double sigma) {
  if (grid.k_max - grid.k_min + 1 < 6) {
    throw std::domain_error("carleson_exponent: grid needs at least 6 points");
  }
  if (method == CarlesonMethod::poisson && !(sigma > 0.0)) {
    throw std::domain_error("carleson_exponent: poisson method needs a probe exponent > 0");
  }
  const int first = std::max(grid.k_min, grid.k_max - grid.window + 1);
  CarlesonFit out;
  out.method = method;
  out.probe_exponent = sigma;
  std::vector<double> xs, ys;
  for (int k = first; k <= grid.k_max; ++k) {
    const double x = std::exp2(-k);
    double q = 0.0;
    switch (method) {
      case CarlesonMethod::tail:
        q = tail(mu, 1.0 - x);
        xs.push_back(std::log(x));
        break;
      case CarlesonMethod::moments:
        q = mu.moment(static_cast<std::size_t>(1) << k);
        xs.push_back(-k * std::log(2.0));
        break;
      case CarlesonMethod::poisson:
        q = poisson_integral(mu, 1.0 - x, sigma);
        xs.push_back(-std::log(x));
        break;
    }
    if (!(q > 0.0)) {
      out.infinite = true;
      break;
    }
    ys.push_back(std::log(q));
  }
  std::ostringstream g;
  g << (method == CarlesonMethod::moments ? "n_k = 2^k" : "r_k = 1 - 2^-k") << ", k = " << first
    << ".." << grid.k_max;
  if (out.infinite) {
    out.fit.grid = g.str();
    return out;
  }
  out.fit = fit_line(xs, ys, g.str());
  if (method == CarlesonMethod::poisson) {
    out.s = sigma - out.fit.slope;
    out.lower_bound = out.fit.slope < 1e-3;
  } else {
    out.s = out.fit.slope;
    // super-polynomial decay (compact support) shows up as steepening
    if (method == CarlesonMethod::moments && ys.size() >= 2) {
      const double last_local = (ys[ys.size() - 1] - ys[ys.size() - 2]) /
                                (xs[xs.size() - 1] - xs[xs.size() - 2]);
      if (last_local > 64.0) out.infinite = true;
    }
  }
  return out;
}

CarlesonCheck is_s_carleson(const RadialMeasure& mu, double s, const CarlesonGrid& grid) {
  CarlesonCheck out;
  std::vector<double> xs, ys;
  for (int k = grid.k_min; k <= grid.k_max; ++k) {
    const double x = std::exp2(-k);
    const double ratio = tail(mu, 1.0 - x) / std::pow(x, s);
    out.ratios.push_back(ratio);
  }
  out.constant = *std::max_element(out.ratios.begin(), out.ratios.end());
  const std::size_t count = out.ratios.size();
  const std::size_t window = std::min<std::size_t>(5, count);
  bool any_zero = false;
  for (std::size_t i = count - window; i < count; ++i) {
    if (!(out.ratios[i] > 0.0)) any_zero = true;
    xs.push_back(static_cast<double>(grid.k_min + static_cast<int>(i)) * std::log(2.0));
    ys.push_back(std::log(std::max(out.ratios[i], 1e-300)));
  }
  if (any_zero) {
    out.is_carleson = true;
    return out;
  }
  out.is_carleson = fit_line(xs, ys, "").slope <= 0.02;
  return out;
}

}  // namespace cesaro

// Command-line front end: moments, carleson-fit, apply, norm, classify,
// verify, probe, scan. Exit codes: 0 success, 1 case failures, 2 usage error.
#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cesaro/boundedness_lab.hpp"
#include "cesaro/cesaro_ops.hpp"
#include "cesaro/norm_engine.hpp"
#include "cesaro/power_series.hpp"
#include "cesaro/radial_measure.hpp"
#include "cesaro/reports.hpp"

using namespace cesaro;
using nlohmann::json;

namespace {

struct Globals {
  std::optional<std::size_t> truncation;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    write_text(g.out, text);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string format_or(const Globals& g, const std::string& fallback) {
  const std::string f = g.format.empty() ? fallback : g.format;
  if (f != "json" && f != "csv") throw UsageError("--format must be json or csv");
  return f;
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + item + "'");
    }
    if (used != item.size()) throw UsageError("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

MixedNormParams space_from_flags(const std::string& p, const std::string& q, double gamma) {
  return MixedNormParams(Exponent::parse(p), Exponent::parse(q), gamma);
}

// --- subcommands ----------------------------------------------------------

struct MomentsArgs {
  std::string measure;
};

int run_moments(const Globals& g, const MomentsArgs& a) {
  const auto mu = zoo_from_spec(a.measure);
  const auto m = moments(mu, g.truncation.value_or(1024));
  if (format_or(g, "csv") == "csv") {
    emit(g, moments_csv(m));
  } else {
    emit(g, dump({{"schema", kSchema},
                  {"kind", "moments"},
                  {"measure", m.source},
                  {"method", m.method == MomentMethod::closed_form ? "closed_form" : "quadrature"},
                  {"values", m.values}}));
  }
  return 0;
}

struct FitArgs {
  std::string measure;
  std::string method = "all";
  double sigma = 0.0;
};

int run_carleson_fit(const Globals& g, const FitArgs& a) {
  const auto mu = zoo_from_spec(a.measure);
  std::vector<CarlesonMethod> methods;
  if (a.method == "all") {
    methods = {CarlesonMethod::tail, CarlesonMethod::moments, CarlesonMethod::poisson};
  } else if (a.method == "tail") {
    methods = {CarlesonMethod::tail};
  } else if (a.method == "moments") {
    methods = {CarlesonMethod::moments};
  } else if (a.method == "poisson") {
    methods = {CarlesonMethod::poisson};
  } else {
    throw UsageError("--method must be tail, moments, poisson or all");
  }
  json fits = json::array();
  std::ostringstream csv;
  csv << "method,s,infinite,lower_bound,probe_exponent,residual\n";
  double sigma = a.sigma;
  if (sigma == 0.0) {
    // saturation sets in once sigma <= s, so probe one unit above the tail estimate
    const auto rough = carleson_exponent(mu, CarlesonMethod::tail);
    sigma = rough.infinite ? 8.0 : std::max(rough.s, 0.0) + 1.0;
  }
  for (auto method : methods) {
    const auto fit = carleson_exponent(mu, method, {}, method == CarlesonMethod::poisson ? sigma : 0.0);
    fits.push_back({{"method", to_string(method)},
                    {"s", fit.s},
                    {"infinite", fit.infinite},
                    {"lower_bound", fit.lower_bound},
                    {"probe_exponent", fit.probe_exponent},
                    {"fit", to_json(fit.fit)}});
    csv << to_string(method) << ',' << format_double(fit.s) << ',' << fit.infinite << ',' << fit.lower_bound << ','
        << format_double(fit.probe_exponent) << ',' << format_double(fit.fit.residual) << '\n';
  }
  if (format_or(g, "json") == "csv") {
    emit(g, csv.str());
    return 0;
  }
  json out = {{"schema", kSchema}, {"kind", "carleson-fit"}, {"measure", mu.label()}, {"fits", fits}};
  if (auto known = mu.known_exponent()) {
    out["known_exponent"] = known->infinite ? json("inf") : json(known->s);
  }
  emit(g, dump(out));
  return 0;
}

struct ApplyArgs {
  std::string measure;
  double beta = 1.0;
  std::string input;
  std::string output;
  std::string path = "cauchy";
};

int run_apply(const Globals& g, const ApplyArgs& a) {
  const auto mu = zoo_from_spec(a.measure);
  PowerSeries f = load_series(a.input);
  if (g.truncation) f = *g.truncation <= f.degree() ? f.truncated(*g.truncation) : f.zero_extended(*g.truncation);
  const auto m = moments(mu, f.degree());
  PowerSeries image;
  if (a.path == "cauchy") {
    image = apply_cesaro(m, a.beta, f);
  } else if (a.path == "direct") {
    image = apply_cesaro_direct(m, a.beta, f);
  } else {
    throw UsageError("--path must be cauchy or direct");
  }
  const std::string target = a.output.empty() ? g.out : a.output;
  if (!target.empty() && target != "-") {
    save_series(image, target);
  } else {
    std::cout << (format_or(g, "csv") == "csv" ? to_csv(image) : to_json(image).dump() + "\n");
  }
  return 0;
}

struct SeriesInput {
  std::string series;
  std::optional<double> kernel;
  std::optional<double> derivative;
  std::string measure;
};

// Builds the input series at the requested degree and a description.
std::pair<PowerSeries, json> build_input(const SeriesInput& in, std::size_t degree) {
  const int chosen = !in.series.empty() + in.kernel.has_value() + in.derivative.has_value();
  if (chosen != 1) throw UsageError("give exactly one of --series, --kernel, --measure-derivative");
  if (!in.series.empty()) return {load_series(in.series), {{"series", in.series}}};
  if (in.kernel) return {make_kernel_K(*in.kernel, degree), {{"kernel", *in.kernel}, {"degree", degree}}};
  if (in.measure.empty()) throw UsageError("--measure-derivative needs --measure");
  const auto mu = zoo_from_spec(in.measure);
  return {d_alpha_f_mu(mu, *in.derivative, degree),
          {{"measure_derivative", *in.derivative}, {"measure", mu.label()}, {"degree", degree}}};
}

struct NormArgs {
  SeriesInput input;
  std::string p = "2", q = "2";
  double gamma = 1.0;
  std::string semantics;
};

int run_norm(const Globals& g, const NormArgs& a) {
  const auto params = space_from_flags(a.p, a.q, a.gamma);
  auto [f, description] = build_input(a.input, g.truncation.value_or(4096));
  MixedNormOptions options;
  std::string semantics = a.semantics;
  if (semantics.empty()) semantics = a.input.series.empty() ? "truncation" : "polynomial";
  if (semantics == "polynomial") {
    options.semantics = SeriesSemantics::polynomial;
  } else if (semantics == "truncation") {
    options.semantics = SeriesSemantics::truncation;
  } else {
    throw UsageError("--semantics must be polynomial or truncation");
  }
  const auto result = mixed_norm(f, params, options);
  if (format_or(g, "json") == "csv") {
    std::ostringstream csv;
    csv << "block,contribution\n";
    for (std::size_t k = 0; k < result.diagnostics.size(); ++k) {
      csv << k << ',' << format_double(result.diagnostics[k]) << '\n';
    }
    emit(g, csv.str());
  } else {
    emit(g, dump({{"schema", kSchema},
                  {"kind", "norm"},
                  {"input", description},
                  {"space", to_json(params)},
                  {"semantics", semantics},
                  {"result", to_json(result)}}));
  }
  return result.converged ? 0 : 1;
}

struct ClassifyArgs {
  SeriesInput input;
  std::string p = "2", q = "2";
  double gamma = 1.0;
  std::size_t k_max = 12;
  std::string table;
};

int run_classify(const Globals& g, const ClassifyArgs& a) {
  const auto params = space_from_flags(a.p, a.q, a.gamma);
  if (!a.input.series.empty()) throw UsageError("classify needs a coefficient rule: --kernel or --measure-derivative");
  MembershipOptions options;
  options.k_max = a.k_max;
  CoefficientRule rule;
  json description;
  std::optional<MomentSequence> m;
  if (a.input.kernel && !a.input.derivative) {
    const double alpha = *a.input.kernel;
    rule = [alpha](std::size_t N) { return make_kernel_K(alpha, N); };
    description = {{"kernel", alpha}};
  } else if (a.input.derivative && !a.input.kernel) {
    if (a.input.measure.empty()) throw UsageError("--measure-derivative needs --measure");
    const auto mu = zoo_from_spec(a.input.measure);
    m = moments(mu, options.base << options.k_max);
    const double alpha = *a.input.derivative;
    rule = [&m, alpha](std::size_t N) {
      MomentSequence head = *m;
      head.values.resize(N + 1);
      return d_alpha_f_mu(head, alpha);
    };
    description = {{"measure_derivative", alpha}, {"measure", mu.label()}};
  } else {
    throw UsageError("give exactly one of --kernel, --measure-derivative");
  }
  const auto result = membership_classify(rule, params, options);
  if (!a.table.empty()) write_text(a.table, membership_csv(result));
  if (format_or(g, "json") == "csv") {
    emit(g, membership_csv(result));
  } else {
    emit(g, dump({{"schema", kSchema},
                  {"kind", "classify"},
                  {"input", description},
                  {"space", to_json(params)},
                  {"verdict", to_string(result.verdict)},
                  {"blocks", result.blocks},
                  {"phi", result.phi},
                  {"ratios", result.ratios}}));
  }
  return 0;
}

struct VerifyArgs {
  std::string identity = "all";
  std::string measures = "lebesgue;beta_weight:0.5;beta_weight:2;dirac:0.5;dyadic_atomic:1";
  std::string betas = "0.5,1,2.5";
  std::size_t count = 20;
  double tolerance = 1e-11;
};

int run_verify(const Globals& g, const VerifyArgs& a) {
  const std::size_t N = g.truncation.value_or(256);
  const auto corpus = random_corpus(a.count, N, static_cast<unsigned>(g.seed.value_or(1)));
  std::vector<IdentityReport> reports;
  if (a.identity == "all") {
    IdentitySuiteInput input;
    for (const auto& spec : split_list(a.measures, ';')) input.measures.push_back(zoo_from_spec(spec));
    input.betas = parse_doubles(a.betas);
    input.corpus = corpus;
    input.tolerance = a.tolerance;
    reports = run_identity_suite(input);
  } else {
    const Identity id = identity_from_string(a.identity);
    for (const auto& spec : split_list(a.measures, ';')) {
      const auto mu = zoo_from_spec(spec);
      for (double beta : parse_doubles(a.betas)) {
        for (const auto& [label, f] : corpus) {
          reports.push_back(verify_identity(id, {mu, beta, 1.0, beta}, f, a.tolerance, label));
        }
      }
    }
  }
  bool all_pass = true;
  for (const auto& r : reports) all_pass = all_pass && r.pass;
  if (format_or(g, "json") == "csv") {
    std::ostringstream csv;
    csv << "identity,measure,beta,input,deviation,tolerance,pass\n";
    for (const auto& r : reports) {
      csv << to_string(r.identity) << ',' << r.measure << ',' << format_double(r.beta) << ',' << r.input << ','
          << format_double(r.deviation) << ',' << format_double(r.tolerance) << ',' << (r.pass ? "true" : "false")
          << '\n';
    }
    emit(g, csv.str());
  } else {
    emit(g, dump(identity_suite_json(reports)));
  }
  return all_pass ? 0 : 1;
}

struct ProbeArgs {
  std::string measure;
  double beta = 1.0;
  std::string source, target;
  std::string family = "auto";
  std::size_t k_min = 4, k_max = 10;
  std::string table;
};

int run_probe(const Globals& g, const ProbeArgs& a) {
  const auto mu = zoo_from_spec(a.measure);
  std::optional<double> a1, a2;
  SpacePair pair(parse_space(a.source, &a1), parse_space(a.target, &a2));
  pair.source_bergman_alpha = a1;
  pair.target_bergman_alpha = a2;
  ProbeOptions options;
  options.family.k_min = a.k_min;
  options.family.k_max = a.k_max;
  if (g.truncation) options.family.base = *g.truncation;
  std::optional<FamilyKind> family;
  if (a.family != "auto") family = family_from_string(a.family);
  const auto verdict = evaluate_case(mu, a.beta, pair, family, options);
  if (!a.table.empty()) write_text(a.table, probe_csv(*verdict.empirical));
  if (format_or(g, "json") == "csv") {
    emit(g, probe_csv(*verdict.empirical));
  } else {
    json j = to_json(verdict);
    j["schema"] = kSchema;
    j["kind"] = "probe";
    emit(g, dump(j));
  }
  return 0;
}

struct ScanArgs {
  std::string config;
  bool dump_config = false;
};

int run_scan_command(const Globals& g, const ScanArgs& a) {
  if (!a.config.empty() && !std::filesystem::exists(a.config)) throw UsageError("no such config file: " + a.config);
  ScanConfig config = a.config.empty() ? default_scan_config() : load_scan_config(a.config);
  // flags override file values
  if (!g.out.empty()) config.out_dir = g.out;
  if (!g.format.empty()) {
    if (g.format != "json" && g.format != "csv" && g.format != "both") throw UsageError("--format must be json, csv or both");
    config.format = g.format;
  }
  if (g.seed) config.seed = *g.seed;
  if (g.truncation) config.truncation.base = *g.truncation;
  if (a.dump_config) {
    std::cout << dump(to_json(config));
    return 0;
  }
  std::filesystem::create_directories(config.out_dir);
  const auto report = run_scan(config);
  const json j = to_json(report);
  if (config.format == "json" || config.format == "both") {
    write_text((std::filesystem::path(config.out_dir) / "scan.json").string(), dump(j));
  }
  if (config.format == "csv" || config.format == "both") {
    write_text((std::filesystem::path(config.out_dir) / "scan.csv").string(), scan_csv(report));
  }
  const auto& s = report.summary;
  std::cout << "cases " << s.total << ", definite " << s.definite << ", agree " << s.agree << ", disagree "
            << s.disagree << ", n/a " << s.not_applicable << ", errors " << s.errors << "\n"
            << "canonical hash " << canonical_hash(j) << "\n";
  for (const auto& r : report.records) {
    if (!r.error.empty()) std::cerr << "case " << r.scan_case.id << " failed: " << r.error << "\n";
  }
  return s.errors == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Cesaro operators on mixed norm spaces: numerical laboratory"};
  app.require_subcommand(1);
  Globals g;
  auto add_globals = [&g](CLI::App* cmd) {
    cmd->add_option("--truncation", g.truncation, "Truncation degree N (or family base for probe/scan)");
    cmd->add_option("--seed", g.seed, "Seed for generated corpora");
    cmd->add_option("--out", g.out, "Output file (output directory for scan)");
    cmd->add_option("--format", g.format, "json or csv (scan also accepts both)");
  };
  add_globals(&app);

  MomentsArgs moments_args;
  auto* moments_cmd = app.add_subcommand("moments", "Moments mu_0..mu_N of a measure");
  moments_cmd->add_option("--measure", moments_args.measure, "Measure spec, e.g. beta_weight:2")->required();
  add_globals(moments_cmd);

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("carleson-fit", "Carleson exponent fits");
  fit_cmd->add_option("--measure", fit_args.measure, "Measure spec")->required();
  fit_cmd->add_option("--method", fit_args.method, "tail, moments, poisson or all");
  fit_cmd->add_option("--sigma", fit_args.sigma, "Poisson probe exponent (0: automatic)");
  add_globals(fit_cmd);

  ApplyArgs apply_args;
  auto* apply_cmd = app.add_subcommand("apply", "Apply C_{mu,beta} to a series file");
  apply_cmd->add_option("--measure", apply_args.measure, "Measure spec")->required();
  apply_cmd->add_option("--beta", apply_args.beta, "beta > 0")->required();
  apply_cmd->add_option("--input", apply_args.input, "Series file (.csv or .json)")->required();
  apply_cmd->add_option("--output", apply_args.output, "Output series file");
  apply_cmd->add_option("--path", apply_args.path, "cauchy or direct coefficient path");
  add_globals(apply_cmd);

  NormArgs norm_args;
  auto* norm_cmd = app.add_subcommand("norm", "Mixed norm ||f||_(p,q,gamma)");
  norm_cmd->add_option("--series", norm_args.input.series, "Series file");
  norm_cmd->add_option("--kernel", norm_args.input.kernel, "Use K_alpha");
  norm_cmd->add_option("--measure-derivative", norm_args.input.derivative, "Use D_alpha F_mu");
  norm_cmd->add_option("--measure", norm_args.input.measure, "Measure for --measure-derivative");
  norm_cmd->add_option("--p", norm_args.p, "p in (0, inf]");
  norm_cmd->add_option("--q", norm_args.q, "q in (0, inf]");
  norm_cmd->add_option("--gamma", norm_args.gamma, "gamma > 0");
  norm_cmd->add_option("--semantics", norm_args.semantics, "polynomial or truncation");
  add_globals(norm_cmd);

  ClassifyArgs classify_args;
  auto* classify_cmd = app.add_subcommand("classify", "Membership in H(p,q,gamma) from dyadic blocks");
  classify_cmd->add_option("--kernel", classify_args.input.kernel, "Classify K_alpha");
  classify_cmd->add_option("--measure-derivative", classify_args.input.derivative, "Classify D_alpha F_mu");
  classify_cmd->add_option("--measure", classify_args.input.measure, "Measure for --measure-derivative");
  classify_cmd->add_option("--series", classify_args.input.series, "(not supported: needs a coefficient rule)");
  classify_cmd->add_option("--p", classify_args.p, "p in (0, inf]");
  classify_cmd->add_option("--q", classify_args.q, "q in (0, inf]");
  classify_cmd->add_option("--gamma", classify_args.gamma, "gamma > 0");
  classify_cmd->add_option("--kmax", classify_args.k_max, "Deepest block");
  classify_cmd->add_option("--table", classify_args.table, "Also write the Phi(k) table as CSV");
  add_globals(classify_cmd);

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Run the operator identity suite");
  verify_cmd->add_option("--identity", verify_args.identity, "Identity name or all");
  verify_cmd->add_option("--measures", verify_args.measures, "Measure specs separated by ';'");
  verify_cmd->add_option("--betas", verify_args.betas, "Comma-separated beta values");
  verify_cmd->add_option("--count", verify_args.count, "Random corpus size");
  verify_cmd->add_option("--tolerance", verify_args.tolerance, "Max relative deviation");
  add_globals(verify_cmd);

  ProbeArgs probe_args;
  auto* probe_cmd = app.add_subcommand("probe", "Oracle verdict and empirical probe for one case");
  probe_cmd->add_option("--measure", probe_args.measure, "Measure spec")->required();
  probe_cmd->add_option("--beta", probe_args.beta, "beta > 0")->required();
  probe_cmd->add_option("--source", probe_args.source, "p,q,gamma or A:p,alpha")->required();
  probe_cmd->add_option("--target", probe_args.target, "p,q,gamma or A:p,alpha")->required();
  probe_cmd->add_option("--family", probe_args.family, "auto, kernels, boundary_kernels or monomials");
  probe_cmd->add_option("--kmin", probe_args.k_min, "First family index");
  probe_cmd->add_option("--kmax", probe_args.k_max, "Last family index");
  probe_cmd->add_option("--table", probe_args.table, "Also write the ratio table as CSV");
  add_globals(probe_cmd);

  ScanArgs scan_args;
  auto* scan_cmd = app.add_subcommand("scan", "Run a case grid (default: the released grid)");
  scan_cmd->add_option("--config", scan_args.config, "Scan config JSON");
  scan_cmd->add_flag("--dump-config", scan_args.dump_config, "Print the effective config and exit");
  add_globals(scan_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*moments_cmd) return run_moments(g, moments_args);
    if (*fit_cmd) return run_carleson_fit(g, fit_args);
    if (*apply_cmd) return run_apply(g, apply_args);
    if (*norm_cmd) return run_norm(g, norm_args);
    if (*classify_cmd) return run_classify(g, classify_args);
    if (*verify_cmd) return run_verify(g, verify_args);
    if (*probe_cmd) return run_probe(g, probe_args);
    if (*scan_cmd) return run_scan_command(g, scan_args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

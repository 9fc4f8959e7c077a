#include "cesaro/reports.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cesaro {

std::string case_identifier(const std::string& measure, double beta, const std::string& source,
                            const std::string& target) {
  return measure + "|beta=" + format_double(beta) + "|" + source + "->" + target;
}

ScanConfig scan_config_from_json(const nlohmann::json& j) {
  ScanConfig c;
  c.measures = j.value("measures", std::vector<std::string>{});
  c.betas = j.value("betas", std::vector<double>{});
  if (j.contains("pairs")) {
    for (const auto& p : j.at("pairs")) {
      if (p.is_array()) {
        c.pairs.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
      } else {
        c.pairs.emplace_back(p.at("source").get<std::string>(), p.at("target").get<std::string>());
      }
    }
  }
  if (j.contains("cases")) {
    for (const auto& e : j.at("cases")) {
      ScanCase sc;
      sc.measure = e.at("measure").get<std::string>();
      sc.beta = e.at("beta").get<double>();
      sc.source = e.at("source").get<std::string>();
      sc.target = e.at("target").get<std::string>();
      sc.id = e.value("id", case_identifier(sc.measure, sc.beta, sc.source, sc.target));
      if (e.contains("family")) sc.family = e.at("family").get<std::string>();
      c.cases.push_back(sc);
    }
  }
  if (j.contains("truncation")) {
    const auto& t = j.at("truncation");
    c.truncation.base = t.value("base", c.truncation.base);
    c.truncation.k_min = t.value("k_min", c.truncation.k_min);
    c.truncation.k_max = t.value("k_max", c.truncation.k_max);
  }
  c.fit_window = j.value("fit_window", c.fit_window);
  c.out_dir = j.value("out", c.out_dir);
  c.format = j.value("format", c.format);
  c.seed = j.value("seed", c.seed);
  if (c.cases.empty() && (c.measures.empty() || c.betas.empty() || c.pairs.empty())) {
    throw std::domain_error("scan config needs either 'cases' or non-empty 'measures', 'betas' and 'pairs'");
  }
  if (c.format != "json" && c.format != "csv" && c.format != "both") {
    throw std::domain_error("scan config: format must be json, csv or both");
  }
  // validate every referenced parameter up front
  for (const auto& sc : expand_cases(c)) {
    zoo_from_spec(sc.measure);
    if (!(sc.beta > 0.0)) throw std::domain_error("scan config: beta must be positive in " + sc.id);
    parse_space(sc.source);
    parse_space(sc.target);
    if (sc.family) family_from_string(*sc.family);
  }
  return c;
}

nlohmann::json to_json(const ScanConfig& c) {
  nlohmann::json j;
  j["measures"] = c.measures;
  j["betas"] = c.betas;
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& [s, t] : c.pairs) pairs.push_back({{"source", s}, {"target", t}});
  j["pairs"] = pairs;
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& sc : c.cases) {
    nlohmann::json e = {{"id", sc.id}, {"measure", sc.measure}, {"beta", sc.beta}, {"source", sc.source}, {"target", sc.target}};
    if (sc.family) e["family"] = *sc.family;
    cases.push_back(e);
  }
  j["cases"] = cases;
  j["truncation"] = {{"base", c.truncation.base}, {"k_min", c.truncation.k_min}, {"k_max", c.truncation.k_max}};
  j["fit_window"] = c.fit_window;
  j["out"] = c.out_dir;
  j["format"] = c.format;
  j["seed"] = c.seed;
  return j;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

ScanConfig load_scan_config(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::domain_error("'" + path + "' is not valid JSON: " + e.what());
  }
  return scan_config_from_json(j);
}

ScanConfig default_scan_config() {
  ScanConfig c;
  for (const auto& g : released_grid()) {
    c.cases.push_back({g.id, g.measure, g.beta, space_to_string(g.pair.source), space_to_string(g.pair.target),
                       g.family ? std::optional<std::string>(to_string(*g.family)) : std::nullopt});
  }
  return c;
}

std::vector<ScanCase> expand_cases(const ScanConfig& c) {
  std::vector<ScanCase> out = c.cases;
  if (out.empty()) {
    for (const auto& m : c.measures) {
      for (double b : c.betas) {
        for (const auto& [s, t] : c.pairs) out.push_back({case_identifier(m, b, s, t), m, b, s, t, std::nullopt});
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].id == out[i - 1].id) throw std::domain_error("scan config: duplicate case id '" + out[i].id + "'");
  }
  return out;
}

ScanReport run_scan(const ScanConfig& config) {
  ScanReport report;
  report.config = config;
  report.timestamp = utc_timestamp();
  const auto cases = expand_cases(config);
  report.records.resize(cases.size());
  ProbeOptions options;
  options.family = config.truncation;
  options.fit_window = config.fit_window;
  const auto count = static_cast<std::ptrdiff_t>(cases.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    ScanRecord rec;
    rec.scan_case = cases[i];
    try {
      const auto& sc = cases[i];
      std::optional<double> a1, a2;
      SpacePair pair(parse_space(sc.source, &a1), parse_space(sc.target, &a2));
      pair.source_bergman_alpha = a1;
      pair.target_bergman_alpha = a2;
      std::optional<FamilyKind> family;
      if (sc.family) family = family_from_string(*sc.family);
      rec.verdict = evaluate_case(zoo_from_spec(sc.measure), sc.beta, pair, family, options);
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
    report.records[i] = std::move(rec);
  }
  auto& s = report.summary;
  s.total = report.records.size();
  for (const auto& r : report.records) {
    if (!r.error.empty()) {
      ++s.errors;
    } else if (r.verdict->agreement) {
      ++s.definite;
      ++(*r.verdict->agreement ? s.agree : s.disagree);
    } else {
      ++s.not_applicable;
    }
  }
  return report;
}

nlohmann::json to_json(const ScanReport& report) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : report.records) {
    nlohmann::json rec;
    if (r.verdict) {
      rec = to_json(*r.verdict);
    } else {
      rec["measure"] = r.scan_case.measure;
      rec["beta"] = r.scan_case.beta;
    }
    rec["id"] = r.scan_case.id;
    rec["case"] = {{"measure", r.scan_case.measure},
                   {"beta", r.scan_case.beta},
                   {"source", r.scan_case.source},
                   {"target", r.scan_case.target}};
    if (r.scan_case.family) rec["case"]["family"] = *r.scan_case.family;
    rec["error"] = r.error.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.error);
    records.push_back(rec);
  }
  const auto& s = report.summary;
  return {{"schema", kSchema},
          {"kind", "scan"},
          {"timestamp", report.timestamp},
          {"config", to_json(report.config)},
          {"records", records},
          {"summary",
           {{"total", s.total},
            {"errors", s.errors},
            {"definite", s.definite},
            {"agree", s.agree},
            {"disagree", s.disagree},
            {"not_applicable", s.not_applicable},
            {"agreement_rate", s.definite ? static_cast<double>(s.agree) / static_cast<double>(s.definite) : 0.0}}}};
}

ScanReport scan_report_from_json(const nlohmann::json& j) {
  if (j.value("schema", std::string()) != kSchema) throw std::domain_error("not a cesaro-lab/1 document");
  ScanReport report;
  report.config = scan_config_from_json(j.at("config"));
  report.timestamp = j.at("timestamp").get<std::string>();
  for (const auto& rec : j.at("records")) {
    ScanRecord r;
    const auto& c = rec.at("case");
    r.scan_case.id = rec.at("id").get<std::string>();
    r.scan_case.measure = c.at("measure").get<std::string>();
    r.scan_case.beta = c.at("beta").get<double>();
    r.scan_case.source = c.at("source").get<std::string>();
    r.scan_case.target = c.at("target").get<std::string>();
    if (c.contains("family")) r.scan_case.family = c.at("family").get<std::string>();
    if (rec.at("error").is_null()) {
      r.verdict = verdict_from_json(rec);
    } else {
      r.error = rec.at("error").get<std::string>();
    }
    report.records.push_back(std::move(r));
  }
  const auto& s = j.at("summary");
  report.summary.total = s.at("total").get<std::size_t>();
  report.summary.errors = s.at("errors").get<std::size_t>();
  report.summary.definite = s.at("definite").get<std::size_t>();
  report.summary.agree = s.at("agree").get<std::size_t>();
  report.summary.disagree = s.at("disagree").get<std::size_t>();
  report.summary.not_applicable = s.at("not_applicable").get<std::size_t>();
  return report;
}

std::string scan_csv(const ScanReport& report) {
  std::ostringstream out;
  out << "id,measure,beta,source,target,predicted,predicted_by,s_required,s_measure,slope,diagnosis,agreement,error\n";
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  };
  for (const auto& r : report.records) {
    const auto& c = r.scan_case;
    out << quote(c.id) << ',' << quote(c.measure) << ',' << format_double(c.beta) << ',' << quote(c.source) << ','
        << quote(c.target) << ',';
    if (r.verdict) {
      const auto& v = *r.verdict;
      out << to_string(v.prediction.predicted) << ',' << v.prediction.rule << ','
          << (v.prediction.has_s_required ? format_double(v.prediction.s_required) : "") << ','
          << (v.s_measure.infinite ? "inf" : format_double(v.s_measure.s)) << ','
          << (v.empirical ? format_double(v.empirical->fit.slope) : "") << ','
          << (v.empirical ? to_string(v.empirical->diagnosis) : "") << ','
          << (v.agreement ? (*v.agreement ? "true" : "false") : "n/a") << ",\n";
    } else {
      out << ",,,,,,," << quote(r.error) << '\n';
    }
  }
  return out.str();
}

nlohmann::json identity_suite_json(const std::vector<IdentityReport>& reports) {
  auto sorted = reports;
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return std::pair(to_string(a.identity), a.measure) < std::pair(to_string(b.identity), b.measure);
  });
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : sorted) arr.push_back(to_json(r));
  return {{"schema", kSchema}, {"kind", "identity-suite"}, {"reports", arr}};
}

std::vector<IdentityReport> identity_suite_from_json(const nlohmann::json& j) {
  if (j.value("schema", std::string()) != kSchema) throw std::domain_error("not a cesaro-lab/1 document");
  std::vector<IdentityReport> out;
  for (const auto& r : j.at("reports")) out.push_back(identity_report_from_json(r));
  return out;
}

namespace {

void strip_timestamps(nlohmann::json& j) {
  if (j.is_object()) {
    j.erase("timestamp");
    for (auto& [key, value] : j.items()) strip_timestamps(value);
  } else if (j.is_array()) {
    for (auto& value : j) strip_timestamps(value);
  }
}

}  // namespace

std::string canonical_hash(const nlohmann::json& j) {
  nlohmann::json copy = j;
  strip_timestamps(copy);
  const std::string text = copy.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace cesaro

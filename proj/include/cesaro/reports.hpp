#ifndef CESARO_REPORTS_HPP
#define CESARO_REPORTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cesaro/boundedness_lab.hpp"
#include "cesaro/cesaro_ops.hpp"

namespace cesaro {

inline constexpr const char* kSchema = "cesaro-lab/1";

struct ScanCase {
  std::string id;
  std::string measure;
  double beta = 1.0;
  std::string source;  // space strings as accepted by parse_space
  std::string target;
  std::optional<std::string> family;
};

// Either an explicit case list or the product measures x betas x pairs.
struct ScanConfig {
  std::vector<std::string> measures;
  std::vector<double> betas;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<ScanCase> cases;
  FamilyOptions truncation;
  std::size_t fit_window = 5;
  std::string out_dir = ".";
  std::string format = "json";  // json | csv | both
  std::uint64_t seed = 0;
};

ScanConfig scan_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScanConfig& config);
ScanConfig load_scan_config(const std::string& path);
// The released agreement grid as a config.
ScanConfig default_scan_config();

// Resolved, sorted case list.
std::vector<ScanCase> expand_cases(const ScanConfig& config);
std::string case_identifier(const std::string& measure, double beta, const std::string& source,
                            const std::string& target);

struct ScanRecord {
  ScanCase scan_case;
  std::optional<BoundednessVerdict> verdict;
  std::string error;  // non-empty when the case failed
};

struct ScanSummary {
  std::size_t total = 0;
  std::size_t errors = 0;
  std::size_t definite = 0;  // predicted and diagnosed definitely
  std::size_t agree = 0;
  std::size_t disagree = 0;
  std::size_t not_applicable = 0;
};

struct ScanReport {
  ScanConfig config;
  std::string timestamp;  // excluded from the canonical hash
  std::vector<ScanRecord> records;
  ScanSummary summary;
};

// Runs every case (in parallel), recording per-case failures; records are
// sorted by case identifier.
ScanReport run_scan(const ScanConfig& config);

nlohmann::json to_json(const ScanReport& report);
ScanReport scan_report_from_json(const nlohmann::json& j);
std::string scan_csv(const ScanReport& report);

// Report wrappers for the other exports.
nlohmann::json identity_suite_json(const std::vector<IdentityReport>& reports);
std::vector<IdentityReport> identity_suite_from_json(const nlohmann::json& j);

// FNV-1a 64 over the compact dump with every "timestamp" key removed.
std::string canonical_hash(const nlohmann::json& j);
std::string utc_timestamp();

// Writes text, throwing std::runtime_error naming the path on failure.
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace cesaro

#endif  // CESARO_REPORTS_HPP

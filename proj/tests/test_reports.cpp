#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "cesaro/reports.hpp"

using namespace cesaro;
using nlohmann::json;

namespace {

ScanConfig small_config() {
  return scan_config_from_json(json::parse(R"({
    "measures": ["lebesgue"],
    "betas": [0.5],
    "pairs": [{"source": "2,2,1", "target": "2,2,1"}],
    "truncation": {"base": 128, "k_min": 4, "k_max": 8},
    "seed": 7
  })"));
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("cesaro-tests-" + name);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("reports") {
  TEST_CASE("scan config validation") {
    CHECK_THROWS_AS(scan_config_from_json(json::object()), std::domain_error);
    CHECK_THROWS_AS(scan_config_from_json(json::parse(R"({"measures":["nope"],"betas":[1],"pairs":[["2,2,1","2,2,1"]]})")),
                    std::domain_error);
    CHECK_THROWS_AS(scan_config_from_json(json::parse(R"({"measures":["lebesgue"],"betas":[0],"pairs":[["2,2,1","2,2,1"]]})")),
                    std::domain_error);
    CHECK_THROWS_AS(
        scan_config_from_json(json::parse(R"({"measures":["lebesgue"],"betas":[1],"pairs":[["2,2,1","2,2,1"]],"format":"xml"})")),
        std::domain_error);
    CHECK_THROWS_AS(scan_config_from_json(json::parse(
                        R"({"cases":[{"id":"a","measure":"lebesgue","beta":1,"source":"2,2,1","target":"2,2,1"},
                                     {"id":"a","measure":"lebesgue","beta":2,"source":"2,2,1","target":"2,2,1"}]})")),
                    std::domain_error);
    const auto c = small_config();
    CHECK(c.truncation.k_max == 8);
    CHECK(c.seed == 7);
    const auto again = scan_config_from_json(to_json(c));
    CHECK(to_json(again) == to_json(c));
    CHECK(expand_cases(c).size() == 1);
    CHECK(expand_cases(c)[0].id == case_identifier("lebesgue", 0.5, "2,2,1", "2,2,1"));
  }

  TEST_CASE("default config is the released grid") {
    const auto c = default_scan_config();
    const auto cases = expand_cases(c);
    CHECK(cases.size() == 40);
    CHECK(cases.front().id == "R1-01");
    CHECK(cases.back().id == "R7-10");
  }

  TEST_CASE("one-case scan, replay determinism and round trip") {
    const auto c = small_config();
    const auto a = run_scan(c);
    REQUIRE(a.records.size() == 1);
    CHECK(a.records[0].error.empty());
    CHECK(a.summary.total == 1);
    CHECK(a.summary.agree == 1);
    const auto b = run_scan(c);
    const json ja = to_json(a), jb = to_json(b);
    CHECK(ja.at("schema") == kSchema);
    CHECK(canonical_hash(ja) == canonical_hash(jb));
    json jc = jb;
    jc["timestamp"] = "1970-01-01T00:00:00Z";
    CHECK(canonical_hash(ja) == canonical_hash(jc));
    jc["records"][0]["beta"] = 0.75;
    CHECK(canonical_hash(ja) != canonical_hash(jc));
    const auto parsed = scan_report_from_json(json::parse(ja.dump(2)));
    CHECK(to_json(parsed) == ja);
    const auto csv = scan_csv(a);
    CHECK(csv.find("\n") != std::string::npos);
    CHECK(csv.rfind("id,", 0) == 0);
  }

  TEST_CASE("per-case failures are recorded") {
    auto c = small_config();
    c.truncation.k_max = 2;  // family shorter than the fit window
    const auto r = run_scan(c);
    REQUIRE(r.records.size() == 1);
    CHECK_FALSE(r.records[0].error.empty());
    CHECK(r.summary.errors == 1);
  }

  TEST_CASE("identity suite report") {
    IdentitySuiteInput in;
    in.measures = {zoo("lebesgue"), zoo("dirac", {0.5})};
    in.betas = {1.0};
    in.corpus = random_corpus(1, 32, 1);
    const auto reports = run_identity_suite(in);
    const auto j = identity_suite_json(reports);
    CHECK(j.at("schema") == kSchema);
    CHECK(j.at("reports").is_array());
    const auto& arr = j.at("reports");
    for (std::size_t i = 1; i < arr.size(); ++i) {
      const auto key = [](const json& e) {
        return std::pair{e.at("identity").get<std::string>(), e.at("measure").get<std::string>()};
      };
      CHECK(key(arr[i - 1]) <= key(arr[i]));
    }
    const auto back = identity_suite_from_json(json::parse(j.dump()));
    CHECK(identity_suite_json(back) == j);
  }

  TEST_CASE("io errors name the path") {
    try {
      write_text("/nonexistent-dir/x.json", "{}");
      FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find("/nonexistent-dir/x.json") != std::string::npos);
    }
    CHECK_THROWS_AS(read_text("/nonexistent-dir/y.json"), std::runtime_error);
    const auto dir = scratch_dir("io");
    write_text((dir / "a.txt").string(), "hello");
    CHECK(read_text((dir / "a.txt").string()) == "hello");
  }

  TEST_CASE("timestamps are UTC ISO strings") {
    const auto t = utc_timestamp();
    CHECK(t.size() == 20);
    CHECK(t.back() == 'Z');
  }
}

#ifdef CESARO_LAB_PATH
TEST_SUITE("cli") {
  namespace {
  int run(const std::string& args) {
    const int status = std::system((std::string(CESARO_LAB_PATH) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  }  // namespace

  TEST_CASE("exit codes") {
    const auto dir = scratch_dir("cli");
    CHECK(run("moments --measure lebesgue --truncation 4") == 0);
    CHECK(run("moments --measure nope") == 2);
    CHECK(run("moments") == 2);
    CHECK(run("bogus") == 2);
    CHECK(run("--help") == 0);
    CHECK(run("norm --kernel 0.5 --p 2 --q inf --gamma 1 --truncation 1024") == 0);
    CHECK(run("norm --kernel 0.5 --series x.csv") == 2);
    CHECK(run("verify --count 2 --truncation 32 --measures lebesgue --betas 1") == 0);
    CHECK(run("verify --count 2 --truncation 32 --measures lebesgue --betas 1 --tolerance 1e-300") == 1);
    CHECK(run("classify --kernel -0.5 --p 2 --q 2 --gamma 0.6 --kmax 8 --format csv") == 0);
    CHECK(run("carleson-fit --measure power_carleson:0.5") == 0);
    const std::string table = (dir / "probe.csv").string();
    CHECK(run("probe --measure dirac:0.5 --beta 1 --source 2,inf,1 --target 2,inf,1 --kmax 8 --table " + table) == 0);
    CHECK(read_text(table).rfind("index,source_norm,target_norm,ratio\n", 0) == 0);
    CHECK(run("probe --measure lebesgue --beta 1 --source 2,2,1 --target 2,2 --kmax 8") == 2);
    const std::string series = (dir / "f.csv").string();
    write_text(series, "n,coeff\n0,1\n1,0.5\n");
    CHECK(run("apply --measure lebesgue --beta 1 --input " + series + " --output " + (dir / "g.json").string()) == 0);
    const auto g = json::parse(read_text((dir / "g.json").string()));
    CHECK(g.size() == 2);
    CHECK(g[1].get<double>() == doctest::Approx(0.75));
    CHECK(run("moments --measure dirac:0.5 --truncation 3 --out " + (dir / "m.csv").string()) == 0);
    CHECK(read_text((dir / "m.csv").string()) == "n,mu_n\n0,1\n1,0.5\n2,0.25\n3,0.125\n");
  }

  TEST_CASE("scan through the CLI") {
    const auto dir = scratch_dir("scan");
    const std::string config = (dir / "config.json").string();
    write_text(config, to_json(small_config()).dump());
    const std::string out = (dir / "out").string();
    CHECK(run("scan --config " + config + " --out " + out + " --format both") == 0);
    const auto report = json::parse(read_text(out + "/scan.json"));
    CHECK(report.at("records").size() == 1);
    CHECK(report.at("config").at("format") == "both");
    CHECK(std::filesystem::exists(out + "/scan.csv"));
    CHECK(run("scan --config /nonexistent/config.json") == 2);
  }
}
#endif

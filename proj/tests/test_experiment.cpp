#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "maxdissent/experiment.hpp"
#include "maxdissent/metrics.hpp"

using namespace maxdissent;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("maxdissent_test_" + tag);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::map<std::string, std::string> dir_contents(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir))
    files[entry.path().filename().string()] = slurp(entry.path());
  return files;
}

const char* kMinimalConfig = R"({
  "graph": {"kind": "line", "n": 5},
  "scheme": ["global_max_gossip"],
  "problem": {"kind": "constant"},
  "steps": 100
})";

}  // namespace

TEST_CASE("minimal config fills the documented defaults") {
  const auto cfg = load_config(kMinimalConfig);
  CHECK(cfg.graph.kind == GraphKind::line);
  CHECK(cfg.graph.n == 5);
  CHECK(cfg.schemes == std::vector<Scheme>{Scheme::global_max_gossip});
  CHECK(cfg.problem.kind == ProblemKind::constant);
  CHECK(cfg.schedule.kind == ScheduleKind::inv_t);
  CHECK(cfg.schedule.scale == 1.0);
  CHECK(cfg.steps == 100);
  CHECK(cfg.runs == 1);
  CHECK(cfg.snapshot_every == 1);
  CHECK(cfg.base_seed == 0);
  CHECK(!cfg.emit_trace);
  CHECK(cfg.bit_constants.estimate_bits == 32);
  CHECK(cfg.bit_constants.ack_bits == 1);
}

TEST_CASE("config validation names the offending field") {
  auto expect_error = [](const std::string& json, const std::string& needle) {
    try {
      load_config(json);
      FAIL("expected rejection: " << json);
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  expect_error(R"({"graph":{"kind":"line","n":5},"scheme":["global_max_gossip"],)"
               R"("problem":{"kind":"constant"},"steps":100,"runs":0})",
               "runs");
  expect_error(R"({"graph":{"kind":"line","n":5},"scheme":["global_max_gossip"],)"
               R"("problem":{"kind":"constant"},"steps":100,"bogus":1})",
               "bogus");
  expect_error(R"({"graph":{"kind":"line","n":5,"p":0.4},"scheme":["global_max_gossip"],)"
               R"("problem":{"kind":"constant"},"steps":100})",
               "graph.p");
  expect_error(R"({"graph":{"kind":"erdos_renyi","n":5},"scheme":["global_max_gossip"],)"
               R"("problem":{"kind":"constant"},"steps":100})",
               "graph.p");
  expect_error(R"({"graph":{"kind":"line","n":5},"scheme":[],)"
               R"("problem":{"kind":"constant"},"steps":100})",
               "scheme");
  expect_error(R"({"graph":{"kind":"line","n":5},"scheme":["global_max_gossip"],)"
               R"("problem":{"kind":"logistic"},"steps":100})",
               "samples_per_agent");
  expect_error(R"({"graph":{"kind":"line","n":5},"scheme":["global_max_gossip"],)"
               R"("problem":{"kind":"constant","theta0":1.0},"steps":100})",
               "theta0");
  expect_error(R"({"graph":{"kind":"barbell","n":10},"scheme":["global_max_gossip"],)"
               R"("problem":{"kind":"constant"},"steps":100})",
               "barbell");
  expect_error("not json", "parse error");
}

TEST_CASE("the sensor-network scale config is accepted") {
  const auto cfg = load_config(R"({
    "graph": {"kind": "erdos_renyi", "n": 180, "p": 0.4},
    "scheme": ["randomized_gossip", "local_max_gossip", "global_max_gossip", "load_balancing"],
    "problem": {"kind": "ml_estimation"},
    "steps": 200000,
    "runs": 10,
    "base_seed": 7
  })");
  CHECK(cfg.graph.n == 180);
  CHECK(*cfg.graph.p == 0.4);
  CHECK(cfg.runs == 10);
  CHECK(cfg.schemes.size() == 4);
}

TEST_CASE("config echo is itself a loadable config") {
  const auto cfg = load_config(kMinimalConfig);
  const auto echoed = load_config(config_to_json(cfg));
  CHECK(config_to_json(echoed) == config_to_json(cfg));
}

TEST_CASE("initial states are reproducible") {
  const auto a = initial_state(6, 2, 5);
  const auto b = initial_state(6, 2, 5);
  CHECK(a == b);
  CHECK(a.all_finite());
}

TEST_CASE("run_experiment writes per-run files, aggregates and a header") {
  const fs::path dir = fresh_dir("files");
  auto cfg = load_config(R"({
    "graph": {"kind": "line", "n": 6},
    "scheme": ["randomized_gossip", "load_balancing"],
    "problem": {"kind": "ml_estimation", "theta0": 2.0},
    "steps": 40,
    "runs": 3,
    "base_seed": 11
  })");
  cfg.output_path = dir.string();
  const auto result = run_experiment(cfg);
  CHECK(result.exit_status == 0);
  CHECK(result.errors.empty());
  // 2 schemes x 3 runs + 2 aggregates + header.json
  CHECK(result.files_written.size() == 2 * 3 + 2 + 1);

  const auto files = dir_contents(dir);
  REQUIRE(files.contains("randomized_gossip_run0.csv"));
  REQUIRE(files.contains("load_balancing_run2.csv"));
  REQUIRE(files.contains("randomized_gossip_mean.csv"));
  REQUIRE(files.contains("header.json"));

  // per-run CSV parses and has one row per step (snapshot_every = 1)
  std::istringstream in(files.at("randomized_gossip_run0.csv"));
  const auto records = read_records_csv(in);
  REQUIRE(records.size() == 40);
  CHECK(records.front().t == 1);
  CHECK(records.back().t == 40);
  CHECK(records.front().error.has_value());  // w* known for ml_estimation
  for (std::size_t k = 1; k < records.size(); ++k)
    CHECK(records[k].cumulative_bits >= records[k - 1].cumulative_bits);

  // the aggregate equals the offline recompute from the raw per-run files
  std::vector<std::vector<ExperimentRecord>> series;
  for (int r = 0; r < 3; ++r) {
    std::istringstream run_in(files.at("randomized_gossip_run" + std::to_string(r) + ".csv"));
    series.push_back(read_records_csv(run_in));
  }
  const auto mean = aggregate_runs(series);
  std::istringstream mean_in(files.at("randomized_gossip_mean.csv"));
  std::string line;
  std::getline(mean_in, line);
  CHECK(line == "scheme,runs,t,error,network_variance,cumulative_bits");
  for (const auto& row : mean) {
    REQUIRE(std::getline(mean_in, line));
    std::ostringstream want;
    want << "randomized_gossip,3," << row.t << ',' << format_double(*row.error) << ','
         << format_double(row.network_variance) << ',' << format_double(row.cumulative_bits);
    CHECK(line == want.str());
  }

  // header.json carries the contraction constants and w*
  const auto header = nlohmann::json::parse(files.at("header.json"));
  CHECK(header.at("graph").at("diameter") == 5);
  CHECK(header.at("contraction").at("load_balancing").at("delta").get<double>() ==
        doctest::Approx(1.0 / 50.0));
  CHECK(header.at("w_star").is_array());
  CHECK(header.at("subgradient_bound") == "unbounded");
  CHECK(header.at("run_seeds").size() == 3);

  fs::remove_all(dir);
}

TEST_CASE("identical config and seed give byte-identical outputs") {
  auto cfg = load_config(R"({
    "graph": {"kind": "ladder", "n": 8},
    "scheme": ["local_max_gossip", "randomized_gossip"],
    "problem": {"kind": "ml_estimation"},
    "steps": 60,
    "runs": 2,
    "base_seed": 3,
    "emit_trace": true
  })");
  const fs::path dir_a = fresh_dir("det_a");
  const fs::path dir_b = fresh_dir("det_b");
  cfg.output_path = dir_a.string();
  REQUIRE(run_experiment(cfg).exit_status == 0);
  RunOverrides opt;
  opt.out = dir_b.string();
  opt.jobs = 4;  // parallelism must not change the bytes
  REQUIRE(run_experiment(cfg, opt).exit_status == 0);
  CHECK(dir_contents(dir_a) == dir_contents(dir_b));
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("trace JSONL lines parse and cover every step") {
  const fs::path dir = fresh_dir("trace");
  auto cfg = load_config(R"({
    "graph": {"kind": "line", "n": 4},
    "scheme": ["load_balancing"],
    "problem": {"kind": "constant"},
    "steps": 5,
    "base_seed": 1
  })");
  cfg.output_path = dir.string();
  RunOverrides opt;
  opt.trace = true;
  REQUIRE(run_experiment(cfg, opt).exit_status == 0);
  std::istringstream in(slurp(dir / "load_balancing_run0_trace.jsonl"));
  std::string line;
  long t = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.at("t") == ++t);
    CHECK(j.at("scheme") == "load_balancing");
    CHECK(j.at("bits").is_number());
  }
  CHECK(t == 5);
  fs::remove_all(dir);
}

TEST_CASE("dry run validates without writing") {
  const fs::path dir = fresh_dir("dry");
  auto cfg = load_config(kMinimalConfig);
  cfg.output_path = dir.string();
  RunOverrides opt;
  opt.dry_run = true;
  const auto result = run_experiment(cfg, opt);
  CHECK(result.exit_status == 0);
  CHECK(result.files_written.empty());
  CHECK(!fs::exists(dir));
}

TEST_CASE("divergence aborts propagate the failing run") {
  const fs::path dir = fresh_dir("diverge");
  auto cfg = load_config(R"({
    "graph": {"kind": "line", "n": 4},
    "scheme": ["global_max_gossip"],
    "problem": {"kind": "ml_estimation"},
    "schedule": {"kind": "constant", "scale": 1e9},
    "steps": 100,
    "base_seed": 2
  })");
  cfg.output_path = dir.string();
  const auto result = run_experiment(cfg);
  CHECK(result.exit_status == 1);
  REQUIRE(result.errors.size() == 1);
  CHECK(result.errors[0].find("run 0") != std::string::npos);
  CHECK(result.errors[0].find("diverged") != std::string::npos);
  fs::remove_all(dir);
}

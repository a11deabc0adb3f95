#include "maxdissent/experiment.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "maxdissent/metrics.hpp"
#include "maxdissent/rng.hpp"
#include "maxdissent/theory.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace maxdissent {

std::uint64_t run_stream_seed(std::uint64_t base_seed, int run) {
  return substream_seed(base_seed, static_cast<std::uint64_t>(run) + 1);
}
std::uint64_t graph_stream_seed(std::uint64_t base_seed) {
  return substream_seed(base_seed, kFixedStreamBase);
}
std::uint64_t problem_stream_seed(std::uint64_t base_seed) {
  return substream_seed(base_seed, kFixedStreamBase + 1);
}
std::uint64_t initial_state_stream_seed(std::uint64_t base_seed) {
  return substream_seed(base_seed, kFixedStreamBase + 2);
}

StateMatrix initial_state(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  StateMatrix x(n, d);
  for (int i = 1; i <= n; ++i)
    for (int k = 0; k < d; ++k) x.at(i, k) = rng.normal();
  return x;
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& reason) {
  throw std::invalid_argument("config: " + field + ": " + reason);
}

void reject_unknown_keys(const json& obj, const std::string& where,
                         const std::set<std::string>& allowed) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.contains(key)) fail(where.empty() ? key : where + "." + key, "unknown key");
}

const json& require(const json& obj, const std::string& where, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where.empty() ? key : where + "." + key, "required field missing");
  return *it;
}

long get_integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) fail(field, "must be an integer");
  return v.get<long>();
}

}  // namespace

ExperimentConfig load_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
  }
  if (!j.is_object()) fail("", "top level must be a JSON object");
  reject_unknown_keys(j, "", {"graph", "scheme", "problem", "schedule", "steps", "runs",
                              "base_seed", "snapshot_every", "output_path", "emit_trace",
                              "bit_constants"});

  ExperimentConfig cfg;

  const json& jg = require(j, "", "graph");
  reject_unknown_keys(jg, "graph", {"kind", "n", "p"});
  cfg.graph.kind = graph_kind_from_string(require(jg, "graph", "kind").get<std::string>());
  cfg.graph.n = static_cast<int>(get_integer(require(jg, "graph", "n"), "graph.n"));
  if (cfg.graph.n < 2) fail("graph.n", "must be >= 2");
  if (jg.contains("p")) cfg.graph.p = jg["p"].get<double>();
  if (cfg.graph.p.has_value() != (cfg.graph.kind == GraphKind::erdos_renyi))
    fail("graph.p", "required exactly for erdos_renyi graphs");
  if (cfg.graph.p && !(*cfg.graph.p > 0.0 && *cfg.graph.p <= 1.0))
    fail("graph.p", "must be in (0, 1]");
  if (cfg.graph.kind == GraphKind::barbell && cfg.graph.n % 3 != 0)
    fail("graph.n", "barbell needs n divisible by 3");
  if (cfg.graph.kind == GraphKind::ladder && cfg.graph.n % 2 != 0)
    fail("graph.n", "ladder needs even n");

  const json& js = require(j, "", "scheme");
  if (!js.is_array() || js.empty()) fail("scheme", "must be a non-empty list");
  for (const auto& s : js) cfg.schemes.push_back(scheme_from_string(s.get<std::string>()));

  const json& jp = require(j, "", "problem");
  cfg.problem.kind = problem_kind_from_string(require(jp, "problem", "kind").get<std::string>());
  switch (cfg.problem.kind) {
    case ProblemKind::constant:
      reject_unknown_keys(jp, "problem", {"kind", "d"});
      if (jp.contains("d")) {
        cfg.problem.dim = static_cast<int>(get_integer(jp["d"], "problem.d"));
        if (cfg.problem.dim < 1) fail("problem.d", "must be >= 1");
      }
      break;
    case ProblemKind::ml_estimation:
      reject_unknown_keys(jp, "problem", {"kind", "theta0"});
      if (jp.contains("theta0")) cfg.problem.theta0 = jp["theta0"].get<double>();
      break;
    case ProblemKind::logistic:
      reject_unknown_keys(jp, "problem",
                          {"kind", "samples_per_agent", "feature_dim", "regularization"});
      cfg.problem.samples_per_agent = static_cast<int>(get_integer(
          require(jp, "problem", "samples_per_agent"), "problem.samples_per_agent"));
      cfg.problem.feature_dim = static_cast<int>(
          get_integer(require(jp, "problem", "feature_dim"), "problem.feature_dim"));
      if (cfg.problem.samples_per_agent < 1) fail("problem.samples_per_agent", "must be >= 1");
      if (cfg.problem.feature_dim < 1) fail("problem.feature_dim", "must be >= 1");
      if (jp.contains("regularization")) {
        cfg.problem.regularization = jp["regularization"].get<double>();
        if (*cfg.problem.regularization < 0.0) fail("problem.regularization", "must be >= 0");
      }
      break;
  }

  if (j.contains("schedule")) {
    const json& jsched = j["schedule"];
    reject_unknown_keys(jsched, "schedule", {"kind", "scale"});
    cfg.schedule.kind =
        schedule_kind_from_string(require(jsched, "schedule", "kind").get<std::string>());
    if (jsched.contains("scale")) {
      cfg.schedule.scale = jsched["scale"].get<double>();
      if (!(cfg.schedule.scale > 0.0)) fail("schedule.scale", "must be positive");
    }
  }

  cfg.steps = get_integer(require(j, "", "steps"), "steps");
  if (cfg.steps < 1) fail("steps", "must be >= 1");
  if (j.contains("runs")) {
    cfg.runs = static_cast<int>(get_integer(j["runs"], "runs"));
    if (cfg.runs < 1) fail("runs", "must be >= 1");
  }
  if (j.contains("base_seed")) cfg.base_seed = j["base_seed"].get<std::uint64_t>();
  if (j.contains("snapshot_every")) {
    cfg.snapshot_every = get_integer(j["snapshot_every"], "snapshot_every");
    if (cfg.snapshot_every < 1) fail("snapshot_every", "must be >= 1");
  }
  if (j.contains("output_path")) cfg.output_path = j["output_path"].get<std::string>();
  if (j.contains("emit_trace")) cfg.emit_trace = j["emit_trace"].get<bool>();
  if (j.contains("bit_constants")) {
    const json& jb = j["bit_constants"];
    reject_unknown_keys(jb, "bit_constants", {"estimate_bits", "ack_bits"});
    if (jb.contains("estimate_bits"))
      cfg.bit_constants.estimate_bits =
          static_cast<int>(get_integer(jb["estimate_bits"], "bit_constants.estimate_bits"));
    if (jb.contains("ack_bits"))
      cfg.bit_constants.ack_bits =
          static_cast<int>(get_integer(jb["ack_bits"], "bit_constants.ack_bits"));
    if (cfg.bit_constants.estimate_bits < 1 || cfg.bit_constants.ack_bits < 1)
      fail("bit_constants", "bit widths must be >= 1");
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_config(buf.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["graph"]["kind"] = to_string(cfg.graph.kind);
  j["graph"]["n"] = cfg.graph.n;
  if (cfg.graph.p) j["graph"]["p"] = *cfg.graph.p;
  auto schemes = ordered_json::array();
  for (Scheme s : cfg.schemes) schemes.push_back(to_string(s));
  j["scheme"] = std::move(schemes);
  j["problem"]["kind"] = to_string(cfg.problem.kind);
  switch (cfg.problem.kind) {
    case ProblemKind::constant:
      j["problem"]["d"] = cfg.problem.dim;
      break;
    case ProblemKind::ml_estimation:
      j["problem"]["theta0"] = cfg.problem.theta0;
      break;
    case ProblemKind::logistic:
      j["problem"]["samples_per_agent"] = cfg.problem.samples_per_agent;
      j["problem"]["feature_dim"] = cfg.problem.feature_dim;
      if (cfg.problem.regularization)
        j["problem"]["regularization"] = *cfg.problem.regularization;
      break;
  }
  j["schedule"]["kind"] = to_string(cfg.schedule.kind);
  j["schedule"]["scale"] = cfg.schedule.scale;
  j["steps"] = cfg.steps;
  j["runs"] = cfg.runs;
  j["base_seed"] = cfg.base_seed;
  j["snapshot_every"] = cfg.snapshot_every;
  j["output_path"] = cfg.output_path;
  j["emit_trace"] = cfg.emit_trace;
  j["bit_constants"]["estimate_bits"] = cfg.bit_constants.estimate_bits;
  j["bit_constants"]["ack_bits"] = cfg.bit_constants.ack_bits;
  return j.dump(2);
}

namespace {

ProblemSpec build_problem(const ExperimentConfig& cfg) {
  switch (cfg.problem.kind) {
    case ProblemKind::constant:
      return make_constant_problem(cfg.graph.n, cfg.problem.dim);
    case ProblemKind::ml_estimation:
      return generate_ml_instance(cfg.graph.n, cfg.problem.theta0,
                                  problem_stream_seed(cfg.base_seed));
    case ProblemKind::logistic: {
      auto p = generate_logistic_instance(cfg.graph.n, cfg.problem.samples_per_agent,
                                          cfg.problem.feature_dim,
                                          problem_stream_seed(cfg.base_seed));
      if (cfg.problem.regularization)
        p = make_logistic_problem(std::move(p.shards), *cfg.problem.regularization);
      return p;
    }
  }
  throw std::invalid_argument("unknown problem kind");
}

SchemeSpec spec_for(Scheme scheme, const Graph& g) {
  return scheme == Scheme::randomized_gossip ? SchemeSpec::uniform_gossip(g)
                                             : SchemeSpec::make(scheme);
}

std::string run_file_name(Scheme scheme, int run) {
  return std::string(to_string(scheme)) + "_run" + std::to_string(run) + ".csv";
}

struct Task {
  Scheme scheme;
  int run;
};

void write_header_json(const fs::path& path, const ExperimentConfig& cfg, const Graph& g,
                       const ProblemSpec& problem,
                       const std::optional<std::vector<double>>& w_star) {
  ordered_json j;
  j["config"] = json::parse(config_to_json(cfg));
  j["graph"]["kind"] = to_string(cfg.graph.kind);
  j["graph"]["n"] = g.n();
  j["graph"]["edges"] = g.edges().size();
  j["graph"]["diameter"] = g.diameter();
  for (Scheme s : cfg.schemes) {
    try {
      j["contraction"][to_string(s)] =
          json::parse(contraction_report_to_json(contraction_report(spec_for(s, g), g)));
    } catch (const std::invalid_argument&) {
      // degenerate case (lambda outside (0,1), e.g. max-gossip on K2)
      j["contraction"][to_string(s)] = nullptr;
    }
  }
  j["problem"] = json::parse(problem_to_json(problem));
  if (w_star)
    j["w_star"] = *w_star;
  else
    j["w_star"] = nullptr;
  const auto bound = subgradient_bound(problem);
  if (bound)
    j["subgradient_bound"] = *bound;
  else
    j["subgradient_bound"] = "unbounded";
  j["schedule"]["kind"] = to_string(cfg.schedule.kind);
  j["schedule"]["scale"] = cfg.schedule.scale;
  j["schedule"]["satisfies_diminishing_conditions"] = cfg.schedule.satisfies_diminishing();
  auto seeds = ordered_json::array();
  for (int r = 0; r < cfg.runs; ++r) seeds.push_back(run_stream_seed(cfg.base_seed, r));
  j["run_seeds"] = std::move(seeds);

  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed to write " + path.string());
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOverrides& opt) {
  ExperimentResult result;
  const std::string out_dir = opt.out.value_or(cfg.output_path);
  const bool trace = opt.trace.value_or(cfg.emit_trace);
  if (out_dir.empty()) throw std::invalid_argument("run_experiment: empty output path");

  if (opt.dry_run) return result;  // config already validated by load_config

  const Graph g = make_graph(cfg.graph.kind, cfg.graph.n, cfg.graph.p,
                             graph_stream_seed(cfg.base_seed));
  const ProblemSpec problem = build_problem(cfg);
  const auto w_star = optimum(problem);
  const StateMatrix x0 =
      initial_state(g.n(), problem.d, initial_state_stream_seed(cfg.base_seed));

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);

  std::vector<Task> tasks;
  for (Scheme s : cfg.schemes)
    for (int r = 0; r < cfg.runs; ++r) tasks.push_back({s, r});

  std::vector<std::string> task_errors(tasks.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) return;
      const Task& task = tasks[idx];
      const std::uint64_t seed = run_stream_seed(cfg.base_seed, task.run);
      const RunIdentity id{task.scheme, task.run, seed};
      try {
        std::ofstream csv(dir / run_file_name(task.scheme, task.run), std::ios::binary);
        csv << kRecordsCsvHeader << '\n';
        std::ofstream trace_out;
        if (trace) {
          trace_out.open(dir / (std::string(to_string(task.scheme)) + "_run" +
                                std::to_string(task.run) + "_trace.jsonl"),
                         std::ios::binary);
        }
        ExperimentRecord prev;
        bool have_prev = false;
        MetricsSink sink = [&](long t, const StateMatrix& w, const MixEvent& ev) {
          const ExperimentRecord rec =
              record(id, t, w, ev, w_star, have_prev ? &prev : nullptr);
          if (t % cfg.snapshot_every == 0 || t == cfg.steps)
            csv << record_to_csv_row(rec) << '\n';
          if (trace) trace_out << event_to_json_line(t, task.scheme, ev) << '\n';
          prev = rec;
          have_prev = true;
        };
        run(g, problem, spec_for(task.scheme, g), cfg.schedule, x0, cfg.steps, seed, sink,
            cfg.steps, cfg.bit_constants);
        if (!csv) throw std::runtime_error("write failed");
      } catch (const std::exception& e) {
        task_errors[idx] = std::string(to_string(task.scheme)) + " run " +
                           std::to_string(task.run) + ": " + e.what();
      }
    }
  };

  const int jobs = std::max(1, opt.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < jobs; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const auto& err : task_errors)
    if (!err.empty()) result.errors.push_back(err);

  for (const auto& task : tasks)
    result.files_written.push_back((dir / run_file_name(task.scheme, task.run)).string());

  // Per-scheme aggregates, recomputed from the per-run files.
  if (result.errors.empty()) {
    for (Scheme s : cfg.schemes) {
      std::vector<std::vector<ExperimentRecord>> series;
      for (int r = 0; r < cfg.runs; ++r) {
        std::ifstream in(dir / run_file_name(s, r), std::ios::binary);
        series.push_back(read_records_csv(in));
      }
      const auto mean = aggregate_runs(series);
      const fs::path mean_path = dir / (std::string(to_string(s)) + "_mean.csv");
      std::ofstream out(mean_path, std::ios::binary);
      out << "scheme,runs,t,error,network_variance,cumulative_bits\n";
      for (const auto& row : mean) {
        out << to_string(s) << ',' << cfg.runs << ',' << row.t << ',';
        if (row.error) out << format_double(*row.error);
        out << ',' << format_double(row.network_variance) << ','
            << format_double(row.cumulative_bits) << '\n';
      }
      if (!out) throw std::runtime_error("failed to write " + mean_path.string());
      result.files_written.push_back(mean_path.string());
    }
  }

  write_header_json(dir / "header.json", cfg, g, problem, w_star);
  result.files_written.push_back((dir / "header.json").string());

  result.exit_status = result.errors.empty() ? 0 : 1;
  return result;
}

}  // namespace maxdissent

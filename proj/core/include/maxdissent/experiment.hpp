#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maxdissent/graph.hpp"
#include "maxdissent/mixing.hpp"
#include "maxdissent/optimizer.hpp"
#include "maxdissent/problems.hpp"

namespace maxdissent {

struct GraphConfig {
  GraphKind kind = GraphKind::line;
  int n = 2;
  std::optional<double> p;  // erdos_renyi only
};

struct ProblemConfig {
  ProblemKind kind = ProblemKind::constant;
  int dim = 1;                  // constant only
  double theta0 = 0.0;          // ml_estimation
  int samples_per_agent = 10;   // logistic
  int feature_dim = 5;          // logistic
  std::optional<double> regularization;  // logistic; default 1/(2m)
};

struct ExperimentConfig {
  GraphConfig graph;
  std::vector<Scheme> schemes;
  ProblemConfig problem;
  StepSizeSchedule schedule;  // default inv_t, scale 1
  long steps = 1;
  int runs = 1;
  std::uint64_t base_seed = 0;
  long snapshot_every = 1;
  std::string output_path = "out";
  bool emit_trace = false;
  BitConstants bit_constants;
};

// Parses and validates the JSON experiment configuration. Unknown keys are
// rejected; missing optional fields get the documented defaults. Throws
// std::invalid_argument naming the offending field.
ExperimentConfig load_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

// Normalized JSON echo of a config (used for header.json and --dry-run).
std::string config_to_json(const ExperimentConfig& cfg);

struct RunOverrides {
  std::optional<std::string> out;
  std::optional<bool> trace;
  int jobs = 1;
  bool dry_run = false;
};

struct ExperimentResult {
  int exit_status = 0;
  std::vector<std::string> files_written;
  std::vector<std::string> errors;
};

// Executes every (scheme, run) pair. The problem instance, the initial
// states and the graph are derived from base_seed alone; run r draws its
// activation stream from base_seed ^ (r+1) so repeated invocations are
// byte-identical. Writes per-run CSVs, per-scheme aggregate CSVs, header.json
// and optional trace JSONL under the output directory.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOverrides& opt = {});

// Seed helpers shared with the tests.
std::uint64_t run_stream_seed(std::uint64_t base_seed, int run);
std::uint64_t graph_stream_seed(std::uint64_t base_seed);
std::uint64_t problem_stream_seed(std::uint64_t base_seed);
std::uint64_t initial_state_stream_seed(std::uint64_t base_seed);

// X(0): i.i.d. standard Gaussian entries.
StateMatrix initial_state(int n, int d, std::uint64_t seed);

}  // namespace maxdissent

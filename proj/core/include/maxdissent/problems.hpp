#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace maxdissent {

enum class ProblemKind { constant, ml_estimation, logistic };

const char* to_string(ProblemKind k);
ProblemKind problem_kind_from_string(const std::string& name);

struct LogisticSample {
  std::vector<double> features;
  int label = 0;  // 0 or 1
};

// A distributed objective F(w) = sum_i f_i(w) with per-agent data.
//  constant:      f_i == 0, any dimension.
//  ml_estimation: f_i(w) = (w - c_i)^2 / sigma_sq_i, d = 1.
//  logistic:      f_i = the agent's shard of the regularized cross-entropy
//                 loss J(w, b); the last coordinate of w is the bias.
struct ProblemSpec {
  ProblemKind kind = ProblemKind::constant;
  int n = 0;
  int d = 1;
  std::vector<double> c;               // ml_estimation
  std::vector<double> sigma_sq;        // ml_estimation
  std::vector<std::vector<LogisticSample>> shards;  // logistic, index 0 unused
  double regularization = 0.0;         // coefficient of ||w||^2 and b^2 in J
  int total_samples = 0;               // logistic
};

ProblemSpec make_constant_problem(int n, int d = 1);
ProblemSpec make_ml_problem(std::vector<double> c, std::vector<double> sigma_sq);
ProblemSpec make_logistic_problem(std::vector<std::vector<LogisticSample>> shards,
                                  std::optional<double> regularization = std::nullopt);

// Sensor-network estimation instance: 1/sigma_sq_i uniform on (0,1),
// c_i = theta0 + N(0, sigma_sq_i). Deterministic given the seed.
ProblemSpec generate_ml_instance(int n, double theta0, std::uint64_t rng_seed);

// Two synthetic Gaussian blobs centered at -1 and +1 per coordinate,
// labels in {0,1}, evenly sharded.
ProblemSpec generate_logistic_instance(int n, int samples_per_agent, int feature_dim,
                                       std::uint64_t rng_seed);

// A subgradient of f_i at w (the gradient; all three objectives are smooth).
std::vector<double> subgradient(const ProblemSpec& p, int agent, std::span<const double> w);

double local_loss(const ProblemSpec& p, int agent, std::span<const double> w);
double global_loss(const ProblemSpec& p, std::span<const double> w);

// Closed-form minimizer where one exists (ml_estimation only).
std::optional<std::vector<double>> optimum(const ProblemSpec& p);

// Uniform bound on ||subgradient|| over all of R^d, when one exists
// (Assumption-2 style reporting; the quadratic is unbounded).
std::optional<double> subgradient_bound(const ProblemSpec& p);

// JSON round-trip so instances are replayable without the generating seed.
std::string problem_to_json(const ProblemSpec& p);
ProblemSpec problem_from_json(const std::string& text);

}  // namespace maxdissent

#include "maxdissent/problems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "maxdissent/rng.hpp"

namespace maxdissent {

const char* to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::constant: return "constant";
    case ProblemKind::ml_estimation: return "ml_estimation";
    case ProblemKind::logistic: return "logistic";
  }
  return "?";
}

ProblemKind problem_kind_from_string(const std::string& name) {
  if (name == "constant") return ProblemKind::constant;
  if (name == "ml_estimation") return ProblemKind::ml_estimation;
  if (name == "logistic") return ProblemKind::logistic;
  throw std::invalid_argument("unknown problem kind: " + name);
}

ProblemSpec make_constant_problem(int n, int d) {
  if (n < 1 || d < 1) throw std::invalid_argument("constant problem: n, d must be >= 1");
  ProblemSpec p;
  p.kind = ProblemKind::constant;
  p.n = n;
  p.d = d;
  return p;
}

ProblemSpec make_ml_problem(std::vector<double> c, std::vector<double> sigma_sq) {
  if (c.empty() || c.size() != sigma_sq.size())
    throw std::invalid_argument("ml problem: c and sigma_sq must have equal size >= 1");
  for (double s : sigma_sq)
    if (!(s > 0.0)) throw std::invalid_argument("ml problem: sigma_sq must be positive");
  ProblemSpec p;
  p.kind = ProblemKind::ml_estimation;
  p.n = static_cast<int>(c.size());
  p.d = 1;
  p.c = std::move(c);
  p.sigma_sq = std::move(sigma_sq);
  return p;
}

ProblemSpec make_logistic_problem(std::vector<std::vector<LogisticSample>> shards,
                                  std::optional<double> regularization) {
  if (shards.size() < 2 || !shards[0].empty())
    throw std::invalid_argument("logistic problem: shards[0] must be the unused slot");
  ProblemSpec p;
  p.kind = ProblemKind::logistic;
  p.n = static_cast<int>(shards.size()) - 1;
  int total = 0;
  std::size_t feature_dim = 0;
  for (int i = 1; i <= p.n; ++i) {
    if (shards[i].empty())
      throw std::invalid_argument("logistic problem: every agent needs >= 1 sample");
    for (const auto& s : shards[i]) {
      if (feature_dim == 0) feature_dim = s.features.size();
      if (s.features.size() != feature_dim || feature_dim == 0)
        throw std::invalid_argument("logistic problem: inconsistent feature dimension");
      if (s.label != 0 && s.label != 1)
        throw std::invalid_argument("logistic problem: labels must be 0 or 1");
      ++total;
    }
  }
  p.d = static_cast<int>(feature_dim) + 1;  // weights plus bias
  p.shards = std::move(shards);
  p.total_samples = total;
  p.regularization = regularization.value_or(1.0 / (2.0 * total));
  if (p.regularization < 0.0)
    throw std::invalid_argument("logistic problem: regularization must be >= 0");
  return p;
}

ProblemSpec generate_ml_instance(int n, double theta0, std::uint64_t rng_seed) {
  if (n < 2) throw std::invalid_argument("generate_ml_instance: n must be >= 2");
  Rng rng(rng_seed);
  std::vector<double> c(n), sigma_sq(n);
  for (int i = 0; i < n; ++i) {
    const double inv = std::max(rng.uniform01(), 1e-9);  // 1/sigma^2 in (eps, 1)
    sigma_sq[i] = 1.0 / inv;
    c[i] = theta0 + std::sqrt(sigma_sq[i]) * rng.normal();
  }
  return make_ml_problem(std::move(c), std::move(sigma_sq));
}

ProblemSpec generate_logistic_instance(int n, int samples_per_agent, int feature_dim,
                                       std::uint64_t rng_seed) {
  if (n < 1 || samples_per_agent < 1 || feature_dim < 1)
    throw std::invalid_argument("generate_logistic_instance: all counts must be >= 1");
  Rng rng(rng_seed);
  std::vector<std::vector<LogisticSample>> shards(n + 1);
  for (int i = 1; i <= n; ++i) {
    shards[i].reserve(samples_per_agent);
    for (int s = 0; s < samples_per_agent; ++s) {
      LogisticSample sample;
      sample.label = rng.uniform_index(2);
      const double center = sample.label == 1 ? 1.0 : -1.0;
      sample.features.resize(feature_dim);
      for (int k = 0; k < feature_dim; ++k) sample.features[k] = center + rng.normal();
      shards[i].push_back(std::move(sample));
    }
  }
  return make_logistic_problem(std::move(shards));
}

namespace {

void check_dims(const ProblemSpec& p, int agent, std::span<const double> w) {
  if (agent < 1 || agent > p.n) throw std::invalid_argument("agent id out of range");
  if (static_cast<int>(w.size()) != p.d)
    throw std::invalid_argument("point dimension does not match problem");
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// log(1 + e^z) without overflow.
double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double logit(const LogisticSample& s, std::span<const double> w) {
  double z = w[s.features.size()];  // bias
  for (std::size_t k = 0; k < s.features.size(); ++k) z += s.features[k] * w[k];
  return z;
}

}  // namespace

std::vector<double> subgradient(const ProblemSpec& p, int agent, std::span<const double> w) {
  check_dims(p, agent, w);
  std::vector<double> grad(p.d, 0.0);
  switch (p.kind) {
    case ProblemKind::constant:
      break;
    case ProblemKind::ml_estimation:
      grad[0] = 2.0 * (w[0] - p.c[agent - 1]) / p.sigma_sq[agent - 1];
      break;
    case ProblemKind::logistic: {
      const double inv_m = 1.0 / p.total_samples;
      for (const auto& s : p.shards[agent]) {
        const double resid = sigmoid(logit(s, w)) - s.label;
        for (std::size_t k = 0; k < s.features.size(); ++k)
          grad[k] += inv_m * resid * s.features[k];
        grad[p.d - 1] += inv_m * resid;
      }
      // This agent's 1/n share of the l2 terms.
      const double reg = 2.0 * p.regularization / p.n;
      for (int k = 0; k < p.d; ++k) grad[k] += reg * w[k];
      break;
    }
  }
  return grad;
}

double local_loss(const ProblemSpec& p, int agent, std::span<const double> w) {
  check_dims(p, agent, w);
  switch (p.kind) {
    case ProblemKind::constant:
      return 0.0;
    case ProblemKind::ml_estimation: {
      const double dev = w[0] - p.c[agent - 1];
      return dev * dev / p.sigma_sq[agent - 1];
    }
    case ProblemKind::logistic: {
      double loss = 0.0;
      for (const auto& s : p.shards[agent]) {
        const double z = logit(s, w);
        loss += softplus(z) - s.label * z;  // cross-entropy
      }
      loss /= p.total_samples;
      double sq = 0.0;
      for (int k = 0; k < p.d; ++k) sq += w[k] * w[k];
      return loss + p.regularization / p.n * sq;
    }
  }
  return 0.0;
}

double global_loss(const ProblemSpec& p, std::span<const double> w) {
  double total = 0.0;
  for (int i = 1; i <= p.n; ++i) total += local_loss(p, i, w);
  return total;
}

std::optional<std::vector<double>> optimum(const ProblemSpec& p) {
  if (p.kind != ProblemKind::ml_estimation) return std::nullopt;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < p.n; ++i) {
    num += p.c[i] / p.sigma_sq[i];
    den += 1.0 / p.sigma_sq[i];
  }
  return std::vector<double>{num / den};
}

std::optional<double> subgradient_bound(const ProblemSpec& p) {
  switch (p.kind) {
    case ProblemKind::constant:
      return 0.0;
    case ProblemKind::ml_estimation:
      return std::nullopt;  // grows linearly in |w - c_i|
    case ProblemKind::logistic: {
      if (p.regularization > 0.0) return std::nullopt;
      double worst = 0.0;
      for (int i = 1; i <= p.n; ++i) {
        double acc = 0.0;
        for (const auto& s : p.shards[i]) {
          double sq = 1.0;  // bias coordinate
          for (double f : s.features) sq += f * f;
          acc += std::sqrt(sq);
        }
        worst = std::max(worst, acc / p.total_samples);
      }
      return worst;
    }
  }
  return std::nullopt;
}

std::string problem_to_json(const ProblemSpec& p) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(p.kind);
  j["n"] = p.n;
  j["d"] = p.d;
  switch (p.kind) {
    case ProblemKind::constant:
      break;
    case ProblemKind::ml_estimation:
      j["c"] = p.c;
      j["sigma_sq"] = p.sigma_sq;
      break;
    case ProblemKind::logistic: {
      j["regularization"] = p.regularization;
      auto shards = nlohmann::ordered_json::array();
      for (int i = 1; i <= p.n; ++i) {
        auto shard = nlohmann::ordered_json::array();
        for (const auto& s : p.shards[i])
          shard.push_back({{"features", s.features}, {"label", s.label}});
        shards.push_back(std::move(shard));
      }
      j["shards"] = std::move(shards);
      break;
    }
  }
  return j.dump();
}

ProblemSpec problem_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const auto kind = problem_kind_from_string(j.at("kind").get<std::string>());
  switch (kind) {
    case ProblemKind::constant:
      return make_constant_problem(j.at("n").get<int>(), j.at("d").get<int>());
    case ProblemKind::ml_estimation:
      return make_ml_problem(j.at("c").get<std::vector<double>>(),
                             j.at("sigma_sq").get<std::vector<double>>());
    case ProblemKind::logistic: {
      std::vector<std::vector<LogisticSample>> shards(1);
      for (const auto& shard : j.at("shards")) {
        std::vector<LogisticSample> list;
        for (const auto& s : shard) {
          LogisticSample sample;
          sample.features = s.at("features").get<std::vector<double>>();
          sample.label = s.at("label").get<int>();
          list.push_back(std::move(sample));
        }
        shards.push_back(std::move(list));
      }
      return make_logistic_problem(std::move(shards), j.at("regularization").get<double>());
    }
  }
  throw std::invalid_argument("unknown problem kind in JSON");
}

}  // namespace maxdissent

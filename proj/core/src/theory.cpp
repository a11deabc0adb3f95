#include "maxdissent/theory.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace maxdissent {

double delta_for(const SchemeSpec& spec, const Graph& g) {
  const int n = g.n();
  switch (spec.kind) {
    case Scheme::randomized_gossip: {
      // P* = min over adjacent ordered pairs; uniform selection by default.
      double p_star = 1.0;
      if (spec.neighbor_probs.empty()) {
        for (int s = 1; s <= n; ++s) p_star = std::min(p_star, 1.0 / g.degree(s));
      } else {
        for (int s = 1; s <= n; ++s)
          for (double v : spec.neighbor_probs[s]) p_star = std::min(p_star, v);
      }
      return p_star / n;
    }
    case Scheme::local_max_gossip:
      return 1.0 / n;
    case Scheme::global_max_gossip:
      return 0.5;
    case Scheme::load_balancing:
      return 1.0 / (2.0 * (n - 1.0) * (n - 1.0));
  }
  throw std::invalid_argument("unknown scheme");
}

double lambda_for(double delta, int n, int diam) {
  if (!(delta > 0.0 && delta <= 0.5))
    throw std::invalid_argument("lambda_for: delta must be in (0, 1/2]");
  if (n < 2) throw std::invalid_argument("lambda_for: n must be >= 2");
  if (diam < 1) throw std::invalid_argument("lambda_for: diam must be >= 1");
  const double lambda =
      1.0 - 2.0 * delta / ((n - 1.0) * static_cast<double>(diam) * diam);
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("lambda_for: result fell outside (0, 1)");
  return lambda;
}

std::pair<double, double> rate_constants(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("rate_constants: lambda must be in (0, 1)");
  const double root = std::sqrt(lambda);
  const double k = root / (1.0 - root);
  return {k, k};
}

ContractionReport contraction_report(const SchemeSpec& spec, const Graph& g) {
  ContractionReport r;
  r.scheme = spec.kind;
  r.n = g.n();
  r.diam = g.diameter();
  r.delta = delta_for(spec, g);
  r.lambda = lambda_for(r.delta, r.n, r.diam);
  std::tie(r.k1, r.k2) = rate_constants(r.lambda);
  return r;
}

std::string contraction_report_to_json(const ContractionReport& r) {
  nlohmann::ordered_json j;
  j["scheme"] = to_string(r.scheme);
  j["n"] = r.n;
  j["diam"] = r.diam;
  j["delta"] = r.delta;
  j["lambda"] = r.lambda;
  j["k1"] = r.k1;
  j["k2"] = r.k2;
  return j.dump();
}

double rate_envelope(const SchemeSpec& spec, const Graph& g, const ProblemBounds& bounds,
                     long t) {
  if (t < 1) throw std::invalid_argument("rate_envelope: t must be >= 1");
  const auto report = contraction_report(spec, g);
  const double n = g.n();
  const double l = bounds.subgradient_norm;
  const double root_t1 = std::sqrt(static_cast<double>(t) + 1.0);
  const double log_t1 = std::log(static_cast<double>(t) + 1.0);
  const double log_t = std::log(static_cast<double>(t));
  const double mixing = 2.0 * std::sqrt(n) + 1.0;
  return n / 2.0 * bounds.mean_offset / root_t1 +
         l * l * (1.0 + log_t1) / (2.0 * n * root_t1) +
         l * mixing * report.k1 * bounds.initial_spread / root_t1 +
         l * l * report.k2 * mixing * (1.0 + log_t) / root_t1;
}

ContractionEstimate estimate_contraction(const Graph& g, const StateMatrix& x,
                                         const SchemeSpec& spec, long samples, Rng& rng,
                                         const BitConstants& bits) {
  const double v0 = lyapunov(x);
  if (!(v0 > 0.0))
    throw std::invalid_argument("estimate_contraction: zero Lyapunov (already at consensus)");
  if (samples < 1) throw std::invalid_argument("estimate_contraction: samples must be >= 1");
  validate_scheme(spec, g);

  ContractionEstimate est;
  const int n = g.n();

  // Ratio after one concrete activation; works on a copy of x.
  auto ratio_after = [&](auto&& apply) {
    StateMatrix y = x;
    apply(y);
    return lyapunov(y) / v0;
  };

  switch (spec.kind) {
    case Scheme::global_max_gossip: {
      est.mean_ratio = ratio_after([&](StateMatrix& y) { step_global_max_gossip(g, y, bits); });
      est.samples = 1;
      est.exact = true;
      return est;
    }
    case Scheme::local_max_gossip: {
      // n equiprobable activations; enumerate them exactly.
      double mean = 0.0;
      for (int s = 1; s <= n; ++s)
        mean += ratio_after([&](StateMatrix& y) { step_local_max_gossip_at(g, y, s, bits); });
      est.mean_ratio = mean / n;
      est.samples = n;
      est.exact = true;
      return est;
    }
    case Scheme::randomized_gossip: {
      if (n <= 20) {
        // Exact expectation over all (s, partner) activations.
        double mean = 0.0;
        for (int s = 1; s <= n; ++s) {
          const auto& nb = g.neighbors(s);
          for (std::size_t k = 0; k < nb.size(); ++k) {
            const double prob =
                (spec.neighbor_probs.empty() ? 1.0 / nb.size() : spec.neighbor_probs[s][k]) / n;
            mean += prob * ratio_after([&](StateMatrix& y) {
              step_randomized_gossip_at(g, y, s, nb[k], bits);
            });
          }
        }
        est.mean_ratio = mean;
        est.samples = g.sum_degrees();
        est.exact = true;
        return est;
      }
      break;  // fall through to sampling
    }
    case Scheme::load_balancing:
      break;  // randomness sits in the acknowledgement choices; sample
  }

  double sum = 0.0, sum_sq = 0.0;
  for (long k = 0; k < samples; ++k) {
    const double r = ratio_after([&](StateMatrix& y) { step(g, y, spec, rng, bits); });
    sum += r;
    sum_sq += r * r;
  }
  est.mean_ratio = sum / samples;
  est.samples = samples;
  if (samples > 1) {
    const double var = std::max(0.0, (sum_sq - sum * sum / samples) / (samples - 1));
    est.std_error = std::sqrt(var / samples);
  }
  return est;
}

}  // namespace maxdissent

#pragma once

#include <string>
#include <utility>

#include "maxdissent/graph.hpp"
#include "maxdissent/mixing.hpp"
#include "maxdissent/rng.hpp"
#include "maxdissent/state.hpp"

namespace maxdissent {

// Analytical contraction constants for one scheme on one graph:
//   lambda = 1 - 2*delta / ((n-1) * diam^2),  k1 = k2 = sqrt(lambda)/(1-sqrt(lambda)).
struct ContractionReport {
  Scheme scheme;
  int n = 0;
  int diam = 0;
  double delta = 0.0;
  double lambda = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
};

// Guaranteed mixing weight on the max-edge:
//   randomized_gossip: min_{edge} P_ij / n
//   local_max_gossip:  1/n
//   global_max_gossip: 1/2
//   load_balancing:    1/(2(n-1)^2)
double delta_for(const SchemeSpec& spec, const Graph& g);

// 1 - 2*delta/((n-1)*diam^2); requires delta in (0, 1/2], result in (0, 1).
double lambda_for(double delta, int n, int diam);

// K1 = K2 = sqrt(lambda) / (1 - sqrt(lambda)).
std::pair<double, double> rate_constants(double lambda);

ContractionReport contraction_report(const SchemeSpec& spec, const Graph& g);

std::string contraction_report_to_json(const ContractionReport& r);

// Problem-dependent quantities entering the rate bound.
struct ProblemBounds {
  double subgradient_norm = 0.0;  // L
  double mean_offset = 0.0;       // ||xbar(0) - w*||
  double initial_spread = 0.0;    // ||X(0) - Xbar(0)||_F
};

// Upper envelope for the expected suboptimality of the time-averaged
// iterates at time t under alpha(t) = 1/sqrt(t):
//   n/2 * mean_offset / sqrt(t+1)
//   + L^2 (1 + ln(t+1)) / (2n sqrt(t+1))
//   + L (2 sqrt(n) + 1) K1 * initial_spread / sqrt(t+1)
//   + L^2 K2 (2 sqrt(n) + 1) (1 + ln t) / sqrt(t+1)
double rate_envelope(const SchemeSpec& spec, const Graph& g, const ProblemBounds& bounds,
                     long t);

struct ContractionEstimate {
  double mean_ratio = 0.0;
  double std_error = 0.0;
  long samples = 0;
  bool exact = false;  // true when the activation set was enumerated
};

// Mean and standard error of V(step(X)) / V(X) at fixed X. The activation
// distribution is enumerated exactly for the gossip schemes up to n = 20
// (std_error 0); otherwise `samples` Monte-Carlo rounds are drawn.
// Throws when V(X) = 0.
ContractionEstimate estimate_contraction(const Graph& g, const StateMatrix& x,
                                         const SchemeSpec& spec, long samples, Rng& rng,
                                         const BitConstants& bits = {});

}  // namespace maxdissent

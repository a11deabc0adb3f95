#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maxdissent/graph.hpp"
#include "maxdissent/rng.hpp"
#include "maxdissent/state.hpp"

namespace maxdissent {

enum class Scheme { randomized_gossip, local_max_gossip, global_max_gossip, load_balancing };

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& name);

// Per-message sizes used by the communication-cost accounting. Estimates are
// exchanged as estimate_bits-wide words; wakeups, requests and
// acknowledgements are ack_bits-wide control signals.
struct BitConstants {
  int estimate_bits = 32;
  int ack_bits = 1;
};

// Which averaging scheme runs. neighbor_probs applies to randomized_gossip
// only: row s holds the selection probabilities aligned with g.neighbors(s).
struct SchemeSpec {
  Scheme kind = Scheme::randomized_gossip;
  std::vector<std::vector<double>> neighbor_probs;  // index 0 unused when set

  static SchemeSpec make(Scheme kind);
  // Uniform neighbor selection, P_sj = 1/|N_s|.
  static SchemeSpec uniform_gossip(const Graph& g);
};

// Validates rows sum to 1 and are positive exactly on edges.
void validate_scheme(const SchemeSpec& spec, const Graph& g);

// Outcome of one averaging round. The averaged pairs are vertex-disjoint and
// double as the rank-one terms of the implied doubly stochastic matrix
// A = I - 1/2 sum (b_i-b_j)(b_i-b_j)^T.
struct MixEvent {
  std::vector<EdgeChoice> pairs;
  std::optional<int> activated;  // waking node, gossip schemes only
  std::uint64_t bits = 0;
};

inline std::size_t count_exchange_edges(const MixEvent& ev) { return ev.pairs.size(); }

// Dense n x n gossip matrix B(e) = I - 1/2 (b_i-b_j)(b_i-b_j)^T, row-major.
// Materialized on demand for audits and tests; the step functions below
// apply the averaging directly to the affected rows.
std::vector<double> gossip_matrix(const EdgeChoice& e, int n);
// The matrix implied by a whole event (identity off the averaged pairs).
std::vector<double> event_matrix(const MixEvent& ev, int n);

// One asynchronous gossip step: node s wakes, partner j ~ P_{s.}, both rows
// become the pair average. bits = 2 * estimate_bits.
MixEvent step_randomized_gossip(const Graph& g, StateMatrix& x, const SchemeSpec& spec,
                                Rng& rng, const BitConstants& bits = {});
// Forced-draw variant for deterministic traces.
MixEvent step_randomized_gossip_at(const Graph& g, StateMatrix& x, int s, int partner,
                                   const BitConstants& bits = {});

// Node s wakes and averages with its maximally dissenting neighbor.
// bits = ack_bits*|N_s| + estimate_bits*|N_s| + estimate_bits.
MixEvent step_local_max_gossip(const Graph& g, StateMatrix& x, Rng& rng,
                               const BitConstants& bits = {});
MixEvent step_local_max_gossip_at(const Graph& g, StateMatrix& x, int s,
                                  const BitConstants& bits = {});

// Deterministic: averages the global max-edge.
MixEvent step_global_max_gossip(const Graph& g, StateMatrix& x,
                                const BitConstants& bits = {});

// Synchronous round: every agent requests its max-dissent set S_i,
// acknowledges one request chosen uniformly among those received from
// senders inside S_i, and mutually acknowledged pairs average.
// bits = estimate_bits*sum|N_i| + ack_bits*n + ack_bits*ACK.
MixEvent step_load_balancing(const Graph& g, StateMatrix& x, Rng& rng,
                             const BitConstants& bits = {});

// Dispatch on spec.kind.
MixEvent step(const Graph& g, StateMatrix& x, const SchemeSpec& spec, Rng& rng,
              const BitConstants& bits = {});

// One JSON object per line for trace-level audit logs:
// {"t":..,"scheme":..,"activated":..,"pairs":[[i,j],..],"bits":..}
std::string event_to_json_line(long t, Scheme scheme, const MixEvent& ev);

}  // namespace maxdissent

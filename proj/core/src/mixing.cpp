#include "maxdissent/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace maxdissent {

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::randomized_gossip: return "randomized_gossip";
    case Scheme::local_max_gossip: return "local_max_gossip";
    case Scheme::global_max_gossip: return "global_max_gossip";
    case Scheme::load_balancing: return "load_balancing";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "randomized_gossip") return Scheme::randomized_gossip;
  if (name == "local_max_gossip") return Scheme::local_max_gossip;
  if (name == "global_max_gossip") return Scheme::global_max_gossip;
  if (name == "load_balancing") return Scheme::load_balancing;
  throw std::invalid_argument("unknown scheme: " + name);
}

SchemeSpec SchemeSpec::make(Scheme kind) { return SchemeSpec{kind, {}}; }

SchemeSpec SchemeSpec::uniform_gossip(const Graph& g) {
  SchemeSpec spec{Scheme::randomized_gossip, {}};
  spec.neighbor_probs.assign(g.n() + 1, {});
  for (int s = 1; s <= g.n(); ++s)
    spec.neighbor_probs[s].assign(g.neighbors(s).size(), 1.0 / g.degree(s));
  return spec;
}

void validate_scheme(const SchemeSpec& spec, const Graph& g) {
  if (spec.kind != Scheme::randomized_gossip) {
    if (!spec.neighbor_probs.empty())
      throw std::invalid_argument("neighbor_probs only apply to randomized_gossip");
    return;
  }
  if (spec.neighbor_probs.empty()) return;  // uniform default filled at use
  if (spec.neighbor_probs.size() != static_cast<std::size_t>(g.n()) + 1)
    throw std::invalid_argument("neighbor_probs must have one row per node");
  for (int s = 1; s <= g.n(); ++s) {
    const auto& row = spec.neighbor_probs[s];
    if (row.size() != g.neighbors(s).size())
      throw std::invalid_argument("neighbor_probs row does not match neighbor list");
    double sum = 0.0;
    for (double v : row) {
      if (!(v > 0.0)) throw std::invalid_argument("P_ij must be positive on every edge");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("neighbor_probs rows must sum to 1");
  }
}

namespace {

void average_pair(StateMatrix& x, int i, int j) {
  auto a = x.row(i);
  auto b = x.row(j);
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double m = 0.5 * (a[k] + b[k]);
    a[k] = m;
    b[k] = m;
  }
}

std::uint64_t gossip_pair_bits(const BitConstants& bits) {
  return 2ull * bits.estimate_bits;
}

}  // namespace

std::vector<double> gossip_matrix(const EdgeChoice& e, int n) {
  MixEvent ev;
  ev.pairs.push_back(e);
  return event_matrix(ev, n);
}

std::vector<double> event_matrix(const MixEvent& ev, int n) {
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) a[i * std::size_t(n) + i] = 1.0;
  for (const auto& e : ev.pairs) {
    if (e.i < 1 || e.j > n || e.i >= e.j) throw std::invalid_argument("bad pair in event");
    const std::size_t i = e.i - 1, j = e.j - 1;
    a[i * n + i] = 0.5;
    a[j * n + j] = 0.5;
    a[i * n + j] = 0.5;
    a[j * n + i] = 0.5;
  }
  return a;
}

MixEvent step_randomized_gossip_at(const Graph& g, StateMatrix& x, int s, int partner,
                                   const BitConstants& bits) {
  if (!g.has_edge(s, partner)) throw std::invalid_argument("activation is not an edge");
  average_pair(x, s, partner);
  MixEvent ev;
  ev.pairs.push_back(EdgeChoice::of(s, partner));
  ev.activated = s;
  ev.bits = gossip_pair_bits(bits);
  return ev;
}

MixEvent step_randomized_gossip(const Graph& g, StateMatrix& x, const SchemeSpec& spec,
                                Rng& rng, const BitConstants& bits) {
  if (spec.kind != Scheme::randomized_gossip)
    throw std::invalid_argument("spec.kind must be randomized_gossip");
  const int s = 1 + rng.uniform_index(g.n());
  const auto& nb = g.neighbors(s);
  int partner = nb.back();
  if (spec.neighbor_probs.empty()) {
    partner = nb[rng.uniform_index(static_cast<int>(nb.size()))];
  } else {
    const auto& row = spec.neighbor_probs[s];
    const double u = rng.uniform01();
    double acc = 0.0;
    for (std::size_t k = 0; k < nb.size(); ++k) {
      acc += row[k];
      if (u < acc) {
        partner = nb[k];
        break;
      }
    }
  }
  return step_randomized_gossip_at(g, x, s, partner, bits);
}

MixEvent step_local_max_gossip_at(const Graph& g, StateMatrix& x, int s,
                                  const BitConstants& bits) {
  const int partner = local_max_neighbor(g, x, s);
  average_pair(x, s, partner);
  MixEvent ev;
  ev.pairs.push_back(EdgeChoice::of(s, partner));
  ev.activated = s;
  // Wake every neighbor, pull their estimates, send ours to the winner.
  const std::uint64_t deg = g.degree(s);
  ev.bits = deg * bits.ack_bits + deg * bits.estimate_bits + bits.estimate_bits;
  return ev;
}

MixEvent step_local_max_gossip(const Graph& g, StateMatrix& x, Rng& rng,
                               const BitConstants& bits) {
  return step_local_max_gossip_at(g, x, 1 + rng.uniform_index(g.n()), bits);
}

MixEvent step_global_max_gossip(const Graph& g, StateMatrix& x, const BitConstants& bits) {
  const EdgeChoice e = max_edge(g, x);
  average_pair(x, e.i, e.j);
  MixEvent ev;
  ev.pairs.push_back(e);
  ev.bits = gossip_pair_bits(bits);
  return ev;
}

MixEvent step_load_balancing(const Graph& g, StateMatrix& x, Rng& rng,
                             const BitConstants& bits) {
  const int n = g.n();

  // Step 1-2: everyone shares its state and requests its max-dissent set.
  std::vector<std::vector<int>> dissent(n + 1);
  for (int i = 1; i <= n; ++i) dissent[i] = max_dissent_set(g, x, i);

  std::vector<std::vector<int>> inbox(n + 1);
  for (int i = 1; i <= n; ++i)
    for (int j : dissent[i]) inbox[j].push_back(i);

  // Step 3: acknowledge one request, uniformly among those received from
  // senders inside S_i. Requests from outside S_i are never acknowledged
  // (they cannot lead to a mutual pair in step 4).
  std::vector<int> ack_to(n + 1, 0);
  std::uint64_t acks = 0;
  for (int i = 1; i <= n; ++i) {
    std::vector<int> eligible;
    for (int j : inbox[i])
      if (std::binary_search(dissent[i].begin(), dissent[i].end(), j))
        eligible.push_back(j);
    if (eligible.empty()) continue;
    ack_to[i] = eligible.size() == 1
                    ? eligible.front()
                    : eligible[rng.uniform_index(static_cast<int>(eligible.size()))];
    ++acks;
  }

  // Step 4: mutual acknowledgements average.
  MixEvent ev;
  for (int i = 1; i <= n; ++i) {
    const int j = ack_to[i];
    if (j > i && ack_to[j] == i) {
      average_pair(x, i, j);
      ev.pairs.push_back({i, j});
    }
  }
  ev.bits = static_cast<std::uint64_t>(bits.estimate_bits) * g.sum_degrees() +
            static_cast<std::uint64_t>(bits.ack_bits) * n + bits.ack_bits * acks;
  return ev;
}

MixEvent step(const Graph& g, StateMatrix& x, const SchemeSpec& spec, Rng& rng,
              const BitConstants& bits) {
  switch (spec.kind) {
    case Scheme::randomized_gossip: return step_randomized_gossip(g, x, spec, rng, bits);
    case Scheme::local_max_gossip: return step_local_max_gossip(g, x, rng, bits);
    case Scheme::global_max_gossip: return step_global_max_gossip(g, x, bits);
    case Scheme::load_balancing: return step_load_balancing(g, x, rng, bits);
  }
  throw std::invalid_argument("unknown scheme");
}

std::string event_to_json_line(long t, Scheme scheme, const MixEvent& ev) {
  nlohmann::ordered_json j;
  j["t"] = t;
  j["scheme"] = to_string(scheme);
  if (ev.activated)
    j["activated"] = *ev.activated;
  else
    j["activated"] = nullptr;
  auto pairs = nlohmann::ordered_json::array();
  for (const auto& e : ev.pairs) pairs.push_back({e.i, e.j});
  j["pairs"] = std::move(pairs);
  j["bits"] = ev.bits;
  return j.dump();
}

}  // namespace maxdissent

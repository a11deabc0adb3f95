#include "maxdissent/graph.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "maxdissent/rng.hpp"

namespace maxdissent {

EdgeChoice EdgeChoice::of(int a, int b) {
  if (a == b) throw std::invalid_argument("edge endpoints must differ");
  return a < b ? EdgeChoice{a, b} : EdgeChoice{b, a};
}

const char* to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::complete: return "complete";
    case GraphKind::line: return "line";
    case GraphKind::star: return "star";
    case GraphKind::barbell: return "barbell";
    case GraphKind::ladder: return "ladder";
    case GraphKind::erdos_renyi: return "erdos_renyi";
  }
  return "?";
}

GraphKind graph_kind_from_string(const std::string& name) {
  if (name == "complete") return GraphKind::complete;
  if (name == "line") return GraphKind::line;
  if (name == "star") return GraphKind::star;
  if (name == "barbell") return GraphKind::barbell;
  if (name == "ladder") return GraphKind::ladder;
  if (name == "erdos_renyi") return GraphKind::erdos_renyi;
  throw std::invalid_argument("unknown graph kind: " + name);
}

namespace {

// Hop distances from `src` over adjacency lists; -1 marks unreachable.
std::vector<int> bfs_distances(const std::vector<std::vector<int>>& adj, int n, int src) {
  std::vector<int> dist(n + 1, -1);
  std::queue<int> q;
  dist[src] = 0;
  q.push(src);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  return dist;
}

}  // namespace

Graph::Graph(int n, std::vector<EdgeChoice> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ < 2) throw std::invalid_argument("graph needs at least 2 nodes");
  std::sort(edges_.begin(), edges_.end());
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const auto& e = edges_[k];
    if (e.i < 1 || e.j > n_ || e.i >= e.j)
      throw std::invalid_argument("edge endpoints out of range");
    if (k > 0 && edges_[k] == edges_[k - 1])
      throw std::invalid_argument("duplicate edge in edge list");
  }
  neighbors_.assign(n_ + 1, {});
  for (const auto& e : edges_) {
    neighbors_[e.i].push_back(e.j);
    neighbors_[e.j].push_back(e.i);
  }
  for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());

  auto dist = bfs_distances(neighbors_, n_, 1);
  for (int v = 1; v <= n_; ++v)
    if (dist[v] < 0) throw std::invalid_argument("graph is not connected");

  diameter_ = 0;
  for (int src = 1; src <= n_; ++src) {
    auto d = bfs_distances(neighbors_, n_, src);
    for (int v = 1; v <= n_; ++v) diameter_ = std::max(diameter_, d[v]);
  }
}

bool Graph::has_edge(int a, int b) const {
  if (a < 1 || b < 1 || a > n_ || b > n_ || a == b) return false;
  const auto& nb = neighbors_[a];
  return std::binary_search(nb.begin(), nb.end(), b);
}

int Graph::sum_degrees() const { return 2 * static_cast<int>(edges_.size()); }

namespace {

std::vector<EdgeChoice> complete_edges(int lo, int hi) {
  std::vector<EdgeChoice> e;
  for (int i = lo; i <= hi; ++i)
    for (int j = i + 1; j <= hi; ++j) e.push_back({i, j});
  return e;
}

bool edge_set_connected(int n, const std::vector<EdgeChoice>& edges) {
  std::vector<std::vector<int>> adj(n + 1);
  for (const auto& e : edges) {
    adj[e.i].push_back(e.j);
    adj[e.j].push_back(e.i);
  }
  auto dist = bfs_distances(adj, n, 1);
  for (int v = 1; v <= n; ++v)
    if (dist[v] < 0) return false;
  return true;
}

}  // namespace

Graph make_graph(GraphKind kind, int n, std::optional<double> p,
                 std::optional<std::uint64_t> rng_seed) {
  if (n < 2) throw std::invalid_argument("make_graph: n must be >= 2");
  if (p.has_value() != (kind == GraphKind::erdos_renyi))
    throw std::invalid_argument("make_graph: p is required exactly for erdos_renyi");

  switch (kind) {
    case GraphKind::complete:
      return Graph(n, complete_edges(1, n));
    case GraphKind::line: {
      std::vector<EdgeChoice> e;
      for (int i = 1; i < n; ++i) e.push_back({i, i + 1});
      return Graph(n, std::move(e));
    }
    case GraphKind::star: {
      std::vector<EdgeChoice> e;
      for (int i = 2; i <= n; ++i) e.push_back({1, i});
      return Graph(n, std::move(e));
    }
    case GraphKind::barbell: {
      // Two complete blocks of n/3 nodes joined by an n/3-node line; the
      // line endpoints attach to one node of each block.
      if (n % 3 != 0) throw std::invalid_argument("barbell: n must be divisible by 3");
      const int k = n / 3;
      auto e = complete_edges(1, k);
      auto right = complete_edges(2 * k + 1, 3 * k);
      e.insert(e.end(), right.begin(), right.end());
      for (int i = k + 1; i < 2 * k; ++i) e.push_back({i, i + 1});
      e.push_back({k, k + 1});
      e.push_back({2 * k, 2 * k + 1});
      return Graph(n, std::move(e));
    }
    case GraphKind::ladder: {
      // Two parallel rails 1..k and k+1..2k with rungs {i, k+i}.
      if (n % 2 != 0) throw std::invalid_argument("ladder: n must be even");
      const int k = n / 2;
      std::vector<EdgeChoice> e;
      for (int i = 1; i < k; ++i) {
        e.push_back({i, i + 1});
        e.push_back({k + i, k + i + 1});
      }
      for (int i = 1; i <= k; ++i) e.push_back({i, k + i});
      return Graph(n, std::move(e));
    }
    case GraphKind::erdos_renyi: {
      if (!(*p > 0.0 && *p <= 1.0))
        throw std::invalid_argument("erdos_renyi: p must be in (0, 1]");
      Rng rng(rng_seed.value_or(0));
      for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<EdgeChoice> e;
        for (int i = 1; i <= n; ++i)
          for (int j = i + 1; j <= n; ++j)
            if (rng.uniform01() < *p) e.push_back({i, j});
        if (edge_set_connected(n, e)) return Graph(n, std::move(e));
      }
      throw std::runtime_error("erdos_renyi: no connected sample within 1000 attempts");
    }
  }
  throw std::invalid_argument("make_graph: unknown kind");
}

std::string graph_to_edge_list(const Graph& g) {
  std::ostringstream out;
  out << g.n() << '\n';
  for (const auto& e : g.edges()) out << e.i << ' ' << e.j << '\n';
  return out.str();
}

Graph graph_from_edge_list(const std::string& text) {
  std::istringstream in(text);
  int n = 0;
  if (!(in >> n)) throw std::invalid_argument("edge list: missing node count");
  std::vector<EdgeChoice> edges;
  int a, b;
  while (in >> a >> b) edges.push_back(EdgeChoice::of(a, b));
  return Graph(n, std::move(edges));
}

}  // namespace maxdissent

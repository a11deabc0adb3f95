// Independent oracles used to cross-check the library. Everything here works
// from first principles (raw edge lists, dense matrices, explicit sums) and
// deliberately avoids the code paths under test.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <span>
#include <vector>

#include "maxdissent/graph.hpp"
#include "maxdissent/rng.hpp"
#include "maxdissent/state.hpp"

namespace oracles {

// All-pairs shortest-path diameter via BFS over a raw edge list.
inline int bfs_diameter(int n, const std::vector<maxdissent::EdgeChoice>& edges) {
  std::vector<std::vector<int>> adj(n + 1);
  for (const auto& e : edges) {
    adj[e.i].push_back(e.j);
    adj[e.j].push_back(e.i);
  }
  int diameter = 0;
  for (int src = 1; src <= n; ++src) {
    std::vector<int> dist(n + 1, -1);
    std::queue<int> q;
    dist[src] = 0;
    q.push(src);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj[u])
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          q.push(v);
        }
    }
    for (int v = 1; v <= n; ++v) {
      if (dist[v] < 0) return -1;  // disconnected
      diameter = std::max(diameter, dist[v]);
    }
  }
  return diameter;
}

inline bool bfs_reaches_all(int n, const std::vector<maxdissent::EdgeChoice>& edges, int src) {
  std::vector<std::vector<int>> adj(n + 1);
  for (const auto& e : edges) {
    adj[e.i].push_back(e.j);
    adj[e.j].push_back(e.i);
  }
  std::vector<char> seen(n + 1, 0);
  std::queue<int> q;
  seen[src] = 1;
  q.push(src);
  int count = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        q.push(v);
      }
  }
  return count == n;
}

// (1/n) sum_{i<j} ||x_i - x_j||^2, the pairwise form of the Lyapunov function.
inline double pairwise_lyapunov(const maxdissent::StateMatrix& x) {
  double sum = 0.0;
  for (int i = 1; i <= x.n(); ++i)
    for (int j = i + 1; j <= x.n(); ++j) {
      double sq = 0.0;
      for (int k = 0; k < x.d(); ++k) {
        const double d = x.at(i, k) - x.at(j, k);
        sq += d * d;
      }
      sum += sq;
    }
  return sum / x.n();
}

// Dense row-major matrix helpers.
inline std::vector<double> mat_mul(const std::vector<double>& a, const std::vector<double>& b,
                                   int n) {
  std::vector<double> c(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double aik = a[i * std::size_t(n) + k];
      for (int j = 0; j < n; ++j) c[i * std::size_t(n) + j] += aik * b[k * std::size_t(n) + j];
    }
  return c;
}

inline std::vector<double> mat_transpose(const std::vector<double>& a, int n) {
  std::vector<double> t(a.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[j * std::size_t(n) + i] = a[i * std::size_t(n) + j];
  return t;
}

// Applies a dense n x n matrix to a state matrix: Y = A X.
inline maxdissent::StateMatrix mat_apply(const std::vector<double>& a,
                                         const maxdissent::StateMatrix& x) {
  maxdissent::StateMatrix y(x.n(), x.d(), 0.0);
  for (int i = 1; i <= x.n(); ++i)
    for (int j = 1; j <= x.n(); ++j) {
      const double w = a[(i - 1) * std::size_t(x.n()) + (j - 1)];
      if (w == 0.0) continue;
      for (int k = 0; k < x.d(); ++k) y.at(i, k) += w * x.at(j, k);
    }
  return y;
}

// Exact Lyapunov decrease predicted by the A^T A entries:
// sum_{i<j} c_ij ||x_i - x_j||^2.
inline double predicted_lyapunov_drop(const std::vector<double>& a, int n,
                                      const maxdissent::StateMatrix& x) {
  const auto ata = mat_mul(mat_transpose(a, n), a, n);
  double drop = 0.0;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      double sq = 0.0;
      for (int k = 0; k < x.d(); ++k) {
        const double d = x.at(i, k) - x.at(j, k);
        sq += d * d;
      }
      drop += ata[(i - 1) * std::size_t(n) + (j - 1)] * sq;
    }
  return drop;
}

// Central finite differences of f at w.
inline std::vector<double> finite_difference_gradient(
    const std::function<double(std::span<const double>)>& f, std::vector<double> w,
    double h = 1e-6) {
  std::vector<double> grad(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double save = w[k];
    w[k] = save + h;
    const double up = f(w);
    w[k] = save - h;
    const double down = f(w);
    w[k] = save;
    grad[k] = (up - down) / (2.0 * h);
  }
  return grad;
}

// Random test instances (production generators, random shapes).
inline maxdissent::StateMatrix random_state(int n, int d, maxdissent::Rng& rng) {
  maxdissent::StateMatrix x(n, d);
  for (int i = 1; i <= n; ++i)
    for (int k = 0; k < d; ++k) x.at(i, k) = rng.normal();
  return x;
}

// A connected graph of a random family with a valid random size in
// [min_n, max_n].
inline maxdissent::Graph random_graph(int min_n, int max_n, maxdissent::Rng& rng) {
  using maxdissent::GraphKind;
  for (;;) {
    const GraphKind kind = static_cast<GraphKind>(rng.uniform_index(6));
    int n = min_n + rng.uniform_index(max_n - min_n + 1);
    switch (kind) {
      case GraphKind::barbell:
        n -= n % 3;
        if (n < std::max(min_n, 3)) continue;
        break;
      case GraphKind::ladder:
        n -= n % 2;
        if (n < std::max(min_n, 2)) continue;
        break;
      case GraphKind::erdos_renyi:
        return maxdissent::make_graph(kind, n, 0.3 + 0.5 * rng.uniform01(), rng.next_u64());
      default:
        break;
    }
    return maxdissent::make_graph(kind, n);
  }
}

}  // namespace oracles

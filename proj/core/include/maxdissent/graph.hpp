#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace maxdissent {

// An undirected edge {i, j} with the canonical orientation i < j.
struct EdgeChoice {
  int i = 0;
  int j = 0;

  static EdgeChoice of(int a, int b);
  auto operator<=>(const EdgeChoice&) const = default;
};

enum class GraphKind { complete, line, star, barbell, ladder, erdos_renyi };

const char* to_string(GraphKind kind);
GraphKind graph_kind_from_string(const std::string& name);

// Undirected connected communication graph. Nodes are labeled 1..n.
// Immutable after construction; neighbor lists are sorted ascending and the
// diameter is cached.
class Graph {
 public:
  // Builds from an explicit edge list; verifies connectivity, rejects
  // self-loops and duplicates.
  Graph(int n, std::vector<EdgeChoice> edges);

  int n() const { return n_; }
  const std::vector<EdgeChoice>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int node) const { return neighbors_[node]; }
  int degree(int node) const { return static_cast<int>(neighbors_[node].size()); }
  int diameter() const { return diameter_; }
  bool has_edge(int a, int b) const;
  int sum_degrees() const;  // equals 2|E|

 private:
  int n_;
  std::vector<EdgeChoice> edges_;          // sorted, i < j
  std::vector<std::vector<int>> neighbors_;  // index 0 unused; sorted
  int diameter_;
};

// Named graph families. `p` is required exactly for erdos_renyi; the seed is
// used only by erdos_renyi, which resamples (up to 1000 times) until the
// graph comes out connected.
Graph make_graph(GraphKind kind, int n,
                 std::optional<double> p = std::nullopt,
                 std::optional<std::uint64_t> rng_seed = std::nullopt);

// Edge-list text format: first line "n", then one "i j" pair per line,
// 1-indexed, ascending.
std::string graph_to_edge_list(const Graph& g);
Graph graph_from_edge_list(const std::string& text);

}  // namespace maxdissent

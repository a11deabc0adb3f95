#pragma once

#include <span>
#include <string>
#include <vector>

#include "maxdissent/graph.hpp"

namespace maxdissent {

// Network state: one d-dimensional estimate per agent, agents 1..n.
class StateMatrix {
 public:
  StateMatrix() = default;
  StateMatrix(int n, int d, double fill = 0.0)
      : n_(n), d_(d), data_(static_cast<std::size_t>(n) * d, fill) {}

  int n() const { return n_; }
  int d() const { return d_; }

  std::span<double> row(int agent) {
    return {data_.data() + static_cast<std::size_t>(agent - 1) * d_,
            static_cast<std::size_t>(d_)};
  }
  std::span<const double> row(int agent) const {
    return {data_.data() + static_cast<std::size_t>(agent - 1) * d_,
            static_cast<std::size_t>(d_)};
  }
  double& at(int agent, int k) { return data_[(agent - 1) * std::size_t(d_) + k]; }
  double at(int agent, int k) const { return data_[(agent - 1) * std::size_t(d_) + k]; }

  const std::vector<double>& raw() const { return data_; }
  bool all_finite() const;

  friend bool operator==(const StateMatrix&, const StateMatrix&) = default;

 private:
  int n_ = 0;
  int d_ = 0;
  std::vector<double> data_;
};

std::vector<double> row_mean(const StateMatrix& x);

// V(X) = sum_i ||x_i - mean||^2.
double lyapunov(const StateMatrix& x);

double pair_distance_sq(const StateMatrix& x, int i, int j);
double pair_distance(const StateMatrix& x, int i, int j);

// d(X): maximum distance over all node pairs.
double max_distance_any(const StateMatrix& x);
// d_G(X): maximum distance over graph edges only.
double max_distance_edge(const Graph& g, const StateMatrix& x);

// Edge maximizing the state gap; ties resolved to the lexicographically
// smallest (i, j). Squared distances are compared exactly, no epsilon.
EdgeChoice max_edge(const Graph& g, const StateMatrix& x);

// Neighbor of s at maximal distance; ties resolved to the smallest index.
int local_max_neighbor(const Graph& g, const StateMatrix& x, int s);

// S_i: the full arg-max set over N_i, no tie-breaking.
std::vector<int> max_dissent_set(const Graph& g, const StateMatrix& x, int i);

// CSV with header "agent,x1,..,xd", one row per agent.
std::string state_to_csv(const StateMatrix& x);

}  // namespace maxdissent

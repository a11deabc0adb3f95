#include "maxdissent/state.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "maxdissent/metrics.hpp"

namespace maxdissent {

bool StateMatrix::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

std::vector<double> row_mean(const StateMatrix& x) {
  std::vector<double> mean(x.d(), 0.0);
  for (int i = 1; i <= x.n(); ++i) {
    auto r = x.row(i);
    for (int k = 0; k < x.d(); ++k) mean[k] += r[k];
  }
  for (double& m : mean) m /= x.n();
  return mean;
}

double lyapunov(const StateMatrix& x) {
  const auto mean = row_mean(x);
  double v = 0.0;
  for (int i = 1; i <= x.n(); ++i) {
    auto r = x.row(i);
    for (int k = 0; k < x.d(); ++k) {
      const double dev = r[k] - mean[k];
      v += dev * dev;
    }
  }
  return v;
}

double pair_distance_sq(const StateMatrix& x, int i, int j) {
  auto a = x.row(i);
  auto b = x.row(j);
  double s = 0.0;
  for (int k = 0; k < x.d(); ++k) {
    const double dv = a[k] - b[k];
    s += dv * dv;
  }
  return s;
}

double pair_distance(const StateMatrix& x, int i, int j) {
  return std::sqrt(pair_distance_sq(x, i, j));
}

double max_distance_any(const StateMatrix& x) {
  double best = 0.0;
  for (int i = 1; i <= x.n(); ++i)
    for (int j = i + 1; j <= x.n(); ++j)
      best = std::max(best, pair_distance_sq(x, i, j));
  return std::sqrt(best);
}

double max_distance_edge(const Graph& g, const StateMatrix& x) {
  double best = 0.0;
  for (const auto& e : g.edges()) best = std::max(best, pair_distance_sq(x, e.i, e.j));
  return std::sqrt(best);
}

EdgeChoice max_edge(const Graph& g, const StateMatrix& x) {
  // Edges are stored sorted, so keeping the first strict maximum realizes
  // the lexicographic tie rule with exact comparisons.
  EdgeChoice best = g.edges().front();
  double best_sq = pair_distance_sq(x, best.i, best.j);
  for (const auto& e : g.edges()) {
    const double d = pair_distance_sq(x, e.i, e.j);
    if (d > best_sq) {
      best_sq = d;
      best = e;
    }
  }
  return best;
}

int local_max_neighbor(const Graph& g, const StateMatrix& x, int s) {
  const auto& nb = g.neighbors(s);
  if (nb.empty()) throw std::invalid_argument("node has no neighbors");
  int best = nb.front();
  double best_sq = pair_distance_sq(x, s, best);
  for (int r : nb) {
    const double d = pair_distance_sq(x, s, r);
    if (d > best_sq) {  // ties keep the smallest index (lists are sorted)
      best_sq = d;
      best = r;
    }
  }
  return best;
}

std::vector<int> max_dissent_set(const Graph& g, const StateMatrix& x, int i) {
  const auto& nb = g.neighbors(i);
  double best_sq = 0.0;
  for (int r : nb) best_sq = std::max(best_sq, pair_distance_sq(x, i, r));
  std::vector<int> set;
  for (int r : nb)
    if (pair_distance_sq(x, i, r) == best_sq) set.push_back(r);
  return set;
}

std::string state_to_csv(const StateMatrix& x) {
  std::ostringstream out;
  out << "agent";
  for (int k = 1; k <= x.d(); ++k) out << ",x" << k;
  out << '\n';
  for (int i = 1; i <= x.n(); ++i) {
    out << i;
    auto r = x.row(i);
    for (int k = 0; k < x.d(); ++k) out << ',' << format_double(r[k]);
    out << '\n';
  }
  return out.str();
}

}  // namespace maxdissent

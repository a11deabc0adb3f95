#include "maxdissent/optimizer.hpp"

#include <cmath>
#include <stdexcept>

#include "maxdissent/rng.hpp"

namespace maxdissent {

const char* to_string(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::inv_t: return "inv_t";
    case ScheduleKind::inv_sqrt_t: return "inv_sqrt_t";
    case ScheduleKind::constant: return "constant";
  }
  return "?";
}

ScheduleKind schedule_kind_from_string(const std::string& name) {
  if (name == "inv_t") return ScheduleKind::inv_t;
  if (name == "inv_sqrt_t") return ScheduleKind::inv_sqrt_t;
  if (name == "constant") return ScheduleKind::constant;
  throw std::invalid_argument("unknown schedule kind: " + name);
}

double StepSizeSchedule::at(long t) const {
  if (t < 1) throw std::invalid_argument("step-size schedules start at t = 1");
  switch (kind) {
    case ScheduleKind::inv_t: return scale / static_cast<double>(t);
    case ScheduleKind::inv_sqrt_t: return scale / std::sqrt(static_cast<double>(t));
    case ScheduleKind::constant: return scale;
  }
  return 0.0;
}

namespace {

constexpr double kDivergenceLimit = 1e12;

long default_snapshot_every(int n, int d, long steps) {
  if (static_cast<long>(n) * d <= 10000) return 1;
  return (steps + 9999) / 10000;
}

void check_finite(const StateMatrix& x, long t) {
  for (double v : x.raw()) {
    if (!std::isfinite(v) || std::abs(v) > kDivergenceLimit)
      throw divergence_error(t, "state diverged at t = " + std::to_string(t));
  }
}

}  // namespace

Trajectory run(const Graph& g, const ProblemSpec& problem, const SchemeSpec& scheme,
               const StepSizeSchedule& schedule, const StateMatrix& x0, long steps,
               std::uint64_t rng_seed, const MetricsSink& sink, long snapshot_every,
               const BitConstants& bits) {
  if (steps < 1) throw std::invalid_argument("run: steps must be >= 1");
  if (x0.n() != g.n()) throw std::invalid_argument("run: X0 rows must match the graph");
  if (x0.n() != problem.n || x0.d() != problem.d)
    throw std::invalid_argument("run: X0 shape must match the problem");
  if (!x0.all_finite()) throw std::invalid_argument("run: X0 must be finite");
  validate_scheme(scheme, g);

  if (snapshot_every <= 0) snapshot_every = default_snapshot_every(x0.n(), x0.d(), steps);

  Trajectory traj;
  traj.n = x0.n();
  traj.d = x0.d();
  traj.steps = steps;
  traj.snapshot_every = snapshot_every;

  Rng rng(rng_seed);
  StateMatrix x = x0;
  std::vector<double> grad;
  for (long t = 0; t < steps; ++t) {
    // Mixing phase: x becomes W(t+1).
    const MixEvent ev = step(g, x, scheme, rng, bits);
    if (sink) sink(t + 1, x, ev);
    if ((t + 1) % snapshot_every == 0 || t + 1 == steps) {
      traj.snapshot_t.push_back(t + 1);
      traj.w_snapshots.push_back(x);
    }
    // Subgradient phase at the post-mixing point.
    const double alpha = schedule.at(t + 1);
    for (int i = 1; i <= x.n(); ++i) {
      grad = subgradient(problem, i, x.row(i));
      auto r = x.row(i);
      for (int k = 0; k < x.d(); ++k) r[k] -= alpha * grad[k];
    }
    check_finite(x, t + 1);
  }
  traj.final_x = std::move(x);
  return traj;
}

StateMatrix time_averaged_iterate(const Trajectory& traj, const StepSizeSchedule& schedule) {
  if (traj.snapshot_every != 1 ||
      traj.snapshot_t.size() != static_cast<std::size_t>(traj.steps))
    throw std::invalid_argument("time_averaged_iterate: trajectory must snapshot every step");
  StateMatrix acc(traj.n, traj.d, 0.0);
  double weight_sum = 0.0;
  for (std::size_t k = 0; k < traj.w_snapshots.size(); ++k) {
    const double alpha = schedule.at(traj.snapshot_t[k]);
    weight_sum += alpha;
    const auto& w = traj.w_snapshots[k];
    for (int i = 1; i <= traj.n; ++i) {
      auto src = w.row(i);
      auto dst = acc.row(i);
      for (int c = 0; c < traj.d; ++c) dst[c] += alpha * src[c];
    }
  }
  for (int i = 1; i <= traj.n; ++i)
    for (int c = 0; c < traj.d; ++c) acc.at(i, c) /= weight_sum;
  return acc;
}

}  // namespace maxdissent

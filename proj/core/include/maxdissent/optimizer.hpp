#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "maxdissent/graph.hpp"
#include "maxdissent/mixing.hpp"
#include "maxdissent/problems.hpp"
#include "maxdissent/state.hpp"

namespace maxdissent {

enum class ScheduleKind { inv_t, inv_sqrt_t, constant };

const char* to_string(ScheduleKind k);
ScheduleKind schedule_kind_from_string(const std::string& name);

// Step-size sequence, evaluated at t >= 1.
//  inv_t:      scale / t        (non-summable, square-summable)
//  inv_sqrt_t: scale / sqrt(t)  (used for the rate experiments; not
//                                square-summable, see satisfies_diminishing)
//  constant:   scale
struct StepSizeSchedule {
  ScheduleKind kind = ScheduleKind::inv_t;
  double scale = 1.0;

  double at(long t) const;
  // Whether the sequence is non-increasing, non-summable and square-summable.
  bool satisfies_diminishing() const { return kind == ScheduleKind::inv_t; }
};

// Snapshots of the post-mixing iterates W(t) plus the final state.
struct Trajectory {
  int n = 0;
  int d = 0;
  long steps = 0;
  long snapshot_every = 1;
  std::vector<long> snapshot_t;          // the recorded t values (1-based)
  std::vector<StateMatrix> w_snapshots;  // W(t) for each recorded t
  StateMatrix final_x;
};

struct divergence_error : std::runtime_error {
  divergence_error(long t, const std::string& what) : std::runtime_error(what), t(t) {}
  long t;
};

// Called once per iteration with the post-mixing state W(t) and the event
// that produced it, before the subgradient step.
using MetricsSink = std::function<void(long t, const StateMatrix& w, const MixEvent& ev)>;

// Runs the two-phase state-dependent subgradient iteration:
//   W(t+1) = A(t, X(t)) X(t)
//   X(t+1) = W(t+1) - alpha(t+1) G(t+1),  g_i(t+1) in df_i(w_i(t+1))
// Subgradients are evaluated at the post-mixing point W(t+1).
// snapshot_every = 0 picks the default cadence (every step while the
// per-step storage n*d stays <= 1e4, else ceil(steps/1e4)).
// Throws divergence_error when any state entry leaves [-1e12, 1e12] or
// becomes non-finite.
Trajectory run(const Graph& g, const ProblemSpec& problem, const SchemeSpec& scheme,
               const StepSizeSchedule& schedule, const StateMatrix& x0, long steps,
               std::uint64_t rng_seed, const MetricsSink& sink = nullptr,
               long snapshot_every = 0, const BitConstants& bits = {});

// alpha-weighted running average of each agent's W iterates,
// sum_k alpha(k+1) w_i(k+1) / sum_k alpha(k+1). Requires a trajectory
// recorded at every step.
StateMatrix time_averaged_iterate(const Trajectory& traj, const StepSizeSchedule& schedule);

}  // namespace maxdissent

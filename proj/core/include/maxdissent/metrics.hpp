#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "maxdissent/mixing.hpp"
#include "maxdissent/state.hpp"

namespace maxdissent {

struct RunIdentity {
  Scheme scheme = Scheme::randomized_gossip;
  int run = 0;
  std::uint64_t seed = 0;
};

// Per-iteration measurements for one run.
//  error:            || stacked W(t) - w* 1 ||  (absent when w* is unknown)
//  network_variance: V(W(t))
//  cumulative_bits:  nondecreasing total communication cost
struct ExperimentRecord {
  long t = 0;
  std::optional<double> error;
  double network_variance = 0.0;
  std::uint64_t cumulative_bits = 0;
  Scheme scheme = Scheme::randomized_gossip;
  int run = 0;
  std::uint64_t seed = 0;
};

ExperimentRecord record(const RunIdentity& id, long t, const StateMatrix& w,
                        const MixEvent& ev, const std::optional<std::vector<double>>& w_star,
                        const ExperimentRecord* prev);

// Pointwise mean across runs; all series must share the iteration grid.
struct AggregateRow {
  long t = 0;
  std::optional<double> error;
  double network_variance = 0.0;
  double cumulative_bits = 0.0;
};

std::vector<AggregateRow> aggregate_runs(const std::vector<std::vector<ExperimentRecord>>& runs);

// CSV schema: scheme,run,seed,t,error,network_variance,cumulative_bits
// (header mandatory, LF endings, empty error field when absent).
extern const char* const kRecordsCsvHeader;
std::string record_to_csv_row(const ExperimentRecord& r);
void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> read_records_csv(std::istream& in);

// Shortest round-trip decimal representation (deterministic, locale-free).
std::string format_double(double v);

}  // namespace maxdissent

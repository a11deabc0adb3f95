#include "maxdissent/metrics.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace maxdissent {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

ExperimentRecord record(const RunIdentity& id, long t, const StateMatrix& w,
                        const MixEvent& ev, const std::optional<std::vector<double>>& w_star,
                        const ExperimentRecord* prev) {
  ExperimentRecord rec;
  rec.t = t;
  rec.scheme = id.scheme;
  rec.run = id.run;
  rec.seed = id.seed;
  rec.network_variance = lyapunov(w);
  rec.cumulative_bits = (prev ? prev->cumulative_bits : 0) + ev.bits;
  if (w_star) {
    if (static_cast<int>(w_star->size()) != w.d())
      throw std::invalid_argument("record: w* dimension does not match the state");
    double sq = 0.0;
    for (int i = 1; i <= w.n(); ++i) {
      auto r = w.row(i);
      for (int k = 0; k < w.d(); ++k) {
        const double dev = r[k] - (*w_star)[k];
        sq += dev * dev;
      }
    }
    rec.error = std::sqrt(sq);
  }
  return rec;
}

std::vector<AggregateRow> aggregate_runs(
    const std::vector<std::vector<ExperimentRecord>>& runs) {
  if (runs.empty()) throw std::invalid_argument("aggregate_runs: no series given");
  const std::size_t len = runs.front().size();
  for (const auto& series : runs)
    if (series.size() != len)
      throw std::invalid_argument("aggregate_runs: series lengths differ");

  std::vector<AggregateRow> out(len);
  for (std::size_t k = 0; k < len; ++k) {
    AggregateRow row;
    row.t = runs.front()[k].t;
    bool all_have_error = true;
    double err_sum = 0.0;
    for (const auto& series : runs) {
      const auto& rec = series[k];
      if (rec.t != row.t)
        throw std::invalid_argument("aggregate_runs: iteration grids do not match");
      row.network_variance += rec.network_variance;
      row.cumulative_bits += static_cast<double>(rec.cumulative_bits);
      if (rec.error)
        err_sum += *rec.error;
      else
        all_have_error = false;
    }
    row.network_variance /= runs.size();
    row.cumulative_bits /= runs.size();
    if (all_have_error) row.error = err_sum / runs.size();
    out[k] = row;
  }
  return out;
}

const char* const kRecordsCsvHeader = "scheme,run,seed,t,error,network_variance,cumulative_bits";

std::string record_to_csv_row(const ExperimentRecord& r) {
  std::ostringstream out;
  out << to_string(r.scheme) << ',' << r.run << ',' << r.seed << ',' << r.t << ',';
  if (r.error) out << format_double(*r.error);
  out << ',' << format_double(r.network_variance) << ',' << r.cumulative_bits;
  return out.str();
}

void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  out << kRecordsCsvHeader << '\n';
  for (const auto& r : records) out << record_to_csv_row(r) << '\n';
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument("bad numeric field: " + s);
  return v;
}

}  // namespace

std::vector<ExperimentRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRecordsCsvHeader)
    throw std::invalid_argument("records CSV: missing or unexpected header");
  std::vector<ExperimentRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 7) throw std::invalid_argument("records CSV: bad field count");
    ExperimentRecord r;
    r.scheme = scheme_from_string(fields[0]);
    r.run = static_cast<int>(parse_double(fields[1]));
    r.seed = std::stoull(fields[2]);
    r.t = std::stol(fields[3]);
    if (!fields[4].empty()) r.error = parse_double(fields[4]);
    r.network_variance = parse_double(fields[5]);
    r.cumulative_bits = std::stoull(fields[6]);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace maxdissent

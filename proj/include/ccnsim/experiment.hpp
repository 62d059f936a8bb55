#ifndef CCNSIM_EXPERIMENT_HPP
#define CCNSIM_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ccnsim/config.hpp"
#include "ccnsim/engine.hpp"
#include "ccnsim/metrics.hpp"

namespace ccnsim {

/// One simulation in a sweep.
struct RunPoint {
  std::string strategy;
  SweepAxis axis = SweepAxis::None;
  double axis_value = 0.0;
  unsigned repeat = 0;
  Scenario scenario;
};

struct RunRow {
  std::string strategy;
  std::string axis;
  double axis_value = 0.0;
  unsigned repeat = 0;
  std::uint64_t seed = 0;
  std::string scenario_hash;
  MetricsReport report;
};

/// Cartesian product of sweep values, strategies and repeats.
/// Repeat r uses seed `scenario.rng_seed + r`; every strategy shares it.
std::vector<RunPoint> plan_sweep(const RunConfig& config);

/// Reference implementation: runs points one after another.
std::vector<RunRow> run_points_serial(const std::vector<RunPoint>& points, const Graph& graph);
/// OpenMP version; `jobs` = 0 uses the runtime default. Output order matches the serial one.
std::vector<RunRow> run_points(const std::vector<RunPoint>& points, const Graph& graph, unsigned jobs);

/// Sorts rows by (axis value, strategy, repeat).
void sort_rows(std::vector<RunRow>& rows);

/// Column names of the per-run CSV, in order.
const std::vector<std::string>& run_columns();
void write_rows_csv(std::ostream& out, const std::vector<RunRow>& rows);

/// A CSV table read back as strings keyed by column name.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
  const std::string& text(std::size_t row, const std::string& name) const;
};
CsvTable read_csv(std::istream& in);

/// Mean of each metric per (strategy, axis value) across repeats.
struct SummaryRow {
  std::string strategy;
  std::string axis;
  double axis_value = 0.0;
  unsigned runs = 0;
  std::map<std::string, double> mean;
  std::map<std::string, double> stddev;
};
std::vector<SummaryRow> summarize(const CsvTable& table);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

/// The metrics averaged by summarize().
const std::vector<std::string>& summary_metrics();

/// Formats with 6 significant digits.
std::string format_number(double value);

}  // namespace ccnsim

#endif  // CCNSIM_EXPERIMENT_HPP

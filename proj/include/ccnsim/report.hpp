#ifndef CCNSIM_REPORT_HPP
#define CCNSIM_REPORT_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "ccnsim/experiment.hpp"

namespace ccnsim {

/// Malformed or empty input to report generation (CLI exit code 2).
class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FigureSpec {
  std::string id;
  std::string title;
  /// Empty for per-strategy tables.
  std::string axis;
  std::string axis_label;
  std::vector<std::string> metrics;
};

/// fig6, fig7, fig8, fig9, table2, table3.
const std::vector<FigureSpec>& figure_specs();
const FigureSpec& figure_spec(const std::string& id);

/// Columns the report needs from a sweep/run CSV; empty when all are present.
std::vector<std::string> missing_columns(const CsvTable& table, const FigureSpec& spec);

struct ReportOutput {
  /// Long format: figure,metric,strategy,x,mean,sd,runs.
  std::string data_csv;
  /// Markdown rendering (with QoS categories for table3).
  std::string markdown;
};

/// Throws ReportError on schema mismatch or an empty table.
ReportOutput build_report(const CsvTable& table, const std::string& figure);

/// Writes `<figure>_data.csv` and `<figure>.md` into `out_dir`; returns the markdown.
std::string write_report(const CsvTable& table, const std::string& figure, const std::string& out_dir);

}  // namespace ccnsim

#endif  // CCNSIM_REPORT_HPP

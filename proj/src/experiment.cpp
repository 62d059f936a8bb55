#include "ccnsim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include <omp.h>

namespace ccnsim {

namespace {

RunRow run_one(const RunPoint& point, const Graph& graph) {
  RunRow row;
  row.strategy = point.strategy;
  row.axis = to_string(point.axis);
  row.axis_value = point.axis_value;
  row.repeat = point.repeat;
  row.seed = point.scenario.rng_seed;
  row.scenario_hash = scenario_hash(point.scenario);
  row.report = run(point.scenario, graph);
  return row;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  out.push_back(std::move(field));
  return out;
}

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (char ch : field) {
    out += ch;
    if (ch == '"') {
      out += '"';
    }
  }
  return out + "\"";
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::vector<RunPoint> plan_sweep(const RunConfig& config) {
  std::vector<double> values = config.sweep_values;
  if (config.sweep_axis == SweepAxis::None || values.empty()) {
    values = {0.0};
  }
  std::vector<std::string> strategies = config.strategies;
  if (strategies.empty()) {
    strategies = {config.strategy};
  }
  std::vector<RunPoint> points;
  for (double v : values) {
    for (const auto& label : strategies) {
      const auto spec = find_strategy(label);
      if (!spec) {
        throw ConfigError("unknown strategy '" + label + "'");
      }
      for (unsigned r = 0; r < std::max(1u, config.repeats); ++r) {
        RunPoint p;
        p.strategy = spec->label;
        p.axis = config.sweep_axis;
        p.axis_value = v;
        p.repeat = r;
        p.scenario = with_axis_value(config.scenario, config.sweep_axis, v);
        p.scenario.probe_strategy = spec->probe;
        p.scenario.rng_seed = config.scenario.rng_seed + r;
        points.push_back(std::move(p));
      }
    }
  }
  return points;
}

std::vector<RunRow> run_points_serial(const std::vector<RunPoint>& points, const Graph& graph) {
  std::vector<RunRow> rows;
  rows.reserve(points.size());
  for (const auto& p : points) {
    rows.push_back(run_one(p, graph));
  }
  return rows;
}

std::vector<RunRow> run_points(const std::vector<RunPoint>& points, const Graph& graph, unsigned jobs) {
  std::vector<RunRow> rows(points.size());
  std::exception_ptr failure;
  const int threads = jobs > 0 ? static_cast<int>(jobs) : omp_get_max_threads();
  const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      rows[static_cast<std::size_t>(i)] = run_one(points[static_cast<std::size_t>(i)], graph);
    } catch (...) {
#pragma omp critical(ccnsim_sweep_failure)
      if (!failure) {
        failure = std::current_exception();
      }
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return rows;
}

void sort_rows(std::vector<RunRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const RunRow& a, const RunRow& b) {
    return std::tie(a.axis_value, a.strategy, a.repeat) < std::tie(b.axis_value, b.strategy, b.repeat);
  });
}

const std::vector<std::string>& run_columns() {
  static const std::vector<std::string> columns = {
      "strategy", "axis", "axis_value", "repeat", "seed", "scenario_hash", "duration_s", "issued_interests",
      "satisfied", "unsatisfied", "pending_at_end", "local_hits", "forwarded_interests", "retransmissions",
      "timeouts", "probed_interests", "failed_routers", "sent_packets", "received_packets", "dropped_queue",
      "dropped_failure", "dropped_no_route", "in_flight_at_end", "throughput_pkt_s", "packet_loss_pct",
      "avg_response_time_s", "avg_delay_ms", "jitter_ms", "accuracy_pct", "delivery_accuracy_pct", "hop_count_sum",
      "mean_hops", "delay_warning", "jitter_warning",
  };
  return columns;
}

void write_rows_csv(std::ostream& out, const std::vector<RunRow>& rows) {
  const auto& cols = run_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out << (i ? "," : "") << cols[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    const auto& m = row.report;
    const auto u = [](std::uint64_t v) { return std::to_string(v); };
    const std::vector<std::string> fields = {
        quote(row.strategy),
        row.axis,
        format_number(row.axis_value),
        std::to_string(row.repeat),
        u(row.seed),
        row.scenario_hash,
        format_number(m.duration_s),
        u(m.issued_interests),
        u(m.satisfied_count),
        u(m.unsatisfied_count),
        u(m.pending_at_end),
        u(m.local_hits),
        u(m.forwarded_interests),
        u(m.retransmissions),
        u(m.timeout_count),
        u(m.probed_interests),
        u(m.failed_routers),
        u(m.sent_packets()),
        u(m.received_packets()),
        u(m.interest_packets.dropped_queue + m.data_packets.dropped_queue),
        u(m.interest_packets.dropped_failure + m.data_packets.dropped_failure),
        u(m.interest_packets.dropped_no_route + m.data_packets.dropped_no_route),
        u(m.interest_packets.in_flight_at_end + m.data_packets.in_flight_at_end),
        format_number(m.throughput_pkt_s),
        format_number(m.packet_loss_pct),
        format_number(m.avg_response_time_s),
        format_number(m.avg_delay_ms),
        format_number(m.jitter_ms),
        format_number(m.accuracy_pct),
        format_number(m.delivery_accuracy_pct),
        u(m.hop_count_sum),
        format_number(m.mean_hops),
        m.delay_warning ? "1" : "0",
        m.jitter_warning ? "1" : "0",
    };
    for (std::size_t i = 0; i < fields.size(); ++i) {
      out << (i ? "," : "") << fields[i];
    }
    out << '\n';
  }
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw std::out_of_range("missing CSV column '" + name + "'");
  }
  return static_cast<std::size_t>(it - header.begin());
}

const std::string& CsvTable::text(std::size_t row, const std::string& name) const {
  return rows.at(row).at(column(name));
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  const auto& cell = text(row, name);
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) {
      throw std::invalid_argument(cell);
    }
    return v;
  } catch (const std::logic_error&) {
    throw std::runtime_error("column '" + name + "' row " + std::to_string(row + 1) + ": not a number '" + cell + "'");
  }
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("empty CSV");
  }
  table.header = split_line(line);
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") {
      continue;
    }
    auto fields = split_line(line);
    if (fields.size() != table.header.size()) {
      throw std::runtime_error("CSV row " + std::to_string(table.rows.size() + 2) + " has " +
                               std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  return table;
}

const std::vector<std::string>& summary_metrics() {
  static const std::vector<std::string> metrics = {
      "throughput_pkt_s", "packet_loss_pct", "avg_response_time_s", "avg_delay_ms", "jitter_ms",
      "accuracy_pct", "delivery_accuracy_pct", "hop_count_sum", "mean_hops", "satisfied", "unsatisfied",
      "forwarded_interests", "timeouts",
  };
  return metrics;
}

std::vector<SummaryRow> summarize(const CsvTable& table) {
  std::map<std::tuple<double, std::string, std::string>, std::vector<std::size_t>> groups;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    groups[{table.number(r, "axis_value"), table.text(r, "strategy"), table.text(r, "axis")}].push_back(r);
  }
  std::vector<SummaryRow> out;
  for (const auto& [key, members] : groups) {
    SummaryRow row;
    row.axis_value = std::get<0>(key);
    row.strategy = std::get<1>(key);
    row.axis = std::get<2>(key);
    row.runs = static_cast<unsigned>(members.size());
    for (const auto& metric : summary_metrics()) {
      double sum = 0.0;
      for (auto r : members) {
        sum += table.number(r, metric);
      }
      const double mean = sum / static_cast<double>(members.size());
      double sq = 0.0;
      for (auto r : members) {
        const double d = table.number(r, metric) - mean;
        sq += d * d;
      }
      row.mean[metric] = mean;
      row.stddev[metric] = members.size() > 1 ? std::sqrt(sq / static_cast<double>(members.size() - 1)) : 0.0;
    }
    out.push_back(std::move(row));
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "strategy,axis,axis_value,runs";
  for (const auto& metric : summary_metrics()) {
    out << ',' << metric << ',' << metric << "_sd";
  }
  out << '\n';
  for (const auto& row : rows) {
    out << quote(row.strategy) << ',' << row.axis << ',' << format_number(row.axis_value) << ',' << row.runs;
    for (const auto& metric : summary_metrics()) {
      out << ',' << format_number(row.mean.at(metric)) << ',' << format_number(row.stddev.at(metric));
    }
    out << '\n';
  }
}

}  // namespace ccnsim

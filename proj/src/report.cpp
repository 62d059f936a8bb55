#include "ccnsim/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "ccnsim/metrics.hpp"

namespace ccnsim {

namespace {

const std::map<std::string, std::string>& metric_labels() {
  static const std::map<std::string, std::string> labels = {
      {"forwarded_interests", "Forwarded interests"},
      {"timeouts", "Timeout interests"},
      {"avg_response_time_s", "Average response time (s)"},
      {"avg_delay_ms", "Delay (ms)"},
      {"packet_loss_pct", "Packet loss (%)"},
      {"accuracy_pct", "Accuracy of content provider (%)"},
      {"hop_count_sum", "Routing path (hops)"},
      {"throughput_pkt_s", "Throughput (packets/s)"},
      {"jitter_ms", "Jitter (ms)"},
  };
  return labels;
}

std::string label_of(const std::string& metric) {
  const auto it = metric_labels().find(metric);
  return it == metric_labels().end() ? metric : it->second;
}

struct Cell {
  double mean = 0.0;
  double sd = 0.0;
  unsigned runs = 0;
};

// (metric, strategy, x) -> cell
using Grid = std::map<std::string, std::map<std::string, std::map<double, Cell>>>;

Grid aggregate(const CsvTable& table, const FigureSpec& spec) {
  std::map<std::tuple<std::string, double>, std::vector<std::size_t>> groups;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const double x = spec.axis.empty() ? 0.0 : table.number(r, "axis_value");
    groups[{table.text(r, "strategy"), x}].push_back(r);
  }
  Grid grid;
  for (const auto& [key, members] : groups) {
    for (const auto& metric : spec.metrics) {
      std::vector<double> values;
      values.reserve(members.size());
      for (auto r : members) {
        values.push_back(table.number(r, metric));
      }
      Cell cell;
      cell.runs = static_cast<unsigned>(values.size());
      for (double v : values) {
        cell.mean += v;
      }
      cell.mean /= static_cast<double>(values.size());
      if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values) {
          sq += (v - cell.mean) * (v - cell.mean);
        }
        cell.sd = std::sqrt(sq / static_cast<double>(values.size() - 1));
      }
      grid[metric][std::get<0>(key)][std::get<1>(key)] = cell;
    }
  }
  return grid;
}

std::vector<std::string> strategy_order(const CsvTable& table) {
  std::set<std::string> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    seen.insert(table.text(r, "strategy"));
  }
  std::vector<std::string> order;
  for (const auto& s : known_strategies()) {
    if (seen.erase(s.label)) {
      order.push_back(s.label);
    }
  }
  order.insert(order.end(), seen.begin(), seen.end());
  return order;
}

std::string render_series(const Grid& grid, const FigureSpec& spec, const std::vector<std::string>& strategies) {
  std::ostringstream md;
  md << "# " << spec.title << "\n";
  for (const auto& metric : spec.metrics) {
    md << "\n## " << label_of(metric) << "\n\n| " << spec.axis_label << " |";
    for (const auto& s : strategies) {
      md << ' ' << s << " |";
    }
    md << "\n|---|";
    for (std::size_t i = 0; i < strategies.size(); ++i) {
      md << "---|";
    }
    md << '\n';
    std::set<double> xs;
    for (const auto& [strategy, series] : grid.at(metric)) {
      for (const auto& [x, cell] : series) {
        xs.insert(x);
      }
    }
    for (double x : xs) {
      md << "| " << format_number(x) << " |";
      for (const auto& s : strategies) {
        const auto& by_strategy = grid.at(metric);
        const auto it = by_strategy.find(s);
        if (it != by_strategy.end() && it->second.count(x)) {
          md << ' ' << format_number(it->second.at(x).mean) << " |";
        } else {
          md << " - |";
        }
      }
      md << '\n';
    }
  }
  return md.str();
}

QosCategory category_for(const std::string& metric, double value) {
  QosInput in;
  in.throughput_pkt_s = metric == "throughput_pkt_s" ? value : 0.0;
  in.packet_loss_pct = metric == "packet_loss_pct" ? value : 0.0;
  in.delay_ms = metric == "avg_delay_ms" ? value : 0.0;
  in.jitter_ms = metric == "jitter_ms" ? value : 0.0;
  const auto c = classify_qos(in);
  if (metric == "throughput_pkt_s") {
    return c.throughput;
  }
  if (metric == "packet_loss_pct") {
    return c.packet_loss;
  }
  if (metric == "avg_delay_ms") {
    return c.delay;
  }
  return c.jitter;
}

std::string render_table(const Grid& grid, const FigureSpec& spec, const std::vector<std::string>& strategies) {
  const bool qos = spec.id == "table3";
  std::ostringstream md;
  md << "# " << spec.title << "\n\n| Metric |";
  for (const auto& s : strategies) {
    md << ' ' << s << " |";
  }
  if (qos) {
    md << " QoS category |";
  }
  md << "\n|---|";
  for (std::size_t i = 0; i < strategies.size() + (qos ? 1 : 0); ++i) {
    md << "---|";
  }
  md << '\n';
  for (const auto& metric : spec.metrics) {
    md << "| " << label_of(metric) << " |";
    std::set<std::string> categories;
    for (const auto& s : strategies) {
      const auto& series = grid.at(metric).at(s);
      const double v = series.begin()->second.mean;
      md << ' ' << format_number(v);
      if (qos) {
        const auto* c = to_string(category_for(metric, v));
        categories.insert(c);
        md << " (" << c << ')';
      }
      md << " |";
    }
    if (qos) {
      md << ' ' << (categories.size() == 1 ? *categories.begin() : std::string("Mixed")) << " |";
    }
    md << '\n';
  }
  return md.str();
}

}  // namespace

const std::vector<FigureSpec>& figure_specs() {
  static const std::vector<FigureSpec> specs = {
      {"fig6", "Impact of cache size ratio", "cache_size_ratio", "Cache size ratio",
       {"forwarded_interests", "timeouts", "avg_response_time_s"}},
      {"fig7", "Impact of cache update ratio", "cache_update_ratio", "Cache update ratio",
       {"forwarded_interests", "timeouts", "avg_response_time_s"}},
      {"fig8", "Impact of router failures", "failures", "Failed routers", {"avg_delay_ms", "packet_loss_pct"}},
      {"fig9", "Impact of traffic variation", "frequency", "Interests per second",
       {"avg_delay_ms", "packet_loss_pct"}},
      {"table2", "Effectivity of probe", "", "", {"accuracy_pct", "hop_count_sum"}},
      {"table3", "QoS parameters", "", "", {"throughput_pkt_s", "packet_loss_pct", "avg_delay_ms", "jitter_ms"}},
  };
  return specs;
}

const FigureSpec& figure_spec(const std::string& id) {
  for (const auto& s : figure_specs()) {
    if (s.id == id) {
      return s;
    }
  }
  throw ReportError("unknown figure '" + id + "' (expected fig6, fig7, fig8, fig9, table2 or table3)");
}

std::vector<std::string> missing_columns(const CsvTable& table, const FigureSpec& spec) {
  std::vector<std::string> need = {"strategy", "seed", "scenario_hash"};
  if (!spec.axis.empty()) {
    need.push_back("axis");
    need.push_back("axis_value");
  }
  need.insert(need.end(), spec.metrics.begin(), spec.metrics.end());
  std::vector<std::string> missing;
  for (const auto& col : need) {
    if (std::find(table.header.begin(), table.header.end(), col) == table.header.end()) {
      missing.push_back(col);
    }
  }
  return missing;
}

ReportOutput build_report(const CsvTable& table, const std::string& figure) {
  const auto& spec = figure_spec(figure);
  const auto missing = missing_columns(table, spec);
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) {
      list += (list.empty() ? "" : ", ") + m;
    }
    throw ReportError("CSV is missing columns: " + list);
  }
  if (table.rows.empty()) {
    throw ReportError("CSV has no data rows");
  }
  if (!spec.axis.empty()) {
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      if (table.text(r, "axis") != spec.axis) {
        throw ReportError(figure + " needs a " + spec.axis + " sweep, row " + std::to_string(r + 1) + " has axis '" +
                          table.text(r, "axis") + "'");
      }
    }
  }
  Grid grid;
  try {
    grid = aggregate(table, spec);
  } catch (const std::runtime_error& e) {
    throw ReportError(e.what());
  }
  const auto strategies = strategy_order(table);

  ReportOutput out;
  std::ostringstream data;
  data << "figure,metric,strategy,x,mean,sd,runs\n";
  for (const auto& metric : spec.metrics) {
    for (const auto& s : strategies) {
      for (const auto& [x, cell] : grid.at(metric).at(s)) {
        data << spec.id << ',' << metric << ',' << s << ',' << format_number(x) << ',' << format_number(cell.mean)
             << ',' << format_number(cell.sd) << ',' << cell.runs << '\n';
      }
    }
  }
  out.data_csv = data.str();
  out.markdown = spec.axis.empty() ? render_table(grid, spec, strategies) : render_series(grid, spec, strategies);
  return out;
}

std::string write_report(const CsvTable& table, const std::string& figure, const std::string& out_dir) {
  const auto out = build_report(table, figure);
  std::filesystem::create_directories(out_dir);
  const auto base = std::filesystem::path(out_dir);
  {
    std::ofstream f(base / (figure + "_data.csv"), std::ios::binary);
    f << out.data_csv;
  }
  {
    std::ofstream f(base / (figure + ".md"), std::ios::binary);
    f << out.markdown;
  }
  return out.markdown;
}

}  // namespace ccnsim

// Command-line front end: run, sweep, report, validate.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ccnsim/config.hpp"
#include "ccnsim/engine.hpp"
#include "ccnsim/experiment.hpp"
#include "ccnsim/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> repeats;
  std::optional<unsigned> jobs;
  std::string out;
  bool force = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "Scenario config file")->required();
  cmd->add_option("--set", o.overrides, "Override a config key (key=value), repeatable");
  cmd->add_option("--seed", o.seed, "Base RNG seed");
  cmd->add_option("--repeats", o.repeats, "Number of seeds per point");
  cmd->add_option("--jobs", o.jobs, "Concurrent simulations (0 = all cores)");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_flag("--force", o.force, "Allow values outside the documented parameter ranges");
}

ccnsim::RunConfig effective_config(const CommonOptions& o) {
  auto config = ccnsim::load_config(o.config_path);
  for (const auto& assignment : o.overrides) {
    ccnsim::apply_override(config, assignment);
  }
  if (o.seed) {
    config.scenario.rng_seed = *o.seed;
  }
  if (o.repeats) {
    config.repeats = *o.repeats;
  }
  if (o.jobs) {
    config.jobs = *o.jobs;
  }
  if (!o.out.empty()) {
    config.output_dir = o.out;
  }
  config.force = config.force || o.force;
  ccnsim::check_ranges(config);
  return config;
}

ccnsim::Graph checked_graph(const ccnsim::RunConfig& config) {
  auto graph = ccnsim::load_scenario_topology(config.scenario);
  ccnsim::validate(config.scenario, graph);
  return graph;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  out << text;
}

std::string rows_csv(const std::vector<ccnsim::RunRow>& rows) {
  std::ostringstream out;
  ccnsim::write_rows_csv(out, rows);
  return out.str();
}

std::string summary_csv(const std::string& rows_text) {
  std::istringstream in(rows_text);
  std::ostringstream out;
  ccnsim::write_summary_csv(out, ccnsim::summarize(ccnsim::read_csv(in)));
  return out.str();
}

int cmd_run(const CommonOptions& o) {
  auto config = effective_config(o);
  const auto graph = checked_graph(config);
  config.sweep_axis = ccnsim::SweepAxis::None;
  config.sweep_values.clear();
  config.strategies = {config.strategy};
  auto rows = ccnsim::run_points(ccnsim::plan_sweep(config), graph, config.jobs);
  ccnsim::sort_rows(rows);
  const auto csv = rows_csv(rows);
  const auto summary = summary_csv(csv);

  const std::filesystem::path dir = config.output_dir;
  std::filesystem::create_directories(dir);
  write_file(dir / "run.csv", csv);
  write_file(dir / "run_summary.csv", summary);
  write_file(dir / "effective.cfg", ccnsim::serialize(config));
  std::cout << summary;
  return kExitOk;
}

int cmd_sweep(const CommonOptions& o, const std::string& axis, const std::vector<double>& values,
              const std::vector<std::string>& strategies) {
  auto config = effective_config(o);
  if (!axis.empty()) {
    const auto parsed = ccnsim::parse_axis(axis);
    if (!parsed) {
      throw ccnsim::ConfigError("unknown sweep axis '" + axis + "'");
    }
    config.sweep_axis = *parsed;
  }
  if (!values.empty()) {
    config.sweep_values = values;
  }
  if (!strategies.empty()) {
    for (const auto& s : strategies) {
      if (!ccnsim::find_strategy(s)) {
        throw ccnsim::ConfigError("unknown strategy '" + s + "'");
      }
    }
    config.strategies = strategies;
  }
  if (config.sweep_axis == ccnsim::SweepAxis::None) {
    throw ccnsim::ConfigError("sweep needs a sweep axis");
  }
  if (config.sweep_values.empty()) {
    throw ccnsim::ConfigError("sweep value list is empty");
  }
  ccnsim::check_ranges(config);
  const auto graph = checked_graph(config);
  auto rows = ccnsim::run_points(ccnsim::plan_sweep(config), graph, config.jobs);
  ccnsim::sort_rows(rows);
  const auto csv = rows_csv(rows);

  const std::filesystem::path dir = config.output_dir;
  std::filesystem::create_directories(dir);
  write_file(dir / "sweep.csv", csv);
  write_file(dir / "effective.cfg", ccnsim::serialize(config));
  std::cout << "wrote " << rows.size() << " rows to " << (dir / "sweep.csv").string() << "\n";
  return kExitOk;
}

int cmd_report(const std::string& csv_path, const std::string& figure, const std::string& out_dir) {
  std::ifstream in(csv_path);
  if (!in) {
    throw ccnsim::ReportError("cannot open '" + csv_path + "'");
  }
  ccnsim::CsvTable table;
  try {
    table = ccnsim::read_csv(in);
  } catch (const std::runtime_error& e) {
    throw ccnsim::ReportError(csv_path + ": " + e.what());
  }
  const auto dir = out_dir.empty() ? std::filesystem::path(csv_path).parent_path().string() : out_dir;
  std::cout << ccnsim::write_report(table, figure, dir.empty() ? "." : dir);
  return kExitOk;
}

int cmd_validate(const CommonOptions& o) {
  const auto config = effective_config(o);
  const auto graph = checked_graph(config);
  std::cout << "# " << graph.node_count() << " nodes, " << graph.edge_count() << " links, scenario "
            << ccnsim::scenario_hash(config.scenario) << "\n"
            << ccnsim::serialize(config);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Packet-level CCN simulator with probe-based FIB update"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  auto* run = app.add_subcommand("run", "Run one scenario for each seed");
  add_common(run, run_opts);
  run->add_option_function<std::string>(
      "--strategy", [&](const std::string& s) { run_opts.overrides.push_back("strategy=" + s); },
      "basic-ccn, pit-probe, fib-probe, sequential or random");

  CommonOptions sweep_opts;
  std::string axis;
  std::vector<double> values;
  std::vector<std::string> strategies;
  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter across strategies and seeds");
  add_common(sweep, sweep_opts);
  sweep->add_option("--axis", axis, "cache_size_ratio, cache_update_ratio, failures or frequency");
  sweep->add_option("--values", values, "Axis values")->delimiter(',');
  sweep->add_option("--strategies", strategies, "Strategies to compare")->delimiter(',');

  std::string csv_path;
  std::string figure;
  std::string report_out;
  auto* report = app.add_subcommand("report", "Turn a run/sweep CSV into plot-ready files");
  report->add_option("--csv", csv_path, "Input CSV")->required();
  report->add_option("--figure", figure, "fig6, fig7, fig8, fig9, table2 or table3")->required();
  report->add_option("--out", report_out, "Output directory (default: next to the CSV)");

  CommonOptions validate_opts;
  auto* validate = app.add_subcommand("validate", "Check a config and print the effective settings");
  add_common(validate, validate_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) {
      return cmd_run(run_opts);
    }
    if (sweep->parsed()) {
      return cmd_sweep(sweep_opts, axis, values, strategies);
    }
    if (report->parsed()) {
      return cmd_report(csv_path, figure, report_out);
    }
    return cmd_validate(validate_opts);
  } catch (const ccnsim::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const ccnsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ccnsim::TopologyError& e) {
    std::cerr << "topology error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ccnsim::ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ccnsim::ReportError& e) {
    std::cerr << "report error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

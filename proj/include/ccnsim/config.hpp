#ifndef CCNSIM_CONFIG_HPP
#define CCNSIM_CONFIG_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ccnsim/engine.hpp"

namespace ccnsim {

/// Bad configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SweepAxis { None, CacheSizeRatio, CacheUpdateRatio, Failures, Frequency };

/// A named probe strategy as used on the command line and in CSV rows.
struct StrategySpec {
  std::string label;
  ProbeStrategy probe;
};

struct RunConfig {
  Scenario scenario;
  std::string output_dir = "out";
  unsigned repeats = 1;
  /// Label of the strategy used by `run`; sweeps use `strategies`.
  std::string strategy = "basic-ccn";
  SweepAxis sweep_axis = SweepAxis::None;
  std::vector<double> sweep_values;
  std::vector<std::string> strategies = {"basic-ccn", "pit-probe", "fib-probe"};
  unsigned jobs = 0;
  bool force = false;
};

std::optional<StrategySpec> find_strategy(std::string_view label);
const std::vector<StrategySpec>& known_strategies();

const char* to_string(ProbeStrategy s);
const char* to_string(CachePolicy p);
const char* to_string(Forwarding f);
const char* to_string(SweepAxis a);
std::optional<SweepAxis> parse_axis(std::string_view text);

/// Parses `key = value` lines; `[section]` headers are accepted and ignored.
/// Relative topology paths resolve against `base_dir`.
RunConfig parse_config(std::string_view text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

/// Applies one `key=value` override. Throws ConfigError on unknown keys or bad values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value,
                   const std::string& base_dir = ".");
void apply_override(RunConfig& config, std::string_view assignment);

/// Table-1 style range checks; skipped when `config.force` is set.
void check_ranges(const RunConfig& config);

/// Canonical text form of every scenario field; parse_config accepts it back.
std::string serialize(const Scenario& scenario);
std::string serialize(const RunConfig& config);
/// FNV-1a 64 of serialize(scenario) minus seed and probe strategy, as hex.
std::string scenario_hash(const Scenario& scenario);

/// Sets `axis` to `value` on the scenario. Failure counts fire at half time.
Scenario with_axis_value(Scenario scenario, SweepAxis axis, double value);

}  // namespace ccnsim

#endif  // CCNSIM_CONFIG_HPP

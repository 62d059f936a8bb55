#include "ccnsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ccnsim {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  return parts;
}

double to_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(out)) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(value) + "'");
  }
  return out;
}

std::uint64_t to_uint(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" + std::string(value) + "'");
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string resolve(const std::string& base_dir, std::string_view path) {
  std::filesystem::path p{std::string(path)};
  if (p.is_relative() && !base_dir.empty()) {
    p = std::filesystem::path(base_dir) / p;
  }
  return p.lexically_normal().string();
}

}  // namespace

const std::vector<StrategySpec>& known_strategies() {
  static const std::vector<StrategySpec> specs = {
      {"basic-ccn", ProbeStrategy::None},       {"pit-probe", ProbeStrategy::PitPopular},
      {"fib-probe", ProbeStrategy::FibMaxCost}, {"sequential", ProbeStrategy::Sequential},
      {"random", ProbeStrategy::Random},
  };
  return specs;
}

std::optional<StrategySpec> find_strategy(std::string_view label) {
  for (const auto& s : known_strategies()) {
    if (s.label == label) {
      return s;
    }
  }
  return std::nullopt;
}

const char* to_string(ProbeStrategy s) {
  switch (s) {
    case ProbeStrategy::None: return "basic-ccn";
    case ProbeStrategy::PitPopular: return "pit-probe";
    case ProbeStrategy::FibMaxCost: return "fib-probe";
    case ProbeStrategy::Sequential: return "sequential";
    case ProbeStrategy::Random: return "random";
  }
  return "?";
}

const char* to_string(CachePolicy p) { return p == CachePolicy::Fifo ? "fifo" : "lru"; }
const char* to_string(Forwarding f) { return f == Forwarding::BestRoute ? "best-route" : "broadcast"; }

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::None: return "none";
    case SweepAxis::CacheSizeRatio: return "cache_size_ratio";
    case SweepAxis::CacheUpdateRatio: return "cache_update_ratio";
    case SweepAxis::Failures: return "failures";
    case SweepAxis::Frequency: return "frequency";
  }
  return "?";
}

std::optional<SweepAxis> parse_axis(std::string_view text) {
  for (auto a : {SweepAxis::None, SweepAxis::CacheSizeRatio, SweepAxis::CacheUpdateRatio, SweepAxis::Failures,
                 SweepAxis::Frequency}) {
    if (text == to_string(a)) {
      return a;
    }
  }
  if (text == "interest_frequency") {
    return SweepAxis::Frequency;
  }
  return std::nullopt;
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view value, const std::string& base_dir) {
  auto& s = c.scenario;
  if (key == "topology") {
    s.topology = resolve(base_dir, value);
  } else if (key == "sim_duration") {
    s.sim_duration = to_double(key, value);
  } else if (key == "interest_frequency") {
    s.interest_frequency = to_double(key, value);
  } else if (key == "cache_size_ratio") {
    s.cache_size_ratio = to_double(key, value);
  } else if (key == "cache_update_ratio") {
    s.cache_update_ratio = to_double(key, value);
  } else if (key == "probe_strategy" || key == "strategy") {
    const auto spec = find_strategy(value);
    if (!spec) {
      throw ConfigError(std::string(key) + ": unknown strategy '" + std::string(value) + "'");
    }
    s.probe_strategy = spec->probe;
    c.strategy = spec->label;
  } else if (key == "cs_policy") {
    if (value == "fifo") {
      s.cs_policy = CachePolicy::Fifo;
    } else if (value == "lru") {
      s.cs_policy = CachePolicy::Lru;
    } else {
      throw ConfigError("cs_policy: expected fifo or lru");
    }
  } else if (key == "forwarding") {
    if (value == "best-route") {
      s.forwarding = Forwarding::BestRoute;
    } else if (value == "broadcast") {
      s.forwarding = Forwarding::Broadcast;
    } else {
      throw ConfigError("forwarding: expected best-route or broadcast");
    }
  } else if (key == "timeout") {
    s.timeout = to_double(key, value);
  } else if (key == "failures") {
    // "time:count, time:count" or "none"
    s.failures.clear();
    if (value != "none" && !value.empty()) {
      for (auto part : split(value, ',')) {
        const auto fields = split(part, ':');
        if (fields.size() != 2) {
          throw ConfigError("failures: expected 'time:count' entries, got '" + std::string(part) + "'");
        }
        s.failures.push_back(
            FailureSpec{to_double(key, fields[0]), static_cast<std::uint32_t>(to_uint(key, fields[1]))});
      }
    }
  } else if (key == "rng_seed" || key == "seed") {
    s.rng_seed = to_uint(key, value);
  } else if (key == "link_delay") {
    s.link_delay = to_double(key, value);
  } else if (key == "link_bandwidth") {
    s.link_bandwidth = (value == "unlimited" || value == "inf") ? 0.0 : to_double(key, value);
  } else if (key == "queue_capacity") {
    s.queue_capacity = to_uint(key, value);
  } else if (key == "payload_size") {
    s.payload_size = static_cast<std::uint32_t>(to_uint(key, value));
  } else if (key == "contents_per_producer") {
    s.contents_per_producer = static_cast<std::uint32_t>(to_uint(key, value));
  } else if (key == "fib_capacity") {
    s.fib_capacity = to_uint(key, value);
  } else if (key == "seed_producer_routes") {
    s.seed_producer_routes = value == "true" || value == "1" || value == "yes";
  } else if (key == "output_dir" || key == "out") {
    c.output_dir = resolve(base_dir, value);
  } else if (key == "repeats") {
    c.repeats = static_cast<unsigned>(to_uint(key, value));
  } else if (key == "sweep_axis" || key == "axis") {
    const auto axis = parse_axis(value);
    if (!axis) {
      throw ConfigError("sweep_axis: unknown axis '" + std::string(value) + "'");
    }
    c.sweep_axis = *axis;
  } else if (key == "sweep_values" || key == "values") {
    c.sweep_values.clear();
    for (auto v : split(value, ',')) {
      if (!v.empty()) {
        c.sweep_values.push_back(to_double(key, v));
      }
    }
  } else if (key == "strategies") {
    c.strategies.clear();
    for (auto v : split(value, ',')) {
      if (!find_strategy(v)) {
        throw ConfigError("strategies: unknown strategy '" + std::string(v) + "'");
      }
      c.strategies.emplace_back(v);
    }
  } else if (key == "jobs") {
    c.jobs = static_cast<unsigned>(to_uint(key, value));
  } else if (key == "force") {
    c.force = value == "true" || value == "1" || value == "yes";
  } else {
    throw ConfigError("unknown key '" + std::string(key) + "'");
  }
}

RunConfig parse_config(std::string_view text, const std::string& base_dir) {
  RunConfig config;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    auto line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty() || (line.front() == '[' && line.back() == ']')) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      apply_setting(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), base_dir);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config '" + path + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto base = std::filesystem::path(path).parent_path().string();
  try {
    return parse_config(buffer.str(), base.empty() ? "." : base);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void apply_override(RunConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("--set expects key=value, got '" + std::string(assignment) + "'");
  }
  apply_setting(config, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)), ".");
}

void check_ranges(const RunConfig& c) {
  if (c.force) {
    return;
  }
  auto check_ratio = [](const char* key, double v, double lo, double hi, bool zero_ok) {
    if ((zero_ok && v == 0.0) || (v >= lo - 1e-12 && v <= hi + 1e-12)) {
      return;
    }
    throw ConfigError(std::string(key) + " = " + fmt_double(v) + " outside [" + fmt_double(lo) + ", " +
                      fmt_double(hi) + "] (use --force to override)");
  };
  const auto& s = c.scenario;
  check_ratio("cache_size_ratio", s.cache_size_ratio, 0.01, 0.40, false);
  check_ratio("cache_update_ratio", s.cache_update_ratio, 0.01, 0.50, true);
  check_ratio("interest_frequency", s.interest_frequency, 1.0, 30.0, false);
  std::uint64_t failures = 0;
  for (const auto& f : s.failures) {
    failures += f.count;
  }
  check_ratio("failures", static_cast<double>(failures), 1.0, 20.0, true);
  if (c.repeats == 0) {
    throw ConfigError("repeats must be >= 1");
  }
  for (double v : c.sweep_values) {
    switch (c.sweep_axis) {
      case SweepAxis::CacheSizeRatio: check_ratio("sweep cache_size_ratio", v, 0.01, 0.40, false); break;
      case SweepAxis::CacheUpdateRatio: check_ratio("sweep cache_update_ratio", v, 0.01, 0.50, true); break;
      case SweepAxis::Failures: check_ratio("sweep failures", v, 1.0, 20.0, true); break;
      case SweepAxis::Frequency: check_ratio("sweep frequency", v, 1.0, 30.0, false); break;
      case SweepAxis::None: break;
    }
  }
}

std::string serialize(const Scenario& s) {
  std::ostringstream out;
  out << "topology = " << s.topology << "\n";
  out << "sim_duration = " << fmt_double(s.sim_duration) << "\n";
  out << "interest_frequency = " << fmt_double(s.interest_frequency) << "\n";
  out << "cache_size_ratio = " << fmt_double(s.cache_size_ratio) << "\n";
  out << "cache_update_ratio = " << fmt_double(s.cache_update_ratio) << "\n";
  out << "probe_strategy = " << to_string(s.probe_strategy) << "\n";
  out << "cs_policy = " << to_string(s.cs_policy) << "\n";
  out << "forwarding = " << to_string(s.forwarding) << "\n";
  out << "timeout = " << fmt_double(s.timeout) << "\n";
  out << "failures = ";
  if (s.failures.empty()) {
    out << "none";
  }
  for (std::size_t i = 0; i < s.failures.size(); ++i) {
    out << (i ? ", " : "") << fmt_double(s.failures[i].time) << ":" << s.failures[i].count;
  }
  out << "\n";
  out << "rng_seed = " << s.rng_seed << "\n";
  out << "link_delay = " << fmt_double(s.link_delay) << "\n";
  out << "link_bandwidth = " << (s.link_bandwidth > 0.0 ? fmt_double(s.link_bandwidth) : "unlimited") << "\n";
  out << "queue_capacity = " << s.queue_capacity << "\n";
  out << "payload_size = " << s.payload_size << "\n";
  out << "contents_per_producer = " << s.contents_per_producer << "\n";
  out << "fib_capacity = " << s.fib_capacity << "\n";
  out << "seed_producer_routes = " << (s.seed_producer_routes ? "true" : "false") << "\n";
  return out.str();
}

std::string serialize(const RunConfig& c) {
  std::ostringstream out;
  out << "[scenario]\n" << serialize(c.scenario);
  out << "\n[run]\n";
  out << "output_dir = " << c.output_dir << "\n";
  out << "repeats = " << c.repeats << "\n";
  out << "\n[sweep]\n";
  out << "sweep_axis = " << to_string(c.sweep_axis) << "\n";
  out << "sweep_values = ";
  for (std::size_t i = 0; i < c.sweep_values.size(); ++i) {
    out << (i ? ", " : "") << fmt_double(c.sweep_values[i]);
  }
  out << "\n";
  out << "strategies = ";
  for (std::size_t i = 0; i < c.strategies.size(); ++i) {
    out << (i ? ", " : "") << c.strategies[i];
  }
  out << "\n";
  return out.str();
}

std::string scenario_hash(const Scenario& scenario) {
  Scenario canonical = scenario;
  canonical.rng_seed = 0;
  canonical.probe_strategy = ProbeStrategy::None;
  canonical.topology = std::filesystem::path(scenario.topology).filename().string();
  const auto text = serialize(canonical);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Scenario with_axis_value(Scenario s, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::None:
      break;
    case SweepAxis::CacheSizeRatio:
      s.cache_size_ratio = value;
      break;
    case SweepAxis::CacheUpdateRatio:
      s.cache_update_ratio = value;
      break;
    case SweepAxis::Failures:
      s.failures.clear();
      if (value > 0.0) {
        s.failures.push_back(FailureSpec{s.sim_duration / 2.0, static_cast<std::uint32_t>(std::llround(value))});
      }
      break;
    case SweepAxis::Frequency:
      s.interest_frequency = value;
      break;
  }
  return s;
}

}  // namespace ccnsim

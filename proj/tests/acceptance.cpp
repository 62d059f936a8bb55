// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ccnsim/config.hpp"
#include "ccnsim/engine.hpp"
#include "ccnsim/experiment.hpp"
#include "ccnsim/metrics.hpp"
#include "ccnsim/model.hpp"
#include "ccnsim/topology.hpp"
#include "support.hpp"

using namespace ccnsim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("failed: " + what);
    }
  }
  void note(const std::string& what) { notes.push_back(what); }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, double v) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::size_t g_runs_audited = 0;
std::vector<std::string> g_audit_failures;

void audit_rows(const std::vector<RunRow>& rows) {
  for (const auto& row : rows) {
    try {
      row.report.audit();
    } catch (const InvariantViolation& e) {
      g_audit_failures.push_back(row.strategy + " seed " + std::to_string(row.seed) + ": " + e.what());
    }
    ++g_runs_audited;
  }
}

/// Runs a shipped config's sweep and keeps the per-run rows.
std::vector<RunRow> run_config_sweep(const std::string& file) {
  const auto config = load_config(testsupport::config_path(file));
  check_ranges(config);
  const auto graph = load_scenario_topology(config.scenario);
  validate(config.scenario, graph);
  auto rows = run_points(plan_sweep(config), graph, config.jobs);
  sort_rows(rows);
  audit_rows(rows);
  fs::create_directories("acceptance_out");
  std::ofstream out(fs::path("acceptance_out") / (file.substr(0, file.find('.')) + ".csv"));
  write_rows_csv(out, rows);
  return rows;
}

using MetricFn = std::function<double(const MetricsReport&)>;

/// Mean of a metric per (strategy, axis value) over repeats.
std::map<std::string, std::map<double, double>> means(const std::vector<RunRow>& rows, const MetricFn& metric) {
  std::map<std::string, std::map<double, std::pair<double, int>>> acc;
  for (const auto& r : rows) {
    auto& cell = acc[r.strategy][r.axis_value];
    cell.first += metric(r.report);
    cell.second += 1;
  }
  std::map<std::string, std::map<double, double>> out;
  for (const auto& [s, series] : acc) {
    for (const auto& [x, cell] : series) {
      out[s][x] = cell.first / cell.second;
    }
  }
  return out;
}

double overall_mean(const std::vector<RunRow>& rows, const std::string& strategy, const MetricFn& metric) {
  double sum = 0.0;
  int n = 0;
  for (const auto& r : rows) {
    if (r.strategy == strategy) {
      sum += metric(r.report);
      ++n;
    }
  }
  return n ? sum / n : 0.0;
}

/// Spearman rho of a series against its axis; flat series count as monotone.
double series_rho(const std::map<double, double>& series) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [x, y] : series) {
    xs.push_back(x);
    ys.push_back(y);
  }
  return testsupport::spearman(xs, ys);
}

struct NamedMetric {
  std::string name;
  MetricFn fn;
};

const NamedMetric kForwarded{"forwarded", [](const MetricsReport& m) { return double(m.forwarded_interests); }};
const NamedMetric kTimeouts{"timeouts", [](const MetricsReport& m) { return double(m.timeout_count); }};
const NamedMetric kResponse{"response_s", [](const MetricsReport& m) { return m.avg_response_time_s; }};
const NamedMetric kDelay{"delay_ms", [](const MetricsReport& m) { return m.avg_delay_ms; }};
const NamedMetric kLoss{"loss_pct", [](const MetricsReport& m) { return m.packet_loss_pct; }};

void check_trend(Outcome& o, const std::vector<RunRow>& rows, const std::vector<NamedMetric>& metrics,
                 const std::vector<std::string>& strategies, double sign, double threshold) {
  for (const auto& m : metrics) {
    const auto table = means(rows, m.fn);
    for (const auto& s : strategies) {
      const double rho = series_rho(table.at(s));
      const bool flat = std::isnan(rho);
      const bool ok = flat || sign * rho >= threshold;
      o.note(s + " " + m.name + " rho=" + (flat ? std::string("flat") : fmt("%.3f", rho)));
      o.require(ok, s + " " + m.name + " rho " + fmt("%.3f", rho) + (sign < 0 ? " > " : " < ") +
                        fmt("%.1f", sign * threshold));
    }
  }
}

int cli(const std::string& args) {
  const std::string cmd = std::string(CCNSIM_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// --- criteria -------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  InterestPacket i;
  i.name = {"P", 1};
  const auto bare_i = wire_size(i);
  i.probe = ContentName{"Q", 2};
  DataPacket d;
  d.name = {"P", 1};
  const auto bare_d = wire_size(d);
  d.probe = ContentName{"Q", 2};
  o.require(wire_size(i) - bare_i == 22, "interest delta");
  o.require(wire_size(d) - bare_d == 22, "data delta");
  o.require(bare_i == 5 && bare_d == 133, "base sizes 5 / 133");
  o.detail = "interest " + std::to_string(bare_i) + "->" + std::to_string(wire_size(i)) + ", data " +
             std::to_string(bare_d) + "->" + std::to_string(wire_size(d));
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto start = Clock::now();
  std::size_t pairs = 0;
  auto check_graph = [&](const Graph& g, const std::string& label) {
    const auto oracle = testsupport::floyd_warshall(g);
    for (auto src : g.nodes()) {
      const auto table = build_spt(g, src);
      for (auto dst : g.nodes()) {
        if (src == dst) {
          continue;
        }
        ++pairs;
        const auto* e = table.find(dst);
        const auto want = oracle[src.value][dst.value];
        if (want == testsupport::kInf) {
          o.require(e == nullptr, label + " unreachable pair has an entry");
          continue;
        }
        if (!e) {
          o.require(false, label + " missing entry");
          continue;
        }
        o.require(e->cost == want, label + " cost mismatch");
        o.require(e->cost == 1 + oracle[e->outgoing_interface.value][dst.value], label + " first-hop consistency");
      }
    }
  };
  check_graph(load_topology_file(testsupport::data_path("abilene.topo")), "abilene");
  std::mt19937_64 rng(20240501);
  for (int k = 0; k < 200; ++k) {
    const auto n = static_cast<std::size_t>(2 + rng() % 19);
    const auto extra = static_cast<std::size_t>(rng() % (n + 1));
    check_graph(testsupport::random_connected_graph(rng, n, extra), "random#" + std::to_string(k));
  }
  const double secs = seconds_since(start);
  o.require(secs < 5.0, "time budget 5 s");
  o.detail = std::to_string(pairs) + " pairs, " + fmt("%.2f s", secs);
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto start = Clock::now();
  std::uint64_t interests = 0;
  std::uint64_t duplicate_arrivals = 0;
  std::uint64_t aggregated = 0;
  for (const auto& spec : known_strategies()) {
    Scenario s;
    s.topology = testsupport::data_path("abilene.topo");
    s.sim_duration = 840;
    s.timeout = 12.0;
    s.link_delay = 1.0;
    s.cache_update_ratio = 0.05;
    s.probe_strategy = spec.probe;
    s.rng_seed = 31;
    Simulator sim(s, load_scenario_topology(s));
    std::map<std::pair<std::uint32_t, ContentName>, bool> pending;
    std::set<std::pair<std::uint32_t, std::uint64_t>> seen;
    sim.set_observer([&](const TraceRecord& rec) {
      if (!rec.is_interest && rec.trigger != EventKind::TimeoutCheck) {
        pending[{rec.router.value, rec.name}] = rec.pit_pending_after;
        return;
      }
      const auto key = std::make_pair(rec.router.value, rec.name);
      const bool was_pending = pending[key];
      bool forwarded = false;
      for (const auto& a : *rec.actions) {
        forwarded = forwarded || a.kind == ActionKind::ForwardInterest;
        aggregated += a.kind == ActionKind::Drop && a.reason == DropReason::Aggregated;
      }
      if (rec.trigger != EventKind::TimeoutCheck) {
        o.require(!(was_pending && forwarded), "second ForwardInterest while pending");
        const auto tok = std::make_pair(rec.router.value, rec.token);
        if (seen.contains(tok)) {
          ++duplicate_arrivals;
          const bool dropped = rec.actions->size() == 1 && rec.actions->front().kind == ActionKind::Drop;
          o.require(dropped, "duplicate nonce not dropped");
        }
        seen.insert(tok);
      }
      pending[key] = rec.pit_pending_after;
    });
    const auto report = sim.run();
    interests += report.issued_interests;
    try {
      report.audit();
      ++g_runs_audited;
    } catch (const InvariantViolation& e) {
      g_audit_failures.push_back(std::string("trace run: ") + e.what());
    }
  }
  // Deduplicate failure notes so one broken rule does not flood the log.
  std::set<std::string> unique(o.notes.begin(), o.notes.end());
  o.notes.assign(unique.begin(), unique.end());
  const double secs = seconds_since(start);
  o.require(interests >= 10000, "at least 1e4 interests");
  o.require(secs < 10.0, "time budget 10 s");
  o.detail = std::to_string(interests) + " interests over 5 strategies, " + std::to_string(duplicate_arrivals) +
             " duplicate-token arrivals dropped, " + std::to_string(aggregated) + " aggregations, " +
             fmt("%.2f s", secs);
  return o;
}

Outcome criterion4() {
  Outcome o;
  o.require(packet_loss(100, 90) == 10.0, "loss(100,90)=10");
  o.require(std::fabs(jitter({1, 3}).value - std::sqrt(2.0)) <= 1e-12, "jitter([1,3])=sqrt2");
  o.require(jitter({42, 42, 42, 42}).value == 0.0, "jitter(constant)=0");
  o.require(average_delay({100, 300}).value == 200.0, "mean([100,300])=200");
  o.detail = "loss " + fmt("%g", packet_loss(100, 90)) + "%, jitter " + fmt("%.15f", jitter({1, 3}).value);
  return o;
}

Outcome criterion5() {
  Outcome o;
  using enum QosCategory;
  struct Row {
    QosInput in;
    QosCategory t, l, d, j;
  };
  const std::vector<Row> rows = {
      {{85, 11.4, 275, 183}, Good, Good, Bad, Bad},
      {{87, 10.54, 217, 116}, Good, Good, Bad, Good},
      {{90, 10.34, 221, 126}, Good, Good, Bad, Bad},
  };
  for (const auto& r : rows) {
    const auto c = classify_qos(r.in);
    o.require(c.throughput == r.t && c.packet_loss == r.l && c.delay == r.d && c.jitter == r.j,
              "row " + fmt("%g", r.in.throughput_pkt_s));
  }
  o.detail = "3 published rows; PIT probe jitter 116 ms -> " +
             std::string(to_string(classify_qos(rows[1].in).jitter));
  return o;
}

struct SweepResults {
  std::vector<RunRow> fig6;
  double fig6_secs = 0.0;
};

Outcome criterion6(SweepResults& r) {
  Outcome o;
  const auto start = Clock::now();
  r.fig6 = run_config_sweep("fig6.cfg");
  r.fig6_secs = seconds_since(start);
  check_trend(o, r.fig6, {kForwarded, kTimeouts, kResponse}, {"basic-ccn", "pit-probe", "fib-probe"}, -1.0, 0.8);
  o.note(fmt("wall clock %.1f s (target < 120 s)", r.fig6_secs));
  o.detail = std::to_string(r.fig6.size()) + " runs, all series need rho <= -0.8";
  return o;
}

Outcome criterion7(const SweepResults& r) {
  Outcome o;
  const auto& rows = r.fig6;
  const double fwd_basic = overall_mean(rows, "basic-ccn", kForwarded.fn);
  const double to_basic = overall_mean(rows, "basic-ccn", kTimeouts.fn);
  const double rt_basic = overall_mean(rows, "basic-ccn", kResponse.fn);
  std::string detail;
  for (const char* probe : {"pit-probe", "fib-probe"}) {
    const double fwd = overall_mean(rows, probe, kForwarded.fn);
    const double to = overall_mean(rows, probe, kTimeouts.fn);
    const double rt = overall_mean(rows, probe, kResponse.fn);
    const double to_reduction = to_basic > 0 ? (to_basic - to) / to_basic * 100.0 : 0.0;
    const double rt_reduction = rt_basic - rt;
    o.require(fwd < fwd_basic, std::string(probe) + " forwarded < basic");
    o.require(to < to_basic, std::string(probe) + " timeouts < basic");
    o.require(to_reduction >= 3.0, std::string(probe) + " timeout reduction >= 3 pp");
    o.require(rt_reduction > 0.0, std::string(probe) + " response-time reduction > 0");
    o.note(std::string(probe) + ": forwarded " + fmt("%.1f", fwd) + " vs " + fmt("%.1f", fwd_basic) +
           ", timeouts " + fmt("%.1f", to) + " vs " + fmt("%.1f", to_basic) + " (reduction " +
           fmt("%.2f%%", to_reduction) + "), response " + fmt("%.3f s", rt) + " vs " + fmt("%.3f s", rt_basic) +
           " (reduction " + fmt("%.3f s", rt_reduction) + ")");
    detail += std::string(detail.empty() ? "" : "; ") + probe + " timeout reduction " +
              fmt("%+.2f%%", to_reduction) + ", response-time reduction " + fmt("%+.3f s", rt_reduction);
  }
  o.detail = detail;
  return o;
}

Outcome criterion8() {
  Outcome o;
  const auto rows = run_config_sweep("table2.cfg");
  auto acc = [](const MetricsReport& m) { return m.accuracy_pct; };
  auto delivery = [](const MetricsReport& m) { return m.delivery_accuracy_pct; };
  auto hops = [](const MetricsReport& m) { return double(m.hop_count_sum); };
  std::vector<std::pair<double, std::string>> ranking;
  double fib_hops = overall_mean(rows, "fib-probe", hops);
  std::string detail;
  for (const char* s : {"pit-probe", "fib-probe", "sequential", "random"}) {
    const double a = overall_mean(rows, s, acc);
    const double h = overall_mean(rows, s, hops);
    ranking.emplace_back(a, s);
    o.require(a >= 10.0 && a <= 35.0, std::string(s) + " accuracy " + fmt("%.2f%%", a) + " outside 10-35%");
    if (std::string(s) != "fib-probe") {
      o.require(fib_hops < h, std::string("fib-probe hops < ") + s);
    }
    o.note(std::string(s) + ": accuracy " + fmt("%.2f%%", a) + ", delivery-based accuracy " +
           fmt("%.2f%%", overall_mean(rows, s, delivery)) + ", total hops " + fmt("%.0f", h));
    detail += std::string(detail.empty() ? "" : ", ") + s + " " + fmt("%.2f%%", a);
  }
  std::sort(ranking.rbegin(), ranking.rend());
  o.require(ranking.front().second == "fib-probe", "fib-probe has the highest accuracy");
  o.note("weakest two (report only): " + ranking[2].second + " " + fmt("%.2f%%", ranking[2].first) + ", " +
         ranking[3].second + " " + fmt("%.2f%%", ranking[3].first));
  o.detail = detail;
  return o;
}

Outcome criterion9() {
  Outcome o;
  const auto start = Clock::now();
  const auto rows = run_config_sweep("fig7.cfg");
  check_trend(o, rows, {kForwarded, kTimeouts, kResponse}, {"basic-ccn", "pit-probe", "fib-probe"}, 1.0, 0.8);
  const auto to = means(rows, kTimeouts.fn);
  std::string crossover;
  for (const auto& [x, v] : to.at("fib-probe")) {
    if (x > 0.15) {
      crossover += fmt(" %.2f:", x) + (v > to.at("pit-probe").at(x) ? "fib>pit" : "fib<=pit");
    }
  }
  o.note("crossover above 15% churn (report only, timeouts):" + crossover);
  o.detail = std::to_string(rows.size()) + " runs, all series need rho >= 0.8, " +
             fmt("%.1f s", seconds_since(start));
  return o;
}

Outcome criterion10() {
  Outcome o;
  const auto start = Clock::now();
  const auto rows = run_config_sweep("fig8.cfg");
  check_trend(o, rows, {kDelay, kLoss}, {"basic-ccn", "pit-probe", "fib-probe"}, 1.0, 0.8);
  const auto delay = means(rows, kDelay.fn);
  std::string detail;
  for (const char* probe : {"pit-probe", "fib-probe"}) {
    int wins = 0;
    int points = 0;
    for (const auto& [x, v] : delay.at(probe)) {
      ++points;
      wins += v <= delay.at("basic-ccn").at(x);
    }
    const double share = points ? 100.0 * wins / points : 0.0;
    o.require(share >= 80.0, std::string(probe) + " delay <= basic at " + fmt("%.0f%%", share) + " of points");
    detail += std::string(detail.empty() ? "" : ", ") + probe + " <= basic at " + std::to_string(wins) + "/" +
              std::to_string(points);
  }
  o.detail = detail + ", " + fmt("%.1f s", seconds_since(start));
  return o;
}

Outcome criterion11() {
  Outcome o;
  const auto start = Clock::now();
  const fs::path base = fs::path("acceptance_out") / "determinism";
  fs::remove_all(base);
  const std::string cfg = testsupport::config_path("table2.cfg");
  const std::string args = "run --config " + cfg + " --strategy fib-probe --set cache_update_ratio=0.1 --repeats 3";
  o.require(cli(args + " --out " + (base / "a").string()) == 0, "first run exit 0");
  o.require(cli(args + " --out " + (base / "b").string()) == 0, "second run exit 0");
  const auto a = slurp(base / "a" / "run.csv");
  const auto b = slurp(base / "b" / "run.csv");
  o.require(!a.empty() && a == b, "run.csv byte-identical");
  const double secs = seconds_since(start);
  o.require(secs < 30.0, "time budget 30 s");
  o.detail = std::to_string(a.size()) + " bytes identical, " + fmt("%.1f s", secs);
  return o;
}

Outcome criterion12() {
  Outcome o;
  o.require(g_audit_failures.empty(), std::to_string(g_audit_failures.size()) + " runs broke an invariant");
  for (const auto& f : g_audit_failures) {
    o.note(f);
  }
  MetricsReport broken;
  broken.issued_interests = 1;
  bool threw = false;
  try {
    broken.finalize();
  } catch (const InvariantViolation&) {
    threw = true;
  }
  o.require(threw, "a broken report aborts finalize");
  o.detail = std::to_string(g_runs_audited) + " runs audited";
  return o;
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const char* title, const Outcome& o) {
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
    for (const auto& n : o.notes) {
      std::printf("        %s\n", n.c_str());
    }
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  };

  report(1, "probe overhead identity", criterion1());
  report(2, "SPT oracle equivalence", criterion2());
  report(3, "PIT aggregation property", criterion3());
  report(4, "metric formula oracles", criterion4());
  report(5, "QoS classification", criterion5());
  SweepResults sweeps;
  report(6, "cache size trend", criterion6(sweeps));
  report(7, "probe vs basic improvement", criterion7(sweeps));
  report(8, "provider accuracy ordering", criterion8());
  report(9, "churn trend", criterion9());
  report(10, "router failure trend", criterion10());
  report(11, "determinism", criterion11());
  report(12, "conservation audit", criterion12());

  std::printf("%d of 12 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}

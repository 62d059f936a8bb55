#ifndef CCNSIM_ENGINE_HPP
#define CCNSIM_ENGINE_HPP

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ccnsim/metrics.hpp"
#include "ccnsim/model.hpp"
#include "ccnsim/node.hpp"
#include "ccnsim/topology.hpp"

namespace ccnsim {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FailureSpec {
  double time = 0.0;
  std::uint32_t count = 0;

  bool operator==(const FailureSpec&) const = default;
};

/// Declarative description of one simulation run.
struct Scenario {
  std::string topology;
  double sim_duration = 480.0;
  /// Interests per second issued by every consumer.
  double interest_frequency = 1.0;
  double cache_size_ratio = 0.10;
  double cache_update_ratio = 0.0;
  ProbeStrategy probe_strategy = ProbeStrategy::None;
  CachePolicy cs_policy = CachePolicy::Fifo;
  Forwarding forwarding = Forwarding::BestRoute;
  double timeout = 0.5;
  std::vector<FailureSpec> failures;
  std::uint64_t rng_seed = 1;

  double link_delay = 1.0;
  /// 0 means unlimited.
  double link_bandwidth = 0.0;
  std::size_t queue_capacity = 64;
  std::uint32_t payload_size = wire::kDefaultPayload;
  std::uint32_t contents_per_producer = 100;
  /// 0 means unbounded.
  std::size_t fib_capacity = 0;
  /// Start every FIB with one entry per catalog name pointing at its producer.
  bool seed_producer_routes = false;

  bool operator==(const Scenario&) const = default;
};

/// Checks parameter sanity against the topology. Throws ScenarioError.
void validate(const Scenario& scenario, const Graph& graph);

enum class EventKind { PacketArrival, InterestIssue, TimeoutCheck, ChurnTick, FailureInjection, SimEnd };

struct PacketArrival {
  RouterId to;
  RouterId from;
  std::variant<InterestPacket, DataPacket> packet;
};

struct InterestIssue {
  RouterId consumer;
  std::uint32_t name_index = 0;
  std::uint64_t request_id = 0;
};

struct TimeoutCheck {
  RouterId router;
  ContentName name;
  std::uint64_t generation = 0;
};

struct FailureInjection {
  std::uint32_t count = 0;
};

struct Event {
  double time = 0.0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::SimEnd;
  std::variant<std::monostate, PacketArrival, InterestIssue, TimeoutCheck, FailureInjection> payload;
};

/// Min-heap on (time, seq); seq is assigned at push and makes the order total.
class EventQueue {
 public:
  void push(Event event);
  Event pop();
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (const auto& e : heap_) {
      fn(e);
    }
  }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };
  std::vector<Event> heap_;
  std::uint64_t next_seq_ = 0;
};

/// One direction of a link with a drop-tail transmit queue.
struct LinkQueue {
  RouterId from;
  RouterId to;
  double bandwidth_bps = 0.0;
  double delay_s = 0.0;
  std::size_t queue_cap = 64;
  double busy_until = 0.0;
  /// Serialization finish times of packets still queued or on the transmitter.
  std::deque<double> backlog;
};

/// Arrival time at the far end, or nullopt when the queue is full.
std::optional<double> schedule_transmission(LinkQueue& link, std::size_t bytes, double now);

/// Issue events for every consumer: `frequency` slots per second, one interest
/// placed uniformly inside each slot, names drawn uniformly from the catalog.
std::vector<Event> generate_interest_events(const Scenario& scenario, std::span<const RouterId> consumers,
                                            std::size_t catalog_size, Rng& rng);

/// Evicts ceil(ratio * |CS|) uniformly chosen cached replicas from every
/// router in `routers`. FIB entries are left alone.
void inject_cache_churn(std::span<RouterState* const> routers, double ratio, Rng& rng);

/// Hook for tests: one record per handler invocation.
struct TraceRecord {
  double time = 0.0;
  RouterId router;
  EventKind trigger = EventKind::PacketArrival;
  bool is_interest = false;
  ContentName name;
  std::uint64_t token = 0;
  RouterId in_iface;
  const std::vector<Action>* actions = nullptr;
  bool pit_pending_after = false;
};
using TraceObserver = std::function<void(const TraceRecord&)>;

class Simulator {
 public:
  Simulator(Scenario scenario, Graph graph);

  void set_observer(TraceObserver observer) { observer_ = std::move(observer); }
  MetricsReport run();

  const Graph& graph() const { return graph_; }
  const std::vector<ContentName>& catalog() const { return catalog_; }
  const RouterState& router(RouterId id) const { return routers_.at(id.value); }
  /// Routers knocked out by failure injection, in order.
  const std::vector<RouterId>& victims() const { return victims_; }

 private:
  void dispatch(const Event& event);
  void handle_arrival(const PacketArrival& arrival);
  void handle_issue(const InterestIssue& issue);
  void handle_timeout(const TimeoutCheck& check);
  void handle_failure(std::uint32_t count);
  void apply_actions(RouterId at, std::vector<Action>& actions);
  void transmit(RouterId from, RouterId to, std::variant<InterestPacket, DataPacket> packet);
  void notify(EventKind trigger, RouterId router, bool is_interest, const ContentName& name, std::uint64_t token,
              RouterId in_iface, const std::vector<Action>& actions);
  void refresh_routes();
  void finish();
  std::uint64_t next_token() { return ++token_counter_; }
  LinkQueue& link_queue(RouterId from, RouterId to, const Link& link);

  Scenario scenario_;
  Graph graph_;
  std::vector<ContentName> catalog_;
  std::vector<RouterState> routers_;
  std::unordered_map<std::uint64_t, LinkQueue> links_;
  std::vector<RouterId> victims_;
  EventQueue queue_;
  Rng rng_;
  MetricsReport report_;
  TraceObserver observer_;
  double now_ = 0.0;
  std::uint64_t token_counter_ = 0;
};

/// Loads the scenario's topology file and runs it.
MetricsReport run(const Scenario& scenario);
MetricsReport run(const Scenario& scenario, const Graph& graph);

/// Topology load with the scenario's link defaults applied.
Graph load_scenario_topology(const Scenario& scenario);

}  // namespace ccnsim

#endif  // CCNSIM_ENGINE_HPP

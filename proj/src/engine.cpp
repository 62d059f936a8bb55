#include "ccnsim/engine.hpp"

#include <algorithm>
#include <cmath>

namespace ccnsim {

namespace {

std::uint64_t direction_key(RouterId from, RouterId to) {
  return (static_cast<std::uint64_t>(from.value) << 32) | to.value;
}

std::size_t bytes_of(const std::variant<InterestPacket, DataPacket>& packet) {
  return std::visit([](const auto& p) { return wire_size(p); }, packet);
}

}  // namespace

// --- validation ---------------------------------------------------------------

void validate(const Scenario& s, const Graph& graph) {
  auto fail = [](const std::string& msg) { throw ScenarioError(msg); };
  if (!(s.sim_duration >= 0.0)) fail("sim_duration must be >= 0");
  if (!(s.interest_frequency >= 0.0)) fail("interest_frequency must be >= 0");
  if (!(s.cache_size_ratio >= 0.0 && s.cache_size_ratio <= 1.0)) fail("cache_size_ratio must be in [0, 1]");
  if (!(s.cache_update_ratio >= 0.0 && s.cache_update_ratio <= 1.0)) fail("cache_update_ratio must be in [0, 1]");
  if (!(s.timeout > 0.0)) fail("timeout must be > 0");
  if (!(s.link_delay >= 0.0)) fail("link_delay must be >= 0");
  if (!(s.link_bandwidth >= 0.0)) fail("link_bandwidth must be >= 0");
  if (s.queue_capacity == 0) fail("queue_capacity must be >= 1");
  if (s.contents_per_producer == 0) fail("contents_per_producer must be >= 1");
  if (graph.nodes_with_role(kRoleProducer).empty()) fail("topology has no producers");
  if (graph.nodes_with_role(kRoleConsumer).empty()) fail("topology has no consumers");
  std::uint64_t total_failures = 0;
  for (const auto& f : s.failures) {
    if (!(f.time >= 0.0)) fail("failure time must be >= 0");
    total_failures += f.count;
  }
  const auto eligible = graph.pure_routers().size();
  if (total_failures > eligible) {
    fail("failures request " + std::to_string(total_failures) + " routers but only " + std::to_string(eligible) +
         " pure routers are eligible");
  }
}

// --- event queue ------------------------------------------------------------------

void EventQueue::push(Event event) {
  event.seq = next_seq_++;
  heap_.push_back(std::move(event));
  std::push_heap(heap_.begin(), heap_.end(), Later{});
}

Event EventQueue::pop() {
  std::pop_heap(heap_.begin(), heap_.end(), Later{});
  Event event = std::move(heap_.back());
  heap_.pop_back();
  return event;
}

// --- links ---------------------------------------------------------------------------

std::optional<double> schedule_transmission(LinkQueue& link, std::size_t bytes, double now) {
  if (link.bandwidth_bps <= 0.0) {
    return now + link.delay_s;
  }
  while (!link.backlog.empty() && link.backlog.front() <= now) {
    link.backlog.pop_front();
  }
  if (link.backlog.size() >= link.queue_cap) {
    return std::nullopt;
  }
  const double start = std::max(now, link.busy_until);
  const double finish = start + static_cast<double>(bytes) * 8.0 / link.bandwidth_bps;
  link.busy_until = finish;
  link.backlog.push_back(finish);
  return finish + link.delay_s;
}

// --- workload and churn ------------------------------------------------------------

std::vector<Event> generate_interest_events(const Scenario& scenario, std::span<const RouterId> consumers,
                                            std::size_t catalog_size, Rng& rng) {
  std::vector<Event> events;
  if (catalog_size == 0 || scenario.interest_frequency <= 0.0 || scenario.sim_duration <= 0.0) {
    return events;
  }
  const double slot = 1.0 / scenario.interest_frequency;
  const auto per_consumer =
      static_cast<std::uint64_t>(std::floor(scenario.sim_duration * scenario.interest_frequency + 1e-9));
  events.reserve(per_consumer * consumers.size());
  std::uniform_real_distribution<double> offset(0.0, 1.0);
  std::uint64_t request_id = 0;
  for (std::uint64_t k = 0; k < per_consumer; ++k) {
    for (auto consumer : consumers) {
      Event e;
      e.time = (static_cast<double>(k) + offset(rng)) * slot;
      e.kind = EventKind::InterestIssue;
      e.payload = InterestIssue{consumer, static_cast<std::uint32_t>(uniform_index(rng, catalog_size)), ++request_id};
      events.push_back(std::move(e));
    }
  }
  return events;
}

void inject_cache_churn(std::span<RouterState* const> routers, double ratio, Rng& rng) {
  if (ratio <= 0.0) {
    return;
  }
  for (auto* router : routers) {
    auto names = router->cs.names();
    const auto evict = std::min(names.size(), static_cast<std::size_t>(std::ceil(ratio * names.size() - 1e-12)));
    // Partial Fisher-Yates: the first `evict` slots become a uniform sample.
    for (std::size_t i = 0; i < evict; ++i) {
      std::swap(names[i], names[i + uniform_index(rng, names.size() - i)]);
      router->cs.erase(names[i]);
    }
  }
}

// --- simulator -----------------------------------------------------------------------

Simulator::Simulator(Scenario scenario, Graph graph)
    : scenario_(std::move(scenario)), graph_(std::move(graph)), rng_(scenario_.rng_seed) {
  validate(scenario_, graph_);

  std::vector<std::string> prefixes;
  for (auto id : graph_.nodes_with_role(kRoleProducer)) {
    prefixes.push_back(graph_.name(id));
  }
  catalog_ = content_catalog(prefixes, scenario_.contents_per_producer);

  const auto cs_capacity =
      static_cast<std::size_t>(std::llround(scenario_.cache_size_ratio * static_cast<double>(catalog_.size())));
  const auto tables = build_all_spt(graph_);
  routers_.resize(graph_.slot_count());
  for (auto id : graph_.nodes()) {
    auto& r = routers_[id.value];
    r.id = id;
    r.cs = ContentStore(cs_capacity, scenario_.cs_policy);
    r.fib = FibTable(scenario_.fib_capacity);
    r.spt = tables[id.value];
    r.neighbors = graph_.neighbors(id);
    if (graph_.has_role(id, kRoleProducer)) {
      r.produced.push_back(graph_.name(id));
    }
    r.probe_strategy = scenario_.probe_strategy;
    r.forwarding = scenario_.forwarding;
    r.pit_timeout = scenario_.timeout;
    r.payload_size = scenario_.payload_size;
    r.dead_nonces = DeadNonceList(scenario_.timeout);
  }
  if (scenario_.seed_producer_routes) {
    for (const auto& name : catalog_) {
      const auto producer = graph_.find(name.prefix);
      for (auto id : graph_.nodes()) {
        if (producer && *producer != id) {
          fib_update(routers_[id.value], name, std::span<const RouterId>(&*producer, 1), 0.0);
        }
      }
    }
  }
}

LinkQueue& Simulator::link_queue(RouterId from, RouterId to, const Link& link) {
  const auto key = direction_key(from, to);
  auto it = links_.find(key);
  if (it == links_.end()) {
    LinkQueue q;
    q.from = from;
    q.to = to;
    q.bandwidth_bps = link.bandwidth_bps;
    q.delay_s = link.delay_s;
    q.queue_cap = scenario_.queue_capacity;
    it = links_.emplace(key, std::move(q)).first;
  }
  return it->second;
}

MetricsReport Simulator::run() {
  report_ = MetricsReport{};
  report_.duration_s = scenario_.sim_duration;

  const auto consumers = graph_.nodes_with_role(kRoleConsumer);
  for (auto& e : generate_interest_events(scenario_, consumers, catalog_.size(), rng_)) {
    queue_.push(std::move(e));
  }
  if (scenario_.cache_update_ratio > 0.0) {
    for (double t = 1.0; t < scenario_.sim_duration; t += 1.0) {
      queue_.push(Event{t, 0, EventKind::ChurnTick, std::monostate{}});
    }
  }
  for (const auto& f : scenario_.failures) {
    if (f.count > 0 && f.time < scenario_.sim_duration) {
      queue_.push(Event{f.time, 0, EventKind::FailureInjection, FailureInjection{f.count}});
    }
  }
  queue_.push(Event{scenario_.sim_duration, 0, EventKind::SimEnd, std::monostate{}});

  while (!queue_.empty()) {
    Event event = queue_.pop();
    now_ = event.time;
    if (event.kind == EventKind::SimEnd) {
      break;
    }
    dispatch(event);
  }
  finish();
  return report_;
}

void Simulator::dispatch(const Event& event) {
  switch (event.kind) {
    case EventKind::PacketArrival:
      handle_arrival(std::get<PacketArrival>(event.payload));
      break;
    case EventKind::InterestIssue:
      handle_issue(std::get<InterestIssue>(event.payload));
      break;
    case EventKind::TimeoutCheck:
      handle_timeout(std::get<TimeoutCheck>(event.payload));
      break;
    case EventKind::ChurnTick: {
      std::vector<RouterState*> alive;
      for (auto id : graph_.nodes()) {
        alive.push_back(&routers_[id.value]);
      }
      inject_cache_churn(alive, scenario_.cache_update_ratio, rng_);
      break;
    }
    case EventKind::FailureInjection:
      handle_failure(std::get<FailureInjection>(event.payload).count);
      break;
    case EventKind::SimEnd:
      break;
  }
}

void Simulator::notify(EventKind trigger, RouterId router, bool is_interest, const ContentName& name,
                       std::uint64_t token, RouterId in_iface, const std::vector<Action>& actions) {
  if (!observer_) {
    return;
  }
  TraceRecord rec;
  rec.time = now_;
  rec.router = router;
  rec.trigger = trigger;
  rec.is_interest = is_interest;
  rec.name = name;
  rec.token = token;
  rec.in_iface = in_iface;
  rec.actions = &actions;
  rec.pit_pending_after = routers_[router.value].pit.contains(name);
  observer_(rec);
}

void Simulator::handle_issue(const InterestIssue& issue) {
  if (!graph_.contains(issue.consumer)) {
    return;
  }
  ++report_.issued_interests;
  InterestPacket interest;
  interest.name = catalog_[issue.name_index];
  interest.token = next_token();
  interest.nonce = static_cast<std::uint8_t>(interest.token);
  interest.request_id = issue.request_id;
  interest.issue_time = now_;
  const auto token = interest.token;
  auto& router = routers_[issue.consumer.value];
  auto actions = on_interest(router, std::move(interest), kLocalFace, now_, rng_);
  notify(EventKind::InterestIssue, issue.consumer, true, catalog_[issue.name_index], token, kLocalFace, actions);
  apply_actions(issue.consumer, actions);
}

void Simulator::handle_arrival(const PacketArrival& arrival) {
  const bool is_interest = std::holds_alternative<InterestPacket>(arrival.packet);
  auto& counters = is_interest ? report_.interest_packets : report_.data_packets;
  if (!graph_.contains(arrival.to) || !graph_.link(arrival.from, arrival.to)) {
    ++counters.dropped_failure;
    return;
  }
  ++counters.received;
  auto& router = routers_[arrival.to.value];
  if (is_interest) {
    InterestPacket interest = std::get<InterestPacket>(arrival.packet);
    ++interest.hop_count;
    const auto name = interest.name;
    const auto token = interest.token;
    auto actions = on_interest(router, std::move(interest), arrival.from, now_, rng_);
    notify(EventKind::PacketArrival, arrival.to, true, name, token, arrival.from, actions);
    apply_actions(arrival.to, actions);
  } else {
    DataPacket data = std::get<DataPacket>(arrival.packet);
    ++data.hop_count;
    auto actions = on_data(router, data, arrival.from, now_);
    notify(EventKind::PacketArrival, arrival.to, false, data.name, 0, arrival.from, actions);
    apply_actions(arrival.to, actions);
  }
}

void Simulator::handle_timeout(const TimeoutCheck& check) {
  if (!graph_.contains(check.router)) {
    return;
  }
  auto& router = routers_[check.router.value];
  auto result = on_timeout(router, check.name, check.generation, now_, next_token(), rng_);
  if (!result.expired) {
    return;
  }
  ++report_.timeout_count;
  if (result.retransmitted) {
    ++report_.retransmissions;
  }
  report_.unsatisfied_count += result.abandoned.size();
  notify(EventKind::TimeoutCheck, check.router, true, check.name, 0, kLocalFace, result.actions);
  apply_actions(check.router, result.actions);
}

void Simulator::handle_failure(std::uint32_t count) {
  auto eligible = graph_.pure_routers();
  count = std::min<std::uint32_t>(count, static_cast<std::uint32_t>(eligible.size()));
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto pick = uniform_index(rng_, eligible.size());
    const auto victim = eligible[pick];
    eligible.erase(eligible.begin() + static_cast<std::ptrdiff_t>(pick));
    graph_.remove_node(victim);
    routers_[victim.value] = RouterState{};
    routers_[victim.value].id = victim;
    victims_.push_back(victim);
    ++report_.failed_routers;
  }
  refresh_routes();
}

void Simulator::refresh_routes() {
  const auto tables = build_all_spt(graph_);
  for (auto id : graph_.nodes()) {
    routers_[id.value].spt = tables[id.value];
    routers_[id.value].neighbors = graph_.neighbors(id);
  }
}

void Simulator::apply_actions(RouterId at, std::vector<Action>& actions) {
  for (auto& action : actions) {
    switch (action.kind) {
      case ActionKind::ForwardInterest: {
        auto& interest = std::get<InterestPacket>(action.packet);
        ++report_.forwarded_interests;
        if (interest.probe) {
          ++report_.probed_interests;
        }
        transmit(at, action.out_interface, std::move(interest));
        break;
      }
      case ActionKind::ForwardData: {
        auto& data = std::get<DataPacket>(action.packet);
        if (data.provider_id == at && data.hop_count == 0) {
          ++report_.data_created;
        }
        transmit(at, action.out_interface, std::move(data));
        break;
      }
      case ActionKind::DeliverLocal: {
        const auto& data = std::get<DataPacket>(action.packet);
        if (data.provider_id == at && data.hop_count == 0) {
          ++report_.data_created;
          report_.local_hits += action.requests.size();
        }
        for (const auto& req : action.requests) {
          ++report_.satisfied_count;
          report_.response_time_samples.push_back(now_ - req.issue_time);
        }
        ++report_.local_deliveries;
        if (data.hop_count > 0) {
          ++report_.network_deliveries;
        }
        report_.hop_count_sum += data.hop_count;
        if (action.expected_provider) {
          ++report_.expected_provider_total;
          if (*action.expected_provider == data.provider_id) {
            ++report_.expected_provider_hits;
          }
        }
        break;
      }
      case ActionKind::Drop:
        if (action.reason == DropReason::NoRoute) {
          ++report_.interest_packets.sent;
          ++report_.interest_packets.dropped_no_route;
        }
        break;
      case ActionKind::ArmTimeout: {
        Event e;
        e.time = action.deadline;
        e.kind = EventKind::TimeoutCheck;
        e.payload = TimeoutCheck{at, action.timer_name, action.generation};
        queue_.push(std::move(e));
        break;
      }
    }
  }
}

void Simulator::transmit(RouterId from, RouterId to, std::variant<InterestPacket, DataPacket> packet) {
  const bool is_interest = std::holds_alternative<InterestPacket>(packet);
  auto& counters = is_interest ? report_.interest_packets : report_.data_packets;
  ++counters.sent;
  const Link* link = graph_.link(from, to);
  if (!link) {
    ++counters.dropped_failure;
    return;
  }
  auto& q = link_queue(from, to, *link);
  const auto arrival = schedule_transmission(q, bytes_of(packet), now_);
  if (!arrival) {
    ++counters.dropped_queue;
    return;
  }
  Event e;
  e.time = *arrival;
  e.kind = EventKind::PacketArrival;
  e.payload = PacketArrival{to, from, std::move(packet)};
  queue_.push(std::move(e));
}

void Simulator::finish() {
  queue_.for_each([this](const Event& e) {
    if (e.kind == EventKind::PacketArrival) {
      const auto& arrival = std::get<PacketArrival>(e.payload);
      auto& counters = std::holds_alternative<InterestPacket>(arrival.packet) ? report_.interest_packets
                                                                               : report_.data_packets;
      ++counters.in_flight_at_end;
    }
  });
  for (auto id : graph_.nodes()) {
    for (const auto& [name, entry] : routers_[id.value].pit) {
      report_.pending_at_end += entry.requests.size();
    }
  }
  report_.finalize();
}

Graph load_scenario_topology(const Scenario& scenario) {
  return load_topology_file(scenario.topology, LinkDefaults{scenario.link_delay, scenario.link_bandwidth});
}

MetricsReport run(const Scenario& scenario, const Graph& graph) {
  Simulator sim(scenario, graph);
  return sim.run();
}

MetricsReport run(const Scenario& scenario) { return run(scenario, load_scenario_topology(scenario)); }

}  // namespace ccnsim

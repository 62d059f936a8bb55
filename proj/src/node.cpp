#include "ccnsim/node.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

namespace ccnsim {

namespace {

constexpr auto kUnreachable = std::numeric_limits<std::uint32_t>::max();

bool contains_id(std::span<const RouterId> ids, RouterId id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

std::uint32_t provider_cost(const RouterState& state, RouterId provider) {
  if (provider == state.id) {
    return 0;
  }
  return state.spt.cost(provider).value_or(kUnreachable);
}

Action forward_interest(const InterestPacket& interest, RouterId face) {
  Action a;
  a.kind = ActionKind::ForwardInterest;
  a.packet = interest;
  a.out_interface = face;
  return a;
}

Action drop(DropReason reason) {
  Action a;
  a.kind = ActionKind::Drop;
  a.reason = reason;
  return a;
}

Action arm_timeout(const PitEntry& entry) {
  Action a;
  a.kind = ActionKind::ArmTimeout;
  a.timer_name = entry.name;
  a.deadline = entry.deadline;
  a.generation = entry.generation;
  return a;
}

/// Emits the data toward every face in `entry.incoming` except `skip`.
void fan_out(const PitEntry& entry, const DataPacket& data, std::optional<RouterId> skip,
             std::vector<Action>& actions) {
  for (auto face : entry.incoming) {
    if (skip && face == *skip) {
      continue;
    }
    Action a;
    a.packet = data;
    a.out_interface = face;
    if (face == kLocalFace) {
      a.kind = ActionKind::DeliverLocal;
      a.requests = entry.requests;
      a.expected_provider = entry.expected_provider;
    } else {
      a.kind = ActionKind::ForwardData;
    }
    actions.push_back(std::move(a));
  }
}

/// Chooses the outgoing faces for a pending entry and records them.
std::vector<RouterId> choose_faces(RouterState& state, PitEntry& entry, std::optional<RouterId> in_iface,
                                   double now) {
  std::vector<RouterId> faces;
  if (state.forwarding == Forwarding::BestRoute) {
    const auto choice = select_best_provider(state, entry.name, entry.tried_providers, in_iface);
    if (choice) {
      faces.push_back(choice->interface);
      state.fib.touch(entry.name, now);
      if (entry.is_initial()) {
        entry.expected_provider = choice->provider;
      }
    }
  }
  if (faces.empty()) {
    if (entry.is_initial()) {
      entry.expected_provider.reset();
    }
    for (auto peer : state.neighbors) {
      if (!in_iface || peer != *in_iface) {
        faces.push_back(peer);
      }
    }
  }
  entry.outgoing = faces;
  return faces;
}

}  // namespace

std::size_t uniform_index(Rng& rng, std::size_t n) {
  if (n <= 1) {
    return 0;
  }
  const std::uint64_t bound = n;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw = 0;
  do {
    draw = rng();
  } while (draw >= limit);
  return static_cast<std::size_t>(draw % bound);
}

// --- ContentStore -----------------------------------------------------------

std::optional<ContentName> ContentStore::insert(const ContentName& name, std::uint32_t size, double now) {
  if (auto it = items_.find(name); it != items_.end()) {
    it->second.item = Item{size, now, now};
    order_.splice(order_.end(), order_, it->second.pos);
    return std::nullopt;
  }
  if (capacity_ == 0) {
    return std::nullopt;
  }
  std::optional<ContentName> evicted;
  if (items_.size() >= capacity_) {
    evicted = order_.front();
    items_.erase(order_.front());
    order_.pop_front();
  }
  order_.push_back(name);
  items_.emplace(name, Slot{Item{size, now, now}, std::prev(order_.end())});
  return evicted;
}

const ContentStore::Item* ContentStore::find(const ContentName& name) const {
  const auto it = items_.find(name);
  return it == items_.end() ? nullptr : &it->second.item;
}

bool ContentStore::touch(const ContentName& name, double now) {
  const auto it = items_.find(name);
  if (it == items_.end()) {
    return false;
  }
  it->second.item.last_access = now;
  if (policy_ == CachePolicy::Lru) {
    order_.splice(order_.end(), order_, it->second.pos);
  }
  return true;
}

bool ContentStore::erase(const ContentName& name) {
  const auto it = items_.find(name);
  if (it == items_.end()) {
    return false;
  }
  order_.erase(it->second.pos);
  items_.erase(it);
  return true;
}

std::optional<ContentName> cs_insert(ContentStore& cs, const ContentName& name, std::uint32_t size, double now) {
  return cs.insert(name, size, now);
}

// --- PIT ----------------------------------------------------------------------

bool PitEntry::has_incoming(RouterId face) const {
  return std::find(incoming.begin(), incoming.end(), face) != incoming.end();
}

bool PitEntry::has_seen(std::uint64_t token) const {
  return std::find(seen_nonces.begin(), seen_nonces.end(), token) != seen_nonces.end();
}

// --- FIB ------------------------------------------------------------------------

const FibEntry* FibTable::find(const ContentName& name) const {
  const auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second.entry;
}

FibEntry* FibTable::find(const ContentName& name) {
  const auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second.entry;
}

void FibTable::touch(const ContentName& name, double now) {
  const auto it = entries_.find(name);
  if (it == entries_.end()) {
    return;
  }
  it->second.entry.last_access = now;
  lru_.splice(lru_.end(), lru_, it->second.lru);
}

std::optional<ContentName> FibTable::insert(FibEntry entry) {
  std::optional<ContentName> evicted;
  if (capacity_ != 0 && entries_.size() >= capacity_) {
    evicted = lru_.front();
    entries_.erase(lru_.front());
    lru_.pop_front();
  }
  lru_.push_back(entry.name);
  auto key = entry.name;
  entries_.emplace(std::move(key), Slot{std::move(entry), std::prev(lru_.end())});
  return evicted;
}

bool FibTable::erase(const ContentName& name) {
  const auto it = entries_.find(name);
  if (it == entries_.end()) {
    return false;
  }
  lru_.erase(it->second.lru);
  entries_.erase(it);
  return true;
}

const FibEntry* FibTable::next_after(const std::optional<ContentName>& name) const {
  if (entries_.empty()) {
    return nullptr;
  }
  auto it = name ? entries_.upper_bound(*name) : entries_.begin();
  if (it == entries_.end()) {
    it = entries_.begin();
  }
  return &it->second.entry;
}

// --- Router -----------------------------------------------------------------------

void DeadNonceList::add(std::uint64_t token, double now) {
  while (!order_.empty() && order_.front().first + lifetime_ < now) {
    tokens_.erase(order_.front().second);
    order_.pop_front();
  }
  if (tokens_.insert(token).second) {
    order_.emplace_back(now, token);
  }
}

bool RouterState::produces(const ContentName& name) const {
  return std::find(produced.begin(), produced.end(), name.prefix) != produced.end();
}

std::optional<ContentName> select_probe(RouterState& state, Rng& rng, const std::optional<ContentName>& exclude) {
  auto excluded = [&](const ContentName& n) { return exclude && n == *exclude; };

  switch (state.probe_strategy) {
    case ProbeStrategy::None:
      return std::nullopt;

    case ProbeStrategy::PitPopular: {
      const PitEntry* best = nullptr;
      for (const auto& [name, entry] : state.pit) {
        if (excluded(name)) {
          continue;
        }
        if (!best || std::tie(entry.arrival_count, best->deadline, best->name) >
                         std::tie(best->arrival_count, entry.deadline, entry.name)) {
          best = &entry;
        }
      }
      return best ? std::optional{best->name} : std::nullopt;
    }

    case ProbeStrategy::FibMaxCost: {
      const FibEntry* best = nullptr;
      std::uint32_t best_cost = 0;
      for (const auto& [name, slot] : state.fib) {
        if (excluded(name)) {
          continue;
        }
        const auto& entry = slot.entry;
        std::uint32_t cost = kUnreachable;
        for (auto p : entry.providers) {
          cost = std::min(cost, provider_cost(state, p));
        }
        // Highest cost first, then least recently updated.
        if (!best || cost > best_cost ||
            (cost == best_cost && std::tie(entry.last_update, entry.name) < std::tie(best->last_update, best->name))) {
          best = &entry;
          best_cost = cost;
        }
      }
      return best ? std::optional{best->name} : std::nullopt;
    }

    case ProbeStrategy::Sequential: {
      const FibEntry* next = state.fib.next_after(state.seq_cursor);
      if (next && excluded(next->name)) {
        if (state.fib.size() == 1) {
          return std::nullopt;
        }
        next = state.fib.next_after(next->name);
      }
      if (!next) {
        return std::nullopt;
      }
      state.seq_cursor = next->name;
      return next->name;
    }

    case ProbeStrategy::Random: {
      std::vector<ContentName> pool;
      pool.reserve(state.pit.size() + state.fib.size());
      for (const auto& [name, entry] : state.pit) {
        if (!excluded(name)) {
          pool.push_back(name);
        }
      }
      for (const auto& [name, slot] : state.fib) {
        if (!excluded(name) && !state.pit.contains(name)) {
          pool.push_back(name);
        }
      }
      if (pool.empty()) {
        return std::nullopt;
      }
      std::sort(pool.begin(), pool.end());
      return pool[uniform_index(rng, pool.size())];
    }
  }
  return std::nullopt;
}

std::optional<ProviderChoice> select_best_provider(const RouterState& state, const ContentName& name,
                                                   std::span<const RouterId> excluded,
                                                   std::optional<RouterId> avoid_interface) {
  const auto* entry = state.fib.find(name);
  if (!entry) {
    return std::nullopt;
  }
  std::optional<ProviderChoice> best;
  std::uint32_t best_cost = kUnreachable;
  for (auto provider : entry->providers) {
    if (provider == state.id || contains_id(excluded, provider)) {
      continue;
    }
    const auto* route = state.spt.find(provider);
    if (!route) {
      continue;
    }
    if (avoid_interface && route->outgoing_interface == *avoid_interface) {
      continue;
    }
    if (!best || route->cost < best_cost || (route->cost == best_cost && provider < best->provider)) {
      best = ProviderChoice{provider, route->outgoing_interface};
      best_cost = route->cost;
    }
  }
  return best;
}

std::vector<Action> on_interest(RouterState& state, InterestPacket interest, RouterId in_iface, double now,
                                Rng& rng) {
  const bool from_consumer = in_iface == kLocalFace;

  // PIT check comes first.
  if (auto it = state.pit.find(interest.name); it != state.pit.end()) {
    auto& entry = it->second;
    if (entry.has_seen(interest.token)) {
      return {drop(DropReason::DuplicateNonce)};
    }
    if (!entry.has_incoming(in_iface)) {
      entry.incoming.push_back(in_iface);
    }
    entry.seen_nonces.push_back(interest.token);
    ++entry.arrival_count;
    if (from_consumer) {
      entry.requests.push_back(PendingRequest{interest.request_id, interest.issue_time});
    }
    state.dead_nonces.add(interest.token, now);
    return {drop(DropReason::Aggregated)};
  }
  if (state.dead_nonces.contains(interest.token)) {
    return {drop(DropReason::DuplicateNonce)};
  }
  state.dead_nonces.add(interest.token, now);

  PitEntry fresh;
  fresh.name = interest.name;
  fresh.incoming.push_back(in_iface);
  fresh.seen_nonces.push_back(interest.token);
  fresh.created = now;
  fresh.deadline = now + state.pit_timeout;
  fresh.arrival_count = 1;
  if (from_consumer) {
    fresh.requests.push_back(PendingRequest{interest.request_id, interest.issue_time});
  }
  auto& entry = state.pit.emplace(interest.name, std::move(fresh)).first->second;

  // H role: answer from the store, carrying the probe result back.
  if (state.has_content(interest.name)) {
    if (interest.probe && state.has_content(*interest.probe)) {
      interest.probe_response.add(state.id);
    }
    DataPacket data;
    data.name = interest.name;
    const auto* item = state.cs.find(interest.name);
    data.payload_size = (item && !state.produces(interest.name)) ? item->size : state.payload_size;
    data.probe = interest.probe;
    data.probe_response = interest.probe_response;
    data.provider_id = state.id;
    state.cs.touch(interest.name, now);

    std::vector<Action> actions;
    fan_out(entry, data, std::nullopt, actions);
    state.pit.erase(interest.name);
    return actions;
  }

  // M role.
  if (interest.probe) {
    if (state.has_content(*interest.probe)) {
      interest.probe_response.add(state.id);
    }
  } else if (from_consumer) {
    interest.probe = select_probe(state, rng, interest.name);
  }

  const std::optional<RouterId> came_from = from_consumer ? std::nullopt : std::optional{in_iface};
  const auto faces = choose_faces(state, entry, came_from, now);
  std::vector<Action> actions;
  if (faces.empty()) {
    actions.push_back(drop(DropReason::NoRoute));
  }
  for (auto face : faces) {
    actions.push_back(forward_interest(interest, face));
  }
  actions.push_back(arm_timeout(entry));
  return actions;
}

std::vector<Action> on_data(RouterState& state, const DataPacket& data, RouterId in_iface, double now) {
  if (data.probe && !data.probe_response.empty()) {
    fib_update(state, *data.probe, data.probe_response.providers(), now);
  }
  const auto it = state.pit.find(data.name);
  if (it == state.pit.end()) {
    return {drop(DropReason::Unsolicited)};
  }
  if (!state.has_content(data.name)) {
    cs_insert(state.cs, data.name, data.payload_size, now);
  }
  const RouterId provider = data.provider_id;
  fib_update(state, data.name, std::span<const RouterId>(&provider, 1), now);

  std::vector<Action> actions;
  fan_out(it->second, data, in_iface, actions);
  state.pit.erase(it);
  return actions;
}

void fib_update(RouterState& state, const ContentName& name, std::span<const RouterId> providers, double now) {
  std::vector<RouterId> incoming;
  for (auto p : providers) {
    if (p != state.id && !contains_id(incoming, p)) {
      incoming.push_back(p);
    }
  }
  if (incoming.empty()) {
    return;
  }

  auto trim = [&](std::vector<RouterId>& list) {
    while (list.size() > ProbeResponse::kCapacity) {
      auto farthest = list.begin();
      for (auto it = list.begin(); it != list.end(); ++it) {
        const auto c = provider_cost(state, *it);
        const auto fc = provider_cost(state, *farthest);
        if (c > fc || (c == fc && *it > *farthest)) {
          farthest = it;
        }
      }
      list.erase(farthest);
    }
  };

  if (auto* entry = state.fib.find(name)) {
    for (auto p : incoming) {
      if (!contains_id(entry->providers, p)) {
        entry->providers.push_back(p);
      }
    }
    trim(entry->providers);
    entry->last_update = now;
    state.fib.touch(name, now);
    return;
  }
  trim(incoming);
  state.fib.insert(FibEntry{name, std::move(incoming), now, now});
}

TimeoutResult on_timeout(RouterState& state, const ContentName& name, std::uint64_t generation, double now,
                         std::uint64_t fresh_token, Rng& rng) {
  TimeoutResult result;
  const auto it = state.pit.find(name);
  // A timer left behind by an earlier entry for the same name fires before
  // the current entry's deadline.
  if (it == state.pit.end() || it->second.generation != generation || it->second.deadline > now) {
    return result;
  }
  result.expired = true;
  auto& entry = it->second;

  if (!entry.is_initial()) {
    state.pit.erase(it);
    return result;
  }

  if (entry.expected_provider && !contains_id(entry.tried_providers, *entry.expected_provider)) {
    entry.tried_providers.push_back(*entry.expected_provider);
  }
  entry.expected_provider.reset();

  std::vector<RouterId> faces;
  if (state.forwarding == Forwarding::BestRoute) {
    if (const auto choice = select_best_provider(state, name, entry.tried_providers)) {
      faces.push_back(choice->interface);
      entry.expected_provider = choice->provider;
      state.fib.touch(name, now);
    }
  }
  if (faces.empty()) {
    if (entry.broadcast_fallback_used) {
      result.abandoned = std::move(entry.requests);
      state.pit.erase(it);
      return result;
    }
    entry.broadcast_fallback_used = true;
    faces = state.neighbors;
  }
  if (faces.empty()) {
    result.abandoned = std::move(entry.requests);
    state.pit.erase(it);
    return result;
  }

  InterestPacket interest;
  interest.name = name;
  interest.token = fresh_token;
  interest.nonce = static_cast<std::uint8_t>(fresh_token);
  interest.issue_time = now;
  interest.probe = select_probe(state, rng, name);

  entry.outgoing = faces;
  entry.seen_nonces.push_back(fresh_token);
  state.dead_nonces.add(fresh_token, now);
  entry.deadline = now + state.pit_timeout;
  ++entry.generation;

  for (auto face : faces) {
    result.actions.push_back(forward_interest(interest, face));
  }
  result.actions.push_back(arm_timeout(entry));
  result.retransmitted = true;
  return result;
}

}  // namespace ccnsim

#ifndef CCNSIM_NODE_HPP
#define CCNSIM_NODE_HPP

#include <cstdint>
#include <deque>
#include <list>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "ccnsim/model.hpp"
#include "ccnsim/topology.hpp"

namespace ccnsim {

enum class ProbeStrategy { None, PitPopular, FibMaxCost, Sequential, Random };
enum class Forwarding { BestRoute, Broadcast };
enum class CachePolicy { Fifo, Lru };

using Rng = std::mt19937_64;

/// Unbiased draw in [0, n).
std::size_t uniform_index(Rng& rng, std::size_t n);

// ---------------------------------------------------------------------------
// Content Store

/// Bounded content cache with FIFO or LRU replacement. The front of the
/// internal order list is always the next eviction victim.
class ContentStore {
 public:
  struct Item {
    std::uint32_t size = 0;
    double insert_time = 0.0;
    double last_access = 0.0;
  };

  ContentStore(std::size_t capacity = 0, CachePolicy policy = CachePolicy::Fifo)
      : capacity_(capacity), policy_(policy) {}

  /// Stores `name`. Re-inserting refreshes timestamps without evicting.
  /// Returns the evicted name when the store was full.
  std::optional<ContentName> insert(const ContentName& name, std::uint32_t size, double now);
  bool contains(const ContentName& name) const { return items_.contains(name); }
  const Item* find(const ContentName& name) const;
  /// Records a cache hit. Under LRU this moves the item to the back.
  bool touch(const ContentName& name, double now);
  bool erase(const ContentName& name);

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  CachePolicy policy() const { return policy_; }
  /// Names in eviction order (next victim first).
  std::vector<ContentName> names() const { return {order_.begin(), order_.end()}; }

 private:
  struct Slot {
    Item item;
    std::list<ContentName>::iterator pos;
  };
  std::size_t capacity_;
  CachePolicy policy_;
  std::list<ContentName> order_;
  std::unordered_map<ContentName, Slot, ContentNameHash> items_;
};

// ---------------------------------------------------------------------------
// PIT

struct PendingRequest {
  std::uint64_t id = 0;
  double issue_time = 0.0;
};

struct PitEntry {
  ContentName name;
  std::vector<RouterId> incoming;
  std::vector<RouterId> outgoing;
  std::vector<std::uint64_t> seen_nonces;
  double created = 0.0;
  double deadline = 0.0;
  std::uint32_t arrival_count = 0;
  /// Consumer requests waiting on this entry; non-empty only at I routers.
  std::vector<PendingRequest> requests;
  std::vector<RouterId> tried_providers;
  std::optional<RouterId> expected_provider;
  bool broadcast_fallback_used = false;
  /// Bumped on every deadline refresh so stale timer events can be ignored.
  std::uint64_t generation = 0;

  bool is_initial() const { return !requests.empty(); }
  bool has_incoming(RouterId face) const;
  bool has_seen(std::uint64_t token) const;
};

// ---------------------------------------------------------------------------
// FIB

struct FibEntry {
  ContentName name;
  std::vector<RouterId> providers;
  double last_update = 0.0;
  double last_access = 0.0;
};

/// Name -> provider list with LRU table replacement. Entries iterate in name
/// order, which the sequential probe cursor relies on.
class FibTable {
 public:
  explicit FibTable(std::size_t capacity = 0) : capacity_(capacity) {}

  const FibEntry* find(const ContentName& name) const;
  FibEntry* find(const ContentName& name);
  void touch(const ContentName& name, double now);
  /// Inserts a new entry, evicting the least recently used one when full.
  std::optional<ContentName> insert(FibEntry entry);
  bool erase(const ContentName& name);

  std::size_t size() const { return entries_.size(); }
  /// 0 means unbounded.
  std::size_t capacity() const { return capacity_; }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  /// First entry with name strictly greater than `name`, wrapping to the start.
  const FibEntry* next_after(const std::optional<ContentName>& name) const;

 private:
  struct Slot {
    FibEntry entry;
    std::list<ContentName>::iterator lru;
  };
  std::size_t capacity_;
  std::map<ContentName, Slot> entries_;
  std::list<ContentName> lru_;
};

// ---------------------------------------------------------------------------
// Router

/// Tokens seen recently, kept after PIT entries are gone so that looping
/// copies of an already satisfied interest are still recognised.
class DeadNonceList {
 public:
  explicit DeadNonceList(double lifetime = 0.0) : lifetime_(lifetime) {}
  void add(std::uint64_t token, double now);
  bool contains(std::uint64_t token) const { return tokens_.contains(token); }
  std::size_t size() const { return tokens_.size(); }

 private:
  double lifetime_;
  std::deque<std::pair<double, std::uint64_t>> order_;
  std::unordered_set<std::uint64_t> tokens_;
};

struct RouterState {
  RouterId id;
  ContentStore cs;
  std::unordered_map<ContentName, PitEntry, ContentNameHash> pit;
  FibTable fib{0};
  SpTable spt;
  /// Live neighbors, ascending.
  std::vector<RouterId> neighbors;
  /// Name prefixes this router originates; always served, never evicted.
  std::vector<std::string> produced;
  ProbeStrategy probe_strategy = ProbeStrategy::None;
  Forwarding forwarding = Forwarding::BestRoute;
  double pit_timeout = 0.5;
  std::uint32_t payload_size = wire::kDefaultPayload;
  std::optional<ContentName> seq_cursor;
  DeadNonceList dead_nonces{0.0};

  bool produces(const ContentName& name) const;
  bool has_content(const ContentName& name) const { return produces(name) || cs.contains(name); }
};

enum class ActionKind { ForwardInterest, ForwardData, DeliverLocal, Drop, ArmTimeout };
enum class DropReason { None, Aggregated, DuplicateNonce, NoRoute, Unsolicited };

/// What a handler asks the engine to do next.
struct Action {
  ActionKind kind = ActionKind::Drop;
  std::variant<std::monostate, InterestPacket, DataPacket> packet;
  RouterId out_interface{};
  DropReason reason = DropReason::None;

  // DeliverLocal: the consumer requests satisfied and the provider the
  // I router expected when it forwarded.
  std::vector<PendingRequest> requests;
  std::optional<RouterId> expected_provider;

  // ArmTimeout
  ContentName timer_name;
  double deadline = 0.0;
  std::uint64_t generation = 0;
};

/// Chooses the probe an I router attaches. `exclude` is the name being requested.
std::optional<ContentName> select_probe(RouterState& state, Rng& rng,
                                        const std::optional<ContentName>& exclude = std::nullopt);

struct ProviderChoice {
  RouterId provider;
  RouterId interface;
};

/// Cheapest reachable provider in FIB(name) not in `excluded`; ties go to the
/// lowest RouterId. Providers whose first hop is `avoid_interface` are skipped.
std::optional<ProviderChoice> select_best_provider(const RouterState& state, const ContentName& name,
                                                   std::span<const RouterId> excluded = {},
                                                   std::optional<RouterId> avoid_interface = std::nullopt);

std::vector<Action> on_interest(RouterState& state, InterestPacket interest, RouterId in_iface, double now,
                                Rng& rng);

std::vector<Action> on_data(RouterState& state, const DataPacket& data, RouterId in_iface, double now);

std::optional<ContentName> cs_insert(ContentStore& cs, const ContentName& name, std::uint32_t size, double now);

/// Merges `providers` into FIB(name), keeping at most five, nearest first to survive.
void fib_update(RouterState& state, const ContentName& name, std::span<const RouterId> providers, double now);

struct TimeoutResult {
  /// False when the timer was stale (entry gone or refreshed).
  bool expired = false;
  bool retransmitted = false;
  std::vector<Action> actions;
  /// Requests given up on after every provider and the broadcast fallback failed.
  std::vector<PendingRequest> abandoned;
};

TimeoutResult on_timeout(RouterState& state, const ContentName& name, std::uint64_t generation, double now,
                         std::uint64_t fresh_token, Rng& rng);

}  // namespace ccnsim

#endif  // CCNSIM_NODE_HPP

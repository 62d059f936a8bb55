#ifndef CCNSIM_TOPOLOGY_HPP
#define CCNSIM_TOPOLOGY_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ccnsim/model.hpp"

namespace ccnsim {

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum Role : std::uint8_t {
  kRoleNone = 0,
  kRoleProducer = 1 << 0,
  kRoleConsumer = 1 << 1,
  kRoleRouter = 1 << 2,
};

/// Bandwidth of 0 means the link has no serialization delay.
struct Link {
  RouterId a;
  RouterId b;
  double delay_s = 1.0;
  double bandwidth_bps = 0.0;
};

/// Defaults applied to edges that omit delay or bandwidth.
struct LinkDefaults {
  double delay_s = 1.0;
  double bandwidth_bps = 0.0;
};

/// Static undirected topology. Router IDs are dense indices that stay stable
/// when routers are removed; removed routers keep their slot but are absent.
class Graph {
 public:
  RouterId add_node(std::string name, std::uint8_t roles);
  /// Throws TopologyError on self-loops, parallel edges, or unknown endpoints.
  void add_edge(RouterId a, RouterId b, double delay_s, double bandwidth_bps);

  std::size_t slot_count() const { return names_.size(); }
  /// N_R: routers currently present.
  std::size_t node_count() const;
  /// N_E: edges between present routers.
  std::size_t edge_count() const;

  bool contains(RouterId id) const { return id.value < present_.size() && present_[id.value]; }
  std::vector<RouterId> nodes() const;
  std::vector<Link> edges() const;

  const std::string& name(RouterId id) const { return names_.at(id.value); }
  std::optional<RouterId> find(std::string_view name) const;
  std::uint8_t roles(RouterId id) const { return roles_.at(id.value); }
  bool has_role(RouterId id, Role role) const { return (roles(id) & role) != 0; }
  std::vector<RouterId> nodes_with_role(Role role) const;
  /// Present routers that are neither producers nor consumers.
  std::vector<RouterId> pure_routers() const;

  /// Present neighbors, ascending by id.
  const std::vector<RouterId>& neighbors(RouterId id) const { return adjacency_.at(id.value); }
  const Link* link(RouterId a, RouterId b) const;

  void remove_node(RouterId id);

 private:
  std::vector<std::string> names_;
  std::vector<std::uint8_t> roles_;
  std::vector<bool> present_;
  std::vector<std::vector<RouterId>> adjacency_;
  std::unordered_map<std::string, RouterId> by_name_;
  std::unordered_map<std::uint64_t, Link> links_;
};

/// Parses the line-oriented topology format:
///   node <name> [producer|consumer|router]...
///   edge <a> <b> [delay_s] [bandwidth_bps|inf]
/// `#` starts a comment.
Graph load_topology(std::string_view source, const LinkDefaults& defaults = {});
Graph load_topology_file(const std::string& path, const LinkDefaults& defaults = {});

struct SptEntry {
  RouterId destination;
  std::uint32_t cost = 0;
  RouterId outgoing_interface;
};

/// Shortest Path Table of one router: hop cost and first hop to every other
/// reachable router. No self entry.
class SpTable {
 public:
  SpTable() = default;
  SpTable(RouterId owner, std::size_t slots) : owner_(owner), entries_(slots) {}

  RouterId owner() const { return owner_; }
  const SptEntry* find(RouterId destination) const;
  std::optional<std::uint32_t> cost(RouterId destination) const;
  std::size_t size() const { return count_; }
  std::vector<SptEntry> entries() const;

  void set(const SptEntry& entry);

 private:
  RouterId owner_{};
  std::vector<std::optional<SptEntry>> entries_;
  std::size_t count_ = 0;
};

/// BFS from `source`. Among equal-cost first hops the lowest RouterId wins.
SpTable build_spt(const Graph& graph, RouterId source);

/// One table per slot (absent routers get an empty table). Serial reference.
std::vector<SpTable> build_all_spt_serial(const Graph& graph);
/// Same result as the serial version, sources split across OpenMP threads.
std::vector<SpTable> build_all_spt(const Graph& graph);

/// Copy of `graph` with `victim` and its incident edges removed.
Graph apply_failure(const Graph& graph, RouterId victim);

}  // namespace ccnsim

#endif  // CCNSIM_TOPOLOGY_HPP

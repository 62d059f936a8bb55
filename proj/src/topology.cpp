#include "ccnsim/topology.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ccnsim {

namespace {

std::uint64_t edge_key(RouterId a, RouterId b) {
  if (b < a) {
    std::swap(a, b);
  }
  return (static_cast<std::uint64_t>(a.value) << 32) | b.value;
}

void insert_sorted(std::vector<RouterId>& list, RouterId id) {
  list.insert(std::lower_bound(list.begin(), list.end(), id), id);
}

std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> words;
  std::istringstream in{std::string(line)};
  std::string word;
  while (in >> word) {
    words.push_back(word);
  }
  return words;
}

double parse_number(const std::string& text, std::size_t line_no, const char* what) {
  if (text == "inf" || text == "unlimited") {
    return 0.0;
  }
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value < 0.0) {
    throw TopologyError("line " + std::to_string(line_no) + ": bad " + what + " '" + text + "'");
  }
  return value;
}

}  // namespace

RouterId Graph::add_node(std::string name, std::uint8_t roles) {
  if (by_name_.contains(name)) {
    throw TopologyError("duplicate node '" + name + "'");
  }
  const RouterId id{static_cast<std::uint32_t>(names_.size())};
  by_name_.emplace(name, id);
  names_.push_back(std::move(name));
  roles_.push_back(roles == kRoleNone ? static_cast<std::uint8_t>(kRoleRouter) : roles);
  present_.push_back(true);
  adjacency_.emplace_back();
  return id;
}

void Graph::add_edge(RouterId a, RouterId b, double delay_s, double bandwidth_bps) {
  if (!contains(a) || !contains(b)) {
    throw TopologyError("edge references an unknown node");
  }
  if (a == b) {
    throw TopologyError("self-loop on '" + name(a) + "'");
  }
  const auto key = edge_key(a, b);
  if (links_.contains(key)) {
    throw TopologyError("duplicate edge " + name(a) + " - " + name(b));
  }
  links_.emplace(key, Link{std::min(a, b), std::max(a, b), delay_s, bandwidth_bps});
  insert_sorted(adjacency_[a.value], b);
  insert_sorted(adjacency_[b.value], a);
}

std::size_t Graph::node_count() const {
  return static_cast<std::size_t>(std::count(present_.begin(), present_.end(), true));
}

std::size_t Graph::edge_count() const { return links_.size(); }

std::vector<RouterId> Graph::nodes() const {
  std::vector<RouterId> out;
  for (std::uint32_t i = 0; i < present_.size(); ++i) {
    if (present_[i]) {
      out.push_back(RouterId{i});
    }
  }
  return out;
}

std::vector<Link> Graph::edges() const {
  std::vector<Link> out;
  out.reserve(links_.size());
  for (const auto& [key, link] : links_) {
    out.push_back(link);
  }
  std::sort(out.begin(), out.end(), [](const Link& x, const Link& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  return out;
}

std::optional<RouterId> Graph::find(std::string_view name) const {
  const auto it = by_name_.find(std::string(name));
  if (it == by_name_.end() || !contains(it->second)) {
    return std::nullopt;
  }
  return it->second;
}

std::vector<RouterId> Graph::nodes_with_role(Role role) const {
  std::vector<RouterId> out;
  for (auto id : nodes()) {
    if (has_role(id, role)) {
      out.push_back(id);
    }
  }
  return out;
}

std::vector<RouterId> Graph::pure_routers() const {
  std::vector<RouterId> out;
  for (auto id : nodes()) {
    if (!has_role(id, kRoleProducer) && !has_role(id, kRoleConsumer)) {
      out.push_back(id);
    }
  }
  return out;
}

const Link* Graph::link(RouterId a, RouterId b) const {
  const auto it = links_.find(edge_key(a, b));
  return it == links_.end() ? nullptr : &it->second;
}

void Graph::remove_node(RouterId id) {
  if (!contains(id)) {
    throw TopologyError("cannot remove absent router " + std::to_string(id.value));
  }
  for (auto peer : adjacency_[id.value]) {
    auto& list = adjacency_[peer.value];
    list.erase(std::remove(list.begin(), list.end(), id), list.end());
    links_.erase(edge_key(id, peer));
  }
  adjacency_[id.value].clear();
  present_[id.value] = false;
}

Graph load_topology(std::string_view source, const LinkDefaults& defaults) {
  Graph graph;
  std::istringstream in{std::string(source)};
  std::string raw;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) -> TopologyError {
    return TopologyError("line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const auto words = split_words(line);
    if (words.empty()) {
      continue;
    }
    if (words[0] == "node") {
      if (words.size() < 2) {
        throw fail("node needs a name");
      }
      std::uint8_t roles = kRoleNone;
      for (std::size_t i = 2; i < words.size(); ++i) {
        if (words[i] == "producer") {
          roles |= kRoleProducer;
        } else if (words[i] == "consumer") {
          roles |= kRoleConsumer;
        } else if (words[i] == "router") {
          roles |= kRoleRouter;
        } else {
          throw fail("unknown role '" + words[i] + "'");
        }
      }
      if (graph.find(words[1])) {
        throw fail("duplicate node '" + words[1] + "'");
      }
      graph.add_node(words[1], roles);
    } else if (words[0] == "edge") {
      if (words.size() < 3 || words.size() > 5) {
        throw fail("expected 'edge <a> <b> [delay_s] [bandwidth_bps]'");
      }
      const auto a = graph.find(words[1]);
      const auto b = graph.find(words[2]);
      if (!a) {
        throw fail("unknown node '" + words[1] + "'");
      }
      if (!b) {
        throw fail("unknown node '" + words[2] + "'");
      }
      const double delay = words.size() > 3 ? parse_number(words[3], line_no, "delay") : defaults.delay_s;
      const double bandwidth =
          words.size() > 4 ? parse_number(words[4], line_no, "bandwidth") : defaults.bandwidth_bps;
      if (*a == *b) {
        throw fail("self-loop on '" + words[1] + "'");
      }
      if (graph.link(*a, *b)) {
        throw fail("duplicate edge " + words[1] + " - " + words[2]);
      }
      graph.add_edge(*a, *b, delay, bandwidth);
    } else {
      throw fail("unknown record '" + words[0] + "'");
    }
  }
  return graph;
}

Graph load_topology_file(const std::string& path, const LinkDefaults& defaults) {
  std::ifstream in(path);
  if (!in) {
    throw TopologyError("cannot open topology file '" + path + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return load_topology(buffer.str(), defaults);
  } catch (const TopologyError& e) {
    throw TopologyError(path + ": " + e.what());
  }
}

const SptEntry* SpTable::find(RouterId destination) const {
  if (destination.value >= entries_.size() || !entries_[destination.value]) {
    return nullptr;
  }
  return &*entries_[destination.value];
}

std::optional<std::uint32_t> SpTable::cost(RouterId destination) const {
  const auto* entry = find(destination);
  if (!entry) {
    return std::nullopt;
  }
  return entry->cost;
}

std::vector<SptEntry> SpTable::entries() const {
  std::vector<SptEntry> out;
  out.reserve(count_);
  for (const auto& slot : entries_) {
    if (slot) {
      out.push_back(*slot);
    }
  }
  return out;
}

void SpTable::set(const SptEntry& entry) {
  if (entry.destination.value >= entries_.size()) {
    entries_.resize(entry.destination.value + 1);
  }
  auto& slot = entries_[entry.destination.value];
  if (!slot) {
    ++count_;
  }
  slot = entry;
}

SpTable build_spt(const Graph& graph, RouterId source) {
  if (!graph.contains(source)) {
    throw TopologyError("build_spt: source " + std::to_string(source.value) + " not in graph");
  }
  constexpr auto kUnseen = std::numeric_limits<std::uint32_t>::max();
  const std::size_t slots = graph.slot_count();
  std::vector<std::uint32_t> dist(slots, kUnseen);
  std::vector<RouterId> first_hop(slots);
  std::vector<RouterId> order;
  order.reserve(slots);

  std::deque<RouterId> frontier{source};
  dist[source.value] = 0;
  while (!frontier.empty()) {
    const auto u = frontier.front();
    frontier.pop_front();
    order.push_back(u);
    for (auto v : graph.neighbors(u)) {
      if (dist[v.value] == kUnseen) {
        dist[v.value] = dist[u.value] + 1;
        frontier.push_back(v);
      }
    }
  }

  // BFS order guarantees every predecessor is settled first.
  SpTable table(source, slots);
  for (auto v : order) {
    if (v == source) {
      continue;
    }
    if (dist[v.value] == 1) {
      first_hop[v.value] = v;
    } else {
      RouterId best{kUnseen};
      for (auto u : graph.neighbors(v)) {
        if (dist[u.value] + 1 == dist[v.value] && u != source) {
          best = std::min(best, first_hop[u.value]);
        }
      }
      first_hop[v.value] = best;
    }
    table.set(SptEntry{v, dist[v.value], first_hop[v.value]});
  }
  return table;
}

std::vector<SpTable> build_all_spt_serial(const Graph& graph) {
  std::vector<SpTable> tables(graph.slot_count());
  for (std::uint32_t i = 0; i < tables.size(); ++i) {
    if (graph.contains(RouterId{i})) {
      tables[i] = build_spt(graph, RouterId{i});
    }
  }
  return tables;
}

std::vector<SpTable> build_all_spt(const Graph& graph) {
  const auto slots = static_cast<std::int64_t>(graph.slot_count());
  std::vector<SpTable> tables(static_cast<std::size_t>(slots));
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < slots; ++i) {
    const RouterId id{static_cast<std::uint32_t>(i)};
    if (graph.contains(id)) {
      tables[static_cast<std::size_t>(i)] = build_spt(graph, id);
    }
  }
  return tables;
}

Graph apply_failure(const Graph& graph, RouterId victim) {
  if (!graph.contains(victim)) {
    throw TopologyError("apply_failure: router " + std::to_string(victim.value) + " not in graph");
  }
  Graph next = graph;
  next.remove_node(victim);
  return next;
}

}  // namespace ccnsim

#include <doctest.h>

#include "ccnsim/topology.hpp"
#include "support.hpp"

using namespace ccnsim;

namespace {

void check_against_oracle(const Graph& g) {
  const auto oracle = testsupport::floyd_warshall(g);
  for (auto src : g.nodes()) {
    const auto table = build_spt(g, src);
    for (auto dst : g.nodes()) {
      const auto expected = oracle[src.value][dst.value];
      if (src == dst) {
        CHECK(table.find(dst) == nullptr);
        continue;
      }
      const auto* e = table.find(dst);
      if (expected == testsupport::kInf) {
        CHECK(e == nullptr);
        continue;
      }
      REQUIRE(e != nullptr);
      CHECK(e->cost == expected);
      CHECK(g.link(src, e->outgoing_interface) != nullptr);
      CHECK(e->cost == 1 + oracle[e->outgoing_interface.value][dst.value]);
    }
  }
}

Graph path_graph(int n) {
  Graph g;
  for (int i = 0; i < n; ++i) {
    g.add_node(std::string(1, static_cast<char>('A' + i)), kRoleRouter);
  }
  for (int i = 0; i + 1 < n; ++i) {
    g.add_edge({static_cast<std::uint32_t>(i)}, {static_cast<std::uint32_t>(i + 1)}, 1.0, 0.0);
  }
  return g;
}

}  // namespace

TEST_CASE("topology parse: minimal graph and defaults") {
  const auto g = load_topology("node A\nnode B\nedge A B\n", LinkDefaults{0.25, 2048});
  CHECK(g.node_count() == 2);
  CHECK(g.edge_count() == 1);
  const auto* l = g.link(*g.find("A"), *g.find("B"));
  REQUIRE(l);
  CHECK(l->delay_s == 0.25);
  CHECK(l->bandwidth_bps == 2048);

  const auto explicit_link = load_topology("node A\nnode B\nedge A B 0.5 inf  # comment\n");
  CHECK(explicit_link.link({0}, {1})->delay_s == 0.5);
  CHECK(explicit_link.link({0}, {1})->bandwidth_bps == 0.0);
}

TEST_CASE("topology parse errors name the line") {
  auto message = [](const char* text) {
    try {
      load_topology(text);
    } catch (const TopologyError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("node A\nedge A Z\n").find("line 2") != std::string::npos);
  CHECK(message("node A\nnode B\nedge A B\nedge B A\n").find("line 4") != std::string::npos);
  CHECK(message("node A\nnode A\n").find("line 2") != std::string::npos);
  CHECK(message("link A B\n").find("line 1") != std::string::npos);
  CHECK(message("node A wizard\n").find("unknown role") != std::string::npos);
  CHECK(message("node A\nnode B\nedge A B fast\n").find("line 3") != std::string::npos);
  CHECK(message("node A\nedge A A\n").find("self-loop") != std::string::npos);
  CHECK_THROWS_AS(load_topology_file("/nonexistent/x.topo"), TopologyError);
}

TEST_CASE("shipped topologies have the published sizes") {
  const auto abilene = load_topology_file(testsupport::data_path("abilene.topo"));
  CHECK(abilene.node_count() == 12);
  CHECK(abilene.edge_count() == 15);
  CHECK(abilene.nodes_with_role(kRoleProducer).size() == 12);
  CHECK(abilene.nodes_with_role(kRoleConsumer).size() == 12);

  const auto sprint = load_topology_file(testsupport::data_path("sprint52.topo"));
  CHECK(sprint.node_count() == 52);
  CHECK(sprint.nodes_with_role(kRoleProducer).size() == 8);
  CHECK(sprint.nodes_with_role(kRoleConsumer).size() == 11);
  CHECK(sprint.pure_routers().size() == 33);
}

TEST_CASE("spt on a path graph") {
  const auto g = path_graph(4);
  const auto t = build_spt(g, {0});
  CHECK(t.size() == 3);
  CHECK(t.cost({1}) == 1u);
  CHECK(t.cost({2}) == 2u);
  CHECK(t.cost({3}) == 3u);
  for (std::uint32_t d = 1; d < 4; ++d) {
    CHECK(t.find({d})->outgoing_interface == RouterId{1});
  }
  CHECK_FALSE(t.cost({0}));
  CHECK_THROWS_AS(build_spt(g, {17}), TopologyError);
}

TEST_CASE("spt tie-break picks the lowest first hop") {
  // Square A-B-D, A-C-D: two equal paths from A to D.
  const auto g = load_topology("node A\nnode B\nnode C\nnode D\nedge A C\nedge A B\nedge B D\nedge C D\n");
  CHECK(build_spt(g, *g.find("A")).find(*g.find("D"))->outgoing_interface == *g.find("B"));
}

TEST_CASE("spt matches the all-pairs oracle on Abilene") {
  check_against_oracle(load_topology_file(testsupport::data_path("abilene.topo")));
}

TEST_CASE("spt matches the all-pairs oracle on random graphs") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = static_cast<std::size_t>(2 + trial % 19);
    check_against_oracle(testsupport::random_connected_graph(rng, n, n / 2));
  }
}

TEST_CASE("spt costs satisfy the triangle inequality") {
  std::mt19937_64 rng(7);
  const auto g = testsupport::random_connected_graph(rng, 16, 10);
  const auto tables = build_all_spt(g);
  auto cost = [&](RouterId a, RouterId b) { return a == b ? 0u : *tables[a.value].cost(b); };
  for (auto a : g.nodes()) {
    for (auto b : g.nodes()) {
      for (auto c : g.nodes()) {
        CHECK(cost(a, c) <= cost(a, b) + cost(b, c));
      }
    }
  }
}

TEST_CASE("parallel spt build equals the serial reference") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = testsupport::random_connected_graph(rng, 40, 30);
    const auto serial = build_all_spt_serial(g);
    const auto parallel = build_all_spt(g);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
      const auto a = serial[i].entries();
      const auto b = parallel[i].entries();
      REQUIRE(a.size() == b.size());
      for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].destination == b[k].destination);
        CHECK(a[k].cost == b[k].cost);
        CHECK(a[k].outgoing_interface == b[k].outgoing_interface);
      }
    }
  }
}

TEST_CASE("apply_failure on a cut vertex disconnects the ends") {
  const auto g = path_graph(3);
  const auto cut = apply_failure(g, {1});
  CHECK(cut.node_count() == 2);
  CHECK(cut.edge_count() == 0);
  CHECK_FALSE(build_spt(cut, {0}).cost({2}));
  CHECK_FALSE(build_spt(cut, {2}).cost({0}));
  CHECK_THROWS_AS(apply_failure(cut, {1}), TopologyError);
}

TEST_CASE("removing a leaf leaves other costs unchanged") {
  const auto g = load_topology("node A\nnode B\nnode C\nnode L\nedge A B\nedge B C\nedge C A\nedge C L\n");
  const auto before = build_all_spt(g);
  const auto after = build_all_spt(apply_failure(g, *g.find("L")));
  for (std::uint32_t a = 0; a < 3; ++a) {
    for (std::uint32_t b = 0; b < 3; ++b) {
      if (a != b) {
        CHECK(before[a].cost({b}) == after[a].cost({b}));
      }
    }
  }
}

TEST_CASE("failures never shorten a path") {
  const auto sprint = load_topology_file(testsupport::data_path("sprint52.topo"));
  const auto before = testsupport::floyd_warshall(sprint);
  std::mt19937_64 rng(5);
  auto routers = sprint.pure_routers();
  bool some_change = false;
  for (int trial = 0; trial < 10; ++trial) {
    const auto victim = routers[rng() % routers.size()];
    const auto cut = apply_failure(sprint, victim);
    const auto tables = build_all_spt(cut);
    for (auto a : cut.nodes()) {
      for (auto b : cut.nodes()) {
        if (a == b) {
          continue;
        }
        const auto c = tables[a.value].cost(b);
        if (!c) {
          some_change = true;
          continue;
        }
        CHECK(*c >= before[a.value][b.value]);
        some_change = some_change || *c > before[a.value][b.value];
      }
    }
  }
  CHECK(some_change);
}

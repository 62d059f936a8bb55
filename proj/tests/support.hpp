// Shared helpers and independent oracles for the unit and acceptance suites.
#ifndef CCNSIM_TESTS_SUPPORT_HPP
#define CCNSIM_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "ccnsim/topology.hpp"

namespace testsupport {

inline constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();

inline std::string data_path(const std::string& file) { return std::string(CCNSIM_SOURCE_DIR) + "/data/" + file; }
inline std::string config_path(const std::string& file) {
  return std::string(CCNSIM_SOURCE_DIR) + "/configs/" + file;
}

/// All-pairs hop distances by Floyd-Warshall over the adjacency matrix.
/// Deliberately shares nothing with the library's BFS.
inline std::vector<std::vector<std::uint32_t>> floyd_warshall(const ccnsim::Graph& g) {
  const std::size_t n = g.slot_count();
  std::vector<std::vector<std::uint32_t>> d(n, std::vector<std::uint32_t>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) {
    if (g.contains(ccnsim::RouterId{static_cast<std::uint32_t>(i)})) {
      d[i][i] = 0;
    }
  }
  for (const auto& link : g.edges()) {
    d[link.a.value][link.b.value] = 1;
    d[link.b.value][link.a.value] = 1;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i][k] == kInf) {
        continue;
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (d[k][j] != kInf && d[i][k] + d[k][j] < d[i][j]) {
          d[i][j] = d[i][k] + d[k][j];
        }
      }
    }
  }
  return d;
}

/// Random connected graph: a random spanning tree plus `extra` random chords.
inline ccnsim::Graph random_connected_graph(std::mt19937_64& rng, std::size_t nodes, std::size_t extra) {
  ccnsim::Graph g;
  for (std::size_t i = 0; i < nodes; ++i) {
    g.add_node("n" + std::to_string(i), ccnsim::kRoleRouter);
  }
  std::vector<std::uint32_t> order(nodes);
  std::iota(order.begin(), order.end(), 0u);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i = 1; i < nodes; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    g.add_edge({order[i]}, {order[pick(rng)]}, 1.0, 0.0);
  }
  if (nodes > 2) {
    std::uniform_int_distribution<std::uint32_t> any(0, static_cast<std::uint32_t>(nodes - 1));
    for (std::size_t k = 0; k < extra; ++k) {
      const ccnsim::RouterId a{any(rng)};
      const ccnsim::RouterId b{any(rng)};
      if (a != b && !g.link(a, b)) {
        g.add_edge(a, b, 1.0, 0.0);
      }
    }
  }
  return g;
}

/// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0u);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) {
        ++j;
      }
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) {
        r[idx[k]] = avg;
      }
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    // A flat series is trivially monotone in both directions.
    return syy == 0.0 ? std::numeric_limits<double>::quiet_NaN() : 0.0;
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace testsupport

#endif  // CCNSIM_TESTS_SUPPORT_HPP

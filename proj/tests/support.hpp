#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. They share no code with the library beyond the Graph accessors.

#include <cmath>
#include <cstdint>
#include <deque>
#include <random>
#include <set>
#include <vector>

#include "netrec/graph.hpp"

namespace netrec::testing {

/// Mean absolute difference form: sum_i sum_j |x_i - x_j| / (2 n^2 mean).
inline double gini_mad(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double total = 0.0;
  for (double x : xs) total += x;
  if (xs.empty() || total == 0.0) return std::nan("");
  double mad = 0.0;
  for (double a : xs) {
    for (double b : xs) mad += std::abs(a - b);
  }
  return mad / (2.0 * n * n * (total / n));
}

/// Neighbor sets read straight from the neighbor lists.
inline std::vector<std::set<std::uint32_t>> neighbor_sets(const Graph& g, ProvenanceFilter filter = ProvenanceFilter::all()) {
  std::vector<std::set<std::uint32_t>> adj(g.node_count());
  for (const auto& n : g.nodes()) {
    if (!n.alive) continue;
    for (const auto& nb : g.neighbors(n.id)) {
      if (filter.accepts(nb.provenance)) adj[n.id.index()].insert(nb.id.value);
    }
  }
  return adj;
}

/// Local clustering by enumerating every neighbor pair.
inline double brute_clustering(const Graph& g, NodeId u) {
  const auto adj = neighbor_sets(g);
  const auto& nb = adj[u.index()];
  if (nb.size() < 2) return 0.0;
  std::size_t links = 0;
  for (auto x : nb) {
    for (auto y : nb) {
      if (x < y && adj[x].count(y)) ++links;
    }
  }
  const double d = static_cast<double>(nb.size());
  return 2.0 * static_cast<double>(links) / (d * (d - 1.0));
}

inline std::int64_t brute_triangles(const Graph& g, NodeId u) {
  const auto adj = neighbor_sets(g);
  std::int64_t links = 0;
  for (auto x : adj[u.index()]) {
    for (auto y : adj[u.index()]) {
      if (x < y && adj[x].count(y)) ++links;
    }
  }
  return links;
}

/// Nodes at shortest-path distance exactly 2 over edges accepted by `filter`,
/// minus direct neighbors in the unfiltered graph.
inline std::vector<NodeId> bfs_distance2(const Graph& g, NodeId src, ProvenanceFilter filter) {
  const auto adj = neighbor_sets(g, filter);
  const auto full = neighbor_sets(g);
  std::vector<int> dist(g.node_count(), -1);
  std::deque<std::uint32_t> queue{src.value};
  dist[src.index()] = 0;
  while (!queue.empty()) {
    const auto x = queue.front();
    queue.pop_front();
    if (dist[x] >= 2) continue;
    for (auto y : adj[x]) {
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  std::vector<NodeId> out;
  for (std::uint32_t x = 0; x < dist.size(); ++x) {
    if (dist[x] == 2 && !full[src.index()].count(x)) out.push_back(NodeId{x});
  }
  return out;
}

/// G(n, p) with provenances cycled over every kind, followed by a few
/// removals so incremental bookkeeping sees deletions too.
inline Graph random_graph(std::size_t n, double p, std::uint64_t seed, std::size_t dim = 2) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Graph g(dim);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> emb(dim);
    for (auto& x : emb) x = u01(rng);
    g.add_node(static_cast<int>(k % 2), emb, 0);
  }
  std::size_t kind = 0;
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = a + 1; b < n; ++b) {
      if (u01(rng) < p) g.add_edge(NodeId{a}, NodeId{b}, kProvenances[kind++ % kProvenances.size()], 0);
    }
  }
  const auto edges = g.edges();
  for (std::size_t k = 0; k < edges.size(); k += 7) g.remove_edge(edges[k].u, edges[k].v, 1, RemovalReason::Rewire);
  return g;
}

/// Five nodes, two communities; arms follow communities (0 treatment, 1 control).
///   0-1 initial, 1-2 stranger, 0-2 algorithmic, 2-3 algorithmic (cross-arm),
///   3-4 friend_unmediated, 1-3 stranger.
inline Graph ab_fixture() {
  Graph g(2);
  for (int k = 0; k < 5; ++k) g.add_node(k < 3 ? 0 : 1, {0.0, 0.0}, 0);
  auto add = [&](std::uint32_t a, std::uint32_t b, Provenance p) { g.add_edge(NodeId{a}, NodeId{b}, p, 0); };
  add(0, 1, Provenance::Initial);
  add(1, 2, Provenance::Stranger);
  add(0, 2, Provenance::Algorithmic);
  add(2, 3, Provenance::Algorithmic);
  add(3, 4, Provenance::FriendUnmediated);
  add(1, 3, Provenance::Stranger);
  return g;
}

/// Expected values for ab_fixture(), worked out by hand from the edge list.
struct ABFixtureExpected {
  // Treatment {0,1,2}: 3 internal edges, 2 cross edges (one algorithmic).
  double homophily_naive_treatment = 3.0 / 5.0 - 3.0 / 5.0;
  double homophily_adjusted_treatment = 3.0 / 6.0 - 3.0 / 5.0;
  // Control {3,4}: 1 internal edge, 2 cross edges (one algorithmic).
  double homophily_naive_control = 1.0 / 3.0 - 2.0 / 5.0;
  double homophily_adjusted_control = 1.0 / 2.0 - 2.0 / 5.0;
  // Local clustering: node 0 -> 1, nodes 1 and 2 -> 2/3; node 3 -> 1/3, node 4 -> 0.
  double clustering_naive_treatment = (1.0 + 2.0 / 3.0 + 2.0 / 3.0) / 3.0;
  double clustering_naive_control = (1.0 / 3.0 + 0.0) / 2.0;
  double clustering_adjusted_treatment = 1.0;
  double clustering_adjusted_control = 0.0;
  // Degrees: treatment [2,3,3], control [1,3], control organic [1,2].
  double gini_naive_treatment = 2.0 * 17.0 / (3.0 * 8.0) - 4.0 / 3.0;
  double gini_naive_control = 2.0 * 7.0 / (2.0 * 4.0) - 3.0 / 2.0;
  double gini_adjusted_control = 2.0 * 5.0 / (2.0 * 3.0) - 3.0 / 2.0;
};

}  // namespace netrec::testing

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "netrec/bitset.hpp"
#include "netrec/graph.hpp"
#include "netrec/types.hpp"

namespace netrec {

/// What "global clustering" means in a metric row.
enum class ClusteringKind { AverageLocal, Transitivity };

inline double clustering_coefficient(const Graph& g, NodeId u) {
  const auto d = static_cast<double>(g.degree(u));
  if (d < 2) return 0.0;
  return 2.0 * static_cast<double>(g.triangles(u)) / (d * (d - 1.0));
}

template <class Pred>
double average_clustering(const Graph& g, Pred&& pred) {
  double sum = 0.0;
  std::size_t n = 0;
  for (NodeId u : g.alive_nodes()) {
    if (!pred(g.node(u))) continue;
    sum += clustering_coefficient(g, u);
    ++n;
  }
  return n == 0 ? kUndefined : sum / static_cast<double>(n);
}

inline double average_clustering(const Graph& g) {
  return average_clustering(g, [](const Node&) { return true; });
}

/// Closed-triplet ratio: sum of per-node triangles over sum of C(d, 2).
inline double transitivity(const Graph& g) {
  double closed = 0.0;
  double triples = 0.0;
  for (NodeId u : g.alive_nodes()) {
    const auto d = static_cast<double>(g.degree(u));
    closed += static_cast<double>(g.triangles(u));
    triples += d * (d - 1.0) / 2.0;
  }
  return triples == 0.0 ? kUndefined : closed / triples;
}

/// Gini coefficient of an ascending degree list, 1-based rank formula.
template <class T>
double gini(std::span<const T> ascending) {
  const auto n = static_cast<double>(ascending.size());
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < ascending.size(); ++i) {
    const auto d = static_cast<double>(ascending[i]);
    weighted += static_cast<double>(i + 1) * d;
    total += d;
  }
  if (ascending.empty() || total <= 0.0) return kUndefined;
  return 2.0 * weighted / (n * total) - (n + 1.0) / n;
}

inline double gini(const std::vector<std::size_t>& ascending) { return gini(std::span<const std::size_t>(ascending)); }

/// Edge tallies for a node set S: edges inside S and edges touching S.
struct SetEdgeTally {
  std::size_t members = 0;
  std::size_t population = 0;
  std::size_t within = 0;
  std::size_t touching = 0;
  /// Algorithmic edges with exactly one endpoint in S.
  std::size_t algorithmic_cross = 0;
};

template <class Member>
SetEdgeTally tally_set_edges(const Graph& g, Member&& member, ProvenanceFilter filter = ProvenanceFilter::all()) {
  SetEdgeTally t;
  std::size_t within_twice = 0;
  for (NodeId u : g.alive_nodes()) {
    ++t.population;
    if (!member(u)) continue;
    ++t.members;
    for (const auto& nb : g.neighbors(u)) {
      const bool inside = member(nb.id);
      if (!inside && nb.provenance == Provenance::Algorithmic) ++t.algorithmic_cross;
      if (!filter.accepts(nb.provenance)) continue;
      if (inside) {
        ++within_twice;
      } else {
        ++t.touching;
      }
    }
  }
  t.within = within_twice / 2;
  t.touching += t.within;
  return t;
}

/// H = |E_SS| / |E_S| - |S| / n, undefined when no edge touches S.
inline double homophily_from_tally(const SetEdgeTally& t) {
  if (t.touching == 0 || t.population == 0) return kUndefined;
  return static_cast<double>(t.within) / static_cast<double>(t.touching) -
         static_cast<double>(t.members) / static_cast<double>(t.population);
}

inline double homophily(const Graph& g, int group) {
  return homophily_from_tally(tally_set_edges(g, [&](NodeId u) { return g.node(u).group == group; }));
}

struct EdgeFractions {
  double mediated_fraction = kUndefined;
  double bichromatic_mediated = kUndefined;
  double bichromatic_unmediated = kUndefined;
};

/// Over alive friend edges: share that are mediated, and the bichromatic
/// share within each of the mediated and unmediated subsets.
inline EdgeFractions edge_fractions(const Graph& g) {
  std::size_t mediated = 0, unmediated = 0, bi_mediated = 0, bi_unmediated = 0;
  for (NodeId u : g.alive_nodes()) {
    const int gu = g.node(u).group;
    for (const auto& nb : g.neighbors(u)) {
      if (!(u < nb.id) || !is_friend_edge(nb.provenance)) continue;
      const bool bi = g.node(nb.id).group != gu;
      if (nb.provenance == Provenance::FriendMediated) {
        ++mediated;
        bi_mediated += bi ? 1 : 0;
      } else {
        ++unmediated;
        bi_unmediated += bi ? 1 : 0;
      }
    }
  }
  auto ratio = [](std::size_t a, std::size_t b) {
    return b == 0 ? kUndefined : static_cast<double>(a) / static_cast<double>(b);
  };
  return {ratio(mediated, mediated + unmediated), ratio(bi_mediated, mediated), ratio(bi_unmediated, unmediated)};
}

/// Average clustering of the members of `members`, each computed in the
/// subgraph induced by `members`.
inline double induced_average_clustering(const Graph& g, const NodeSet& members) {
  const auto mask = members.words();
  double sum = 0.0;
  std::size_t n = 0;
  std::vector<std::uint64_t> local(g.row_words());
  for (NodeId u : g.alive_nodes()) {
    if (!members.contains(u)) continue;
    ++n;
    const auto row = g.adjacency_row(u);
    std::size_t deg = 0;
    for (std::size_t k = 0; k < local.size(); ++k) {
      local[k] = row[k] & (k < mask.size() ? mask[k] : 0);
      deg += static_cast<std::size_t>(std::popcount(local[k]));
    }
    if (deg < 2) continue;
    std::size_t twice_triangles = 0;
    for (std::size_t k = 0; k < local.size(); ++k) {
      for (auto bits = local[k]; bits != 0; bits &= bits - 1) {
        const NodeId x{static_cast<std::uint32_t>(k * 64 + static_cast<std::size_t>(std::countr_zero(bits)))};
        const auto xrow = g.adjacency_row(x);
        for (std::size_t q = 0; q < local.size(); ++q) {
          twice_triangles += static_cast<std::size_t>(std::popcount(xrow[q] & local[q]));
        }
      }
    }
    const auto d = static_cast<double>(deg);
    sum += static_cast<double>(twice_triangles) / (d * (d - 1.0));
  }
  return n == 0 ? kUndefined : sum / static_cast<double>(n);
}

struct MetricRow {
  Timestep t = 0;
  double n_alive = 0;
  double avg_degree = kUndefined;
  double clustering_global = kUndefined;
  std::vector<double> clustering_by_group;
  double gini_global = kUndefined;
  std::vector<double> gini_by_group;
  std::vector<double> homophily_by_group;
  /// Mean of the defined per-group homophily values.
  double homophily = kUndefined;
  double mediated_fraction_friend_edges = kUndefined;
  double bichromatic_fraction_mediated = kUndefined;
  double bichromatic_fraction_unmediated = kUndefined;

  /// Value of a named metric; see metric_names().
  double get(std::string_view name) const {
    auto per_group = [&](std::string_view prefix, const std::vector<double>& values) -> std::optional<double> {
      if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
      const auto idx = std::stoul(std::string(name.substr(prefix.size())));
      if (idx >= values.size()) throw std::out_of_range("metric group out of range: " + std::string(name));
      return values[idx];
    };
    if (name == "n_alive") return n_alive;
    if (name == "avg_degree") return avg_degree;
    if (name == "clustering_global") return clustering_global;
    if (name == "gini_global") return gini_global;
    if (name == "homophily") return homophily;
    if (name == "mediated_fraction_friend_edges") return mediated_fraction_friend_edges;
    if (name == "bichromatic_fraction_mediated") return bichromatic_fraction_mediated;
    if (name == "bichromatic_fraction_unmediated") return bichromatic_fraction_unmediated;
    if (auto v = per_group("clustering_g", clustering_by_group)) return *v;
    if (auto v = per_group("gini_g", gini_by_group)) return *v;
    if (auto v = per_group("homophily_g", homophily_by_group)) return *v;
    throw std::out_of_range("unknown metric: " + std::string(name));
  }
};

/// Metric names of a row with `n_groups` communities, sorted lexicographically.
inline std::vector<std::string> metric_names(std::size_t n_groups) {
  std::vector<std::string> names{"avg_degree",
                                 "bichromatic_fraction_mediated",
                                 "bichromatic_fraction_unmediated",
                                 "clustering_global",
                                 "gini_global",
                                 "homophily",
                                 "mediated_fraction_friend_edges",
                                 "n_alive"};
  for (std::size_t g = 0; g < n_groups; ++g) {
    names.push_back("clustering_g" + std::to_string(g));
    names.push_back("gini_g" + std::to_string(g));
    names.push_back("homophily_g" + std::to_string(g));
  }
  std::sort(names.begin(), names.end());
  return names;
}

inline MetricRow snapshot_metrics(const Graph& g, Timestep t, std::size_t n_groups,
                                  ClusteringKind kind = ClusteringKind::AverageLocal) {
  MetricRow row;
  row.t = t;
  row.n_alive = static_cast<double>(g.alive_count());
  row.clustering_by_group.assign(n_groups, kUndefined);
  row.gini_by_group.assign(n_groups, kUndefined);
  row.homophily_by_group.assign(n_groups, kUndefined);
  if (g.alive_count() < 2 || g.edge_count() == 0) return row;

  row.avg_degree = 2.0 * static_cast<double>(g.edge_count()) / row.n_alive;
  row.clustering_global = kind == ClusteringKind::AverageLocal ? average_clustering(g) : transitivity(g);
  row.gini_global = gini(g.degree_sequence());
  for (std::size_t c = 0; c < n_groups; ++c) {
    const int grp = static_cast<int>(c);
    auto in_group = [grp](const Node& n) { return n.group == grp; };
    row.clustering_by_group[c] = average_clustering(g, in_group);
    row.gini_by_group[c] = gini(g.degree_sequence(in_group));
    row.homophily_by_group[c] = homophily(g, grp);
  }
  double sum = 0.0;
  std::size_t defined = 0;
  for (double h : row.homophily_by_group) {
    if (is_undefined(h)) continue;
    sum += h;
    ++defined;
  }
  if (defined > 0) row.homophily = sum / static_cast<double>(defined);
  const auto fr = edge_fractions(g);
  row.mediated_fraction_friend_edges = fr.mediated_fraction;
  row.bichromatic_fraction_mediated = fr.bichromatic_mediated;
  row.bichromatic_fraction_unmediated = fr.bichromatic_unmediated;
  return row;
}

}  // namespace netrec

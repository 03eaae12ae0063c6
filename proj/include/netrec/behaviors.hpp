#pragma once

#include <optional>
#include <string_view>

#include "netrec/dynamics.hpp"
#include "netrec/graph.hpp"
#include "netrec/rng.hpp"

namespace netrec {

enum class AcceptanceKind { Constant, ChoiceHomophily };

/// Which edge a rewiring acceptance drops: one incident to the accepting
/// node, or any edge of the graph.
enum class RewireScope { Node, Graph };

struct BehaviorSpec {
  AcceptanceKind acceptance = AcceptanceKind::Constant;
  double p = 0.5;
  bool rewire = false;
  RewireScope rewire_scope = RewireScope::Node;

  bool operator==(const BehaviorSpec&) const = default;
};

inline bool decide(const BehaviorSpec& spec, const Node& i, const Node& j, SigmoidParams link, Rng& rng) {
  switch (spec.acceptance) {
    case AcceptanceKind::Constant: return bernoulli(rng, spec.p);
    case AcceptanceKind::ChoiceHomophily: return bernoulli(rng, link_probability(i.embedding, j.embedding, link));
  }
  return false;
}

struct EdgeDelta {
  std::optional<Edge> added;
  std::optional<Edge> removed;
};

/// Adds the accepted algorithmic edge i-j. With rewiring, then drops one
/// other edge chosen uniformly from the configured scope.
inline EdgeDelta apply_acceptance(Graph& g, NodeId i, NodeId j, const BehaviorSpec& spec, Timestep t, Rng& rng) {
  EdgeDelta delta;
  if (!g.add_edge(i, j, Provenance::Algorithmic, t)) return delta;
  delta.added = Edge{i, j, Provenance::Algorithmic, t};
  if (!spec.rewire) return delta;

  std::optional<Edge> victim;
  if (spec.rewire_scope == RewireScope::Node) {
    const auto nbs = g.neighbors(i);
    if (nbs.size() < 2) return delta;
    // Uniform over the deg(i) - 1 edges other than i-j.
    auto k = uniform_index(rng, nbs.size() - 1);
    for (const auto& nb : nbs) {
      if (nb.id == j) continue;
      if (k-- == 0) {
        victim = Edge{i, nb.id, nb.provenance, nb.created_at};
        break;
      }
    }
  } else {
    if (g.edge_count() < 2) return delta;
    // Uniform edge endpoint-pair: node proportional to degree, then a neighbor.
    const std::size_t stubs = 2 * g.edge_count();
    while (!victim) {
      auto r = uniform_index(rng, stubs);
      for (NodeId u : g.alive_nodes()) {
        const auto d = g.degree(u);
        if (r < d) {
          const auto& nb = g.neighbors(u)[r];
          const bool is_new = (u == i && nb.id == j) || (u == j && nb.id == i);
          if (!is_new) victim = Edge{u, nb.id, nb.provenance, nb.created_at};
          break;
        }
        r -= d;
      }
    }
  }
  g.remove_edge(victim->u, victim->v, t, RemovalReason::Rewire);
  delta.removed = victim;
  return delta;
}

}  // namespace netrec

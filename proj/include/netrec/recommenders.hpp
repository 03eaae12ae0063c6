#pragma once

#include <cmath>
#include <algorithm>
#include <limits>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "netrec/dynamics.hpp"
#include "netrec/graph.hpp"
#include "netrec/rng.hpp"

namespace netrec {

enum class RecommenderKind { FoF, Latent, AdamicAdar };

constexpr std::string_view to_string(RecommenderKind k) noexcept {
  switch (k) {
    case RecommenderKind::FoF: return "fof";
    case RecommenderKind::Latent: return "latent";
    case RecommenderKind::AdamicAdar: return "adamic_adar";
  }
  return "unknown";
}

struct RecommenderSpec {
  RecommenderKind kind = RecommenderKind::FoF;
  /// Softmax inverse temperature; only read by the latent recommender.
  double beta = 10.0;

  bool operator==(const RecommenderSpec&) const = default;
};

/// Uniform draw from the distance-2 set of `i`.
inline std::optional<NodeId> recommend_fof(const Graph& g, NodeId i, Rng& rng) {
  const auto pool = g.distance2_set(i);
  const auto n = pool.size();
  if (n == 0) return std::nullopt;
  return pool.nth(uniform_index(rng, n));
}

/// Softmax weights exp(beta <v_i, v_j>) over every alive non-neighbor j != i,
/// normalized. Shifted by the maximum score before exponentiation.
inline std::vector<std::pair<NodeId, double>> latent_distribution(const Graph& g, NodeId i, double beta) {
  std::vector<std::pair<NodeId, double>> out;
  const auto vi = g.embedding(i);
  double best = -std::numeric_limits<double>::infinity();
  for (NodeId j : g.alive_nodes()) {
    if (j == i || g.has_edge(i, j)) continue;
    const double s = dot(vi, g.embedding(j));
    out.emplace_back(j, s);
    best = std::max(best, s);
  }
  double total = 0.0;
  for (auto& [j, w] : out) {
    w = std::exp(beta * (w - best));
    total += w;
  }
  for (auto& [j, w] : out) w /= total;
  return out;
}

inline std::optional<NodeId> recommend_latent(const Graph& g, NodeId i, double beta, Rng& rng) {
  thread_local std::vector<NodeId> ids;
  thread_local std::vector<double> weights;
  ids.clear();
  weights.clear();
  const auto vi = g.embedding(i);
  const auto own = g.adjacency_row(i);
  double best = -std::numeric_limits<double>::infinity();
  for (NodeId j : g.alive_nodes()) {
    if (j == i || ((own[j.index() >> 6] >> (j.index() & 63)) & 1U)) continue;
    const double s = dot(vi, g.embedding(j));
    ids.push_back(j);
    weights.push_back(s);
    best = std::max(best, s);
  }
  if (ids.empty()) return std::nullopt;
  double total = 0.0;
  for (double& w : weights) {
    w = std::exp(beta * (w - best));
    total += w;
  }
  const double target = uniform01(rng) * total;
  double acc = 0.0;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    acc += weights[k];
    if (target < acc) return ids[k];
  }
  return ids.back();
}

/// Sum over common neighbors z of 1 / ln deg(z). Degree-1 neighbors cannot be
/// common neighbors of two distinct nodes and are skipped regardless.
inline double adamic_adar_score(const Graph& g, NodeId i, NodeId j) {
  double score = 0.0;
  const auto row_j = g.adjacency_row(j);
  for (const auto& nb : g.neighbors(i)) {
    const auto z = nb.id.index();
    if (!((row_j[z >> 6] >> (z & 63)) & 1U)) continue;
    const auto d = g.degree(nb.id);
    if (d > 1) score += 1.0 / std::log(static_cast<double>(d));
  }
  return score;
}

/// Highest Adamic-Adar candidate among distance-2 nodes; ties broken uniformly.
inline std::optional<NodeId> recommend_adamic_adar(const Graph& g, NodeId i, Rng& rng) {
  const auto pool = g.distance2_set(i);
  if (pool.empty()) return std::nullopt;
  thread_local std::vector<double> score;
  thread_local std::vector<NodeId> touched;
  score.assign(g.node_count(), 0.0);
  touched.clear();
  for (const auto& nb : g.neighbors(i)) {
    const auto d = g.degree(nb.id);
    if (d < 2) continue;
    const double w = 1.0 / std::log(static_cast<double>(d));
    for (const auto& nb2 : g.neighbors(nb.id)) {
      if (!pool.contains(nb2.id)) continue;
      if (score[nb2.id.index()] == 0.0) touched.push_back(nb2.id);
      score[nb2.id.index()] += w;
    }
  }
  std::sort(touched.begin(), touched.end());
  double best = -1.0;
  std::vector<NodeId> ties;
  for (NodeId w : touched) {
    const double s = score[w.index()];
    // Relative tolerance so equal sums accumulated in different orders tie.
    if (s > best * (1.0 + 1e-12) + 1e-15) {
      best = s;
      ties.assign(1, w);
    } else if (std::abs(s - best) <= 1e-12 * best + 1e-15) {
      ties.push_back(w);
    }
  }
  return ties[uniform_index(rng, ties.size())];
}

inline std::optional<NodeId> recommend(const RecommenderSpec& spec, const Graph& g, NodeId i, Rng& rng) {
  switch (spec.kind) {
    case RecommenderKind::FoF: return recommend_fof(g, i, rng);
    case RecommenderKind::Latent: return recommend_latent(g, i, spec.beta, rng);
    case RecommenderKind::AdamicAdar: return recommend_adamic_adar(g, i, rng);
  }
  return std::nullopt;
}

}  // namespace netrec

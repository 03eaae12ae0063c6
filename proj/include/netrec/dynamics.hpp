#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "netrec/graph.hpp"
#include "netrec/rng.hpp"
#include "netrec/types.hpp"

namespace netrec {

struct CommunitySpec {
  double prevalence = 0.5;
  std::vector<double> embedding_mean;
  /// Isotropic standard deviation of the embedding distribution.
  double embedding_std = 0.0;

  bool operator==(const CommunitySpec&) const = default;
};

/// Scaled and shifted logistic link function 1 / (1 + exp(-a x + b)).
struct SigmoidParams {
  double a = 1.0;
  double b = 0.0;

  bool operator==(const SigmoidParams&) const = default;
};

struct GrowthParams {
  int n_strangers = 100;
  int n_friends = 100;
  double p_friend = 0.05;
  int arrivals_per_step = 5;
  /// Filled from the scenario's calibration before a run.
  SigmoidParams link;

  bool operator==(const GrowthParams&) const = default;
};

/// Age-dependent departure hazard h(age) = c d^age + k, clipped to [0, 1].
struct HazardParams {
  double c = 0.0;
  double d = 1.0;
  double k = 0.0;
  bool enabled = false;

  double probability(Timestep age) const noexcept {
    return std::clamp(c * std::pow(d, static_cast<double>(age)) + k, 0.0, 1.0);
  }

  bool operator==(const HazardParams&) const = default;
};

enum class MediationMode { Full, OrganicOnly };

struct InitParams {
  int n_per_group = 50;
  double p_closure = 0.05;

  bool operator==(const InitParams&) const = default;
};

inline double dot(std::span<const double> x, std::span<const double> y) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

inline double sigmoid(double x, SigmoidParams p) noexcept { return 1.0 / (1.0 + std::exp(-p.a * x + p.b)); }

inline double link_probability(std::span<const double> vi, std::span<const double> vj, double a, double b) {
  return sigmoid(dot(vi, vj), {a, b});
}

inline double link_probability(std::span<const double> vi, std::span<const double> vj, SigmoidParams p) {
  return sigmoid(dot(vi, vj), p);
}

/// Solves for the offset b such that the mean of sigmoid(a x - b) over the
/// sample equals `target_mean`; `a` is held fixed.
inline SigmoidParams calibrate_sigmoid(double target_mean, std::span<const double> inner_products, double a) {
  if (inner_products.empty()) throw CalibrationError("calibration sample is empty");
  if (!(target_mean > 0.0 && target_mean < 1.0)) {
    throw CalibrationError("target mean must lie in (0, 1), got " + std::to_string(target_mean));
  }
  auto excess = [&](double b) {
    double s = 0.0;
    for (double x : inner_products) s += sigmoid(x, {a, b});
    return s / static_cast<double>(inner_products.size()) - target_mean;
  };
  const auto [lo_it, hi_it] = std::minmax_element(inner_products.begin(), inner_products.end());
  const double margin = std::abs(std::log(target_mean / (1.0 - target_mean))) + 40.0;
  double lo = std::min(a * *lo_it, a * *hi_it) - margin;
  double hi = std::max(a * *lo_it, a * *hi_it) + margin;
  const double f_lo = excess(lo);
  const double f_hi = excess(hi);
  if (!(f_lo > 0.0 && f_hi < 0.0)) {
    throw CalibrationError("no root in bracket [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  std::uintmax_t iterations = 200;
  auto tol = [&](double l, double h) { return std::abs(h - l) < 1e-13 * std::max(1.0, std::abs(l)); };
  const auto [b_lo, b_hi] = boost::math::tools::toms748_solve(excess, lo, hi, f_lo, f_hi, tol, iterations);
  return {a, 0.5 * (b_lo + b_hi)};
}

struct NodeDraft {
  int group = 0;
  std::vector<double> embedding;
};

inline int draw_group(std::span<const CommunitySpec> communities, Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t g = 0; g < communities.size(); ++g) {
    acc += communities[g].prevalence;
    if (u < acc) return static_cast<int>(g);
  }
  // Rounding slack: fall back to the last community with positive prevalence.
  for (std::size_t g = communities.size(); g-- > 0;) {
    if (communities[g].prevalence > 0.0) return static_cast<int>(g);
  }
  return 0;
}

inline std::vector<double> draw_embedding(const CommunitySpec& c, Rng& rng) {
  std::vector<double> v(c.embedding_mean);
  for (double& x : v) x += c.embedding_std * standard_normal(rng);
  return v;
}

inline NodeDraft spawn_node(std::span<const CommunitySpec> communities, Rng& rng) {
  const int g = draw_group(communities, rng);
  return {g, draw_embedding(communities[static_cast<std::size_t>(g)], rng)};
}

/// Inner products of independent node pairs drawn from the community mixture.
inline std::vector<double> sample_inner_products(std::span<const CommunitySpec> communities, std::size_t pairs,
                                                 Rng& rng) {
  std::vector<double> out;
  out.reserve(pairs);
  for (std::size_t k = 0; k < pairs; ++k) {
    const auto a = spawn_node(communities, rng);
    const auto b = spawn_node(communities, rng);
    out.push_back(dot(a.embedding, b.embedding));
  }
  return out;
}

/// Meeting strangers: up to N_s distinct alive nodes other than `i`, each
/// linked with the sigmoid probability.
inline std::vector<Edge> meet_strangers(Graph& g, NodeId i, const GrowthParams& params, Rng& rng, Timestep t) {
  std::vector<NodeId> pool;
  pool.reserve(g.alive_count());
  for (NodeId u : g.alive_nodes()) {
    if (u != i) pool.push_back(u);
  }
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(std::max(params.n_strangers, 0)), pool.size());
  const auto candidates = sample_without_replacement<NodeId>(pool, k, rng);
  std::vector<Edge> added;
  const auto vi = g.embedding(i);
  for (NodeId j : candidates) {
    if (bernoulli(rng, link_probability(vi, g.embedding(j), params.link)) &&
        g.add_edge(i, j, Provenance::Stranger, t)) {
      added.push_back({i, j, Provenance::Stranger, t});
    }
  }
  return added;
}

/// Meeting friends: up to N_f distinct distance-2 candidates, each linked with
/// probability p_friend. Under OrganicOnly the pool only follows organic
/// 2-paths. Under Full, an edge is labelled mediated when no organic 2-path
/// to the candidate exists at formation time.
inline std::vector<Edge> meet_friends(Graph& g, NodeId i, const GrowthParams& params, MediationMode mode, Rng& rng,
                                      Timestep t) {
  const auto filter = mode == MediationMode::Full ? ProvenanceFilter::all() : ProvenanceFilter::organic();
  const auto pool = g.distance2(i, filter);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(std::max(params.n_friends, 0)), pool.size());
  const auto candidates = sample_without_replacement<NodeId>(pool, k, rng);
  std::vector<Edge> added;
  for (NodeId w : candidates) {
    if (!bernoulli(rng, params.p_friend)) continue;
    const bool mediated = mode == MediationMode::Full && !g.has_common_neighbor(i, w, ProvenanceFilter::organic());
    const auto p = mediated ? Provenance::FriendMediated : Provenance::FriendUnmediated;
    if (g.add_edge(i, w, p, t)) added.push_back({i, w, p, t});
  }
  return added;
}

/// Removes each alive node independently with its age hazard.
inline std::vector<NodeId> apply_attrition(Graph& g, const HazardParams& hz, Timestep t, Rng& rng) {
  std::vector<NodeId> removed;
  if (!hz.enabled) return removed;
  for (NodeId u : g.alive_nodes()) {
    if (bernoulli(rng, hz.probability(g.node(u).age(t)))) removed.push_back(u);
  }
  for (NodeId u : removed) g.remove_node(u, t);
  return removed;
}

/// n_per_group nodes per community, sigmoid-linked pairwise, then one
/// triadic-closure pass over every node in id order.
inline Graph initialize_graph(std::span<const CommunitySpec> communities, const InitParams& init, SigmoidParams link,
                              Rng& rng) {
  if (communities.empty()) throw ConfigError("at least one community is required");
  Graph g(communities.front().embedding_mean.size());
  for (std::size_t c = 0; c < communities.size(); ++c) {
    for (int k = 0; k < init.n_per_group; ++k) {
      g.add_node(static_cast<int>(c), draw_embedding(communities[c], rng), 0);
    }
  }
  const auto ids = std::vector<NodeId>(g.alive_nodes().begin(), g.alive_nodes().end());
  for (std::size_t x = 0; x < ids.size(); ++x) {
    for (std::size_t y = x + 1; y < ids.size(); ++y) {
      if (bernoulli(rng, link_probability(g.embedding(ids[x]), g.embedding(ids[y]), link))) {
        g.add_edge(ids[x], ids[y], Provenance::Initial, 0);
      }
    }
  }
  for (NodeId u : ids) {
    for (NodeId w : g.distance2(u)) {
      if (bernoulli(rng, init.p_closure)) g.add_edge(u, w, Provenance::Initial, 0);
    }
  }
  return g;
}

}  // namespace netrec

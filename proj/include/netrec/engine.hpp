#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "netrec/behaviors.hpp"
#include "netrec/dynamics.hpp"
#include "netrec/graph.hpp"
#include "netrec/metrics.hpp"
#include "netrec/recommenders.hpp"
#include "netrec/rng.hpp"
#include "netrec/stats.hpp"

namespace netrec {

enum class RunMode { Natural, Intervened, Unmediated, AB };

constexpr std::string_view to_string(RunMode m) noexcept {
  switch (m) {
    case RunMode::Natural: return "natural";
    case RunMode::Intervened: return "intervened";
    case RunMode::Unmediated: return "unmediated";
    case RunMode::AB: return "ab";
  }
  return "unknown";
}

inline std::optional<RunMode> parse_run_mode(std::string_view s) noexcept {
  for (auto m : {RunMode::Natural, RunMode::Intervened, RunMode::Unmediated, RunMode::AB}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

/// Closed interval of timesteps during which recommendations are served.
struct InterventionWindow {
  Timestep lo = 50;
  Timestep hi = 200;

  bool contains(Timestep t) const noexcept { return lo <= t && t <= hi; }
  bool operator==(const InterventionWindow&) const = default;
};

/// How the linkage sigmoid is obtained: `a` is fixed, `b` is either given or
/// solved so the mean stranger-link probability over random node pairs hits
/// `target_mean`.
struct LinkageConfig {
  double a = 1.6;
  double target_mean = 0.05;
  std::optional<double> b;
  int calibration_pairs = 4000;
  std::uint64_t calibration_seed = 7919;

  bool operator==(const LinkageConfig&) const = default;
};

struct ABScheme {
  enum class Kind { RandomNode, ByCommunity };
  Kind kind = Kind::RandomNode;
  double p = 0.5;
  int treated_group = 0;

  bool operator==(const ABScheme&) const = default;
};

struct Scenario {
  Timestep horizon = 400;
  std::vector<CommunitySpec> communities;
  GrowthParams growth;
  HazardParams hazard;
  InitParams init;
  LinkageConfig linkage;
  RecommenderSpec recommender;
  BehaviorSpec behavior;
  InterventionWindow window;
  int n_seeds = 5;
  std::vector<RunMode> run_modes{RunMode::Natural, RunMode::Intervened, RunMode::Unmediated};
  ABScheme ab;
  ClusteringKind clustering = ClusteringKind::AverageLocal;
  /// Windows iterated by the sweep command.
  std::vector<InterventionWindow> sweep_windows;

  bool operator==(const Scenario&) const = default;
};

/// Two equally sized communities at [0,1] and [1,0], embedding variance 0.05.
inline Scenario baseline_scenario() {
  Scenario s;
  const double std_dev = std::sqrt(0.05);
  s.communities = {CommunitySpec{0.5, {0.0, 1.0}, std_dev}, CommunitySpec{0.5, {1.0, 0.0}, std_dev}};
  s.sweep_windows = {{50, 100}, {50, 200}, {50, 400}};
  return s;
}

/// Heterophilic majority at [0,1] (group 0, 60%) and homophilic minority at
/// [1.2,1] (group 1, 40%).
inline Scenario majority_minority_scenario() {
  Scenario s = baseline_scenario();
  s.communities[0].prevalence = 0.6;
  s.communities[1].prevalence = 0.4;
  s.communities[1].embedding_mean = {1.2, 1.0};
  return s;
}

/// Baseline with a different within-group embedding variance.
inline Scenario embedding_variance_scenario(double variance) {
  Scenario s = baseline_scenario();
  for (auto& c : s.communities) c.embedding_std = std::sqrt(variance);
  return s;
}

inline void validate(const Scenario& s) {
  auto fail = [](const std::string& key, const std::string& why) { throw ConfigError(key + ": " + why); };
  if (s.horizon < 0) fail("horizon", "must be nonnegative");
  if (s.communities.empty()) fail("communities", "at least one community is required");
  double total = 0.0;
  const auto dim = s.communities.front().embedding_mean.size();
  if (dim == 0) fail("communities", "embedding mean must be nonempty");
  for (const auto& c : s.communities) {
    if (c.prevalence < 0.0) fail("communities.prevalence", "must be nonnegative");
    if (c.embedding_std < 0.0) fail("communities.std", "must be nonnegative");
    if (c.embedding_mean.size() != dim) fail("communities.mean", "all means must share one dimension");
    total += c.prevalence;
  }
  if (std::abs(total - 1.0) > 1e-9) fail("communities.prevalence", "prevalences must sum to 1");
  const auto& gp = s.growth;
  if (gp.n_strangers < 0) fail("growth.n_strangers", "must be nonnegative");
  if (gp.n_friends < 0) fail("growth.n_friends", "must be nonnegative");
  if (gp.arrivals_per_step < 0) fail("growth.arrivals_per_step", "must be nonnegative");
  if (!(gp.p_friend >= 0.0 && gp.p_friend <= 1.0)) fail("growth.p_friend", "must lie in [0, 1]");
  if (s.init.n_per_group < 0) fail("init.n_per_group", "must be nonnegative");
  if (!(s.init.p_closure >= 0.0 && s.init.p_closure <= 1.0)) fail("init.p_closure", "must lie in [0, 1]");
  if (!std::isfinite(s.linkage.a)) fail("sigmoid.a", "must be finite");
  if (!(s.linkage.target_mean > 0.0 && s.linkage.target_mean < 1.0)) fail("sigmoid.target_mean", "must lie in (0, 1)");
  if (s.linkage.calibration_pairs < 1) fail("sigmoid.calibration_pairs", "must be positive");
  if (!(std::isfinite(s.recommender.beta) && s.recommender.beta >= 0.0)) fail("recommender.beta", "must be finite and >= 0");
  if (!(s.behavior.p >= 0.0 && s.behavior.p <= 1.0)) fail("behavior.p", "must lie in [0, 1]");
  auto check_window = [&](const InterventionWindow& w, const std::string& key) {
    if (!(0 <= w.lo && w.lo <= w.hi && w.hi <= s.horizon)) {
      fail(key, "requires 0 <= lo <= hi <= horizon, got [" + std::to_string(w.lo) + ", " + std::to_string(w.hi) + "]");
    }
  };
  check_window(s.window, "window");
  for (const auto& w : s.sweep_windows) {
    if (!(0 <= w.lo && w.lo <= w.hi)) fail("sweep.windows", "requires 0 <= lo <= hi, got [" + std::to_string(w.lo) + ", " + std::to_string(w.hi) + "]");
  }
  if (s.n_seeds < 1) fail("n_seeds", "must be at least 1");
  if (!(s.ab.p >= 0.0 && s.ab.p <= 1.0)) fail("ab.p", "must lie in [0, 1]");
  if (s.ab.kind == ABScheme::Kind::ByCommunity &&
      (s.ab.treated_group < 0 || static_cast<std::size_t>(s.ab.treated_group) >= s.communities.size())) {
    fail("ab.treated_group", "unknown group " + std::to_string(s.ab.treated_group));
  }
  if (s.hazard.enabled && !(std::isfinite(s.hazard.c) && std::isfinite(s.hazard.d) && std::isfinite(s.hazard.k))) {
    fail("hazard", "parameters must be finite");
  }
}

/// Sweep windows must also end by the horizon; checked only when sweeping.
inline void validate_sweep(const Scenario& s) {
  validate(s);
  if (s.sweep_windows.empty()) throw ConfigError("sweep.windows: at least one window is required");
  for (const auto& w : s.sweep_windows) {
    if (w.hi > s.horizon) {
      throw ConfigError("sweep.windows: window [" + std::to_string(w.lo) + ", " + std::to_string(w.hi) +
                        "] ends after horizon " + std::to_string(s.horizon));
    }
  }
}

inline SigmoidParams resolve_linkage(const Scenario& s) {
  if (s.linkage.b) return {s.linkage.a, *s.linkage.b};
  Rng rng = make_stream(s.linkage.calibration_seed, "calibration");
  const auto sample =
      sample_inner_products(s.communities, static_cast<std::size_t>(s.linkage.calibration_pairs), rng);
  return calibrate_sigmoid(s.linkage.target_mean, sample, s.linkage.a);
}

enum class Arm : std::uint8_t { Control, Treatment };

struct ArmValues {
  double treatment = kUndefined;
  double control = kUndefined;
};

/// Per-arm naive and interference-adjusted metric values at one timestep.
struct ABRow {
  Timestep t = 0;
  ArmValues homophily_naive, homophily_adjusted;
  ArmValues clustering_naive, clustering_adjusted;
  ArmValues gini_naive, gini_adjusted;
};

/// Ledger activity during one timestep.
struct LedgerSummary {
  std::array<std::size_t, kProvenances.size()> added{};
  std::size_t removed_rewire = 0;
  std::size_t removed_departure = 0;
  std::size_t arrivals = 0;
};

struct Trajectory {
  RunMode mode = RunMode::Natural;
  std::uint64_t seed = 0;
  std::vector<MetricRow> rows;
  std::vector<LedgerSummary> ledger;
  std::vector<ABRow> ab_rows;
  /// Arm of every node ever created (AB mode only), indexed by NodeId.
  std::vector<Arm> arms;
  std::shared_ptr<const Graph> final_graph;

  const MetricRow& at(Timestep t) const {
    if (t < 0 || static_cast<std::size_t>(t) >= rows.size()) {
      throw std::out_of_range("timestep " + std::to_string(t) + " outside trajectory");
    }
    return rows[static_cast<std::size_t>(t)];
  }
};

struct RunOptions {
  bool keep_graph = false;
};

inline Arm draw_arm(const ABScheme& scheme, int group, Rng& rng) {
  if (scheme.kind == ABScheme::Kind::ByCommunity) return group == scheme.treated_group ? Arm::Treatment : Arm::Control;
  return bernoulli(rng, scheme.p) ? Arm::Treatment : Arm::Control;
}

inline ABRow ab_arm_metrics(const Graph& g, std::span<const Arm> arms, Timestep t) {
  ABRow row;
  row.t = t;
  auto in_arm = [&](Arm a) { return [&arms, a](NodeId u) { return arms[u.index()] == a; }; };
  auto node_in_arm = [&](Arm a) { return [&arms, a](const Node& n) { return arms[n.id.index()] == a; }; };
  const auto treat = in_arm(Arm::Treatment);
  const auto ctrl = in_arm(Arm::Control);

  const auto tally_t = tally_set_edges(g, treat);
  const auto tally_c = tally_set_edges(g, ctrl);
  row.homophily_naive = {homophily_from_tally(tally_t), homophily_from_tally(tally_c)};
  // Treatment: cross-arm algorithmic edges are counted a second time, standing
  // in for the edges the control side would have initiated under full rollout.
  auto doubled = tally_t;
  doubled.touching += tally_t.algorithmic_cross;
  row.homophily_adjusted = {homophily_from_tally(doubled),
                            homophily_from_tally(tally_set_edges(g, ctrl, ProvenanceFilter::organic()))};

  row.clustering_naive = {average_clustering(g, node_in_arm(Arm::Treatment)),
                          average_clustering(g, node_in_arm(Arm::Control))};
  NodeSet tset, cset;
  for (NodeId u : g.alive_nodes()) (arms[u.index()] == Arm::Treatment ? tset : cset).insert(u);
  row.clustering_adjusted = {induced_average_clustering(g, tset), induced_average_clustering(g, cset)};

  const auto gini_t = gini(g.degree_sequence(node_in_arm(Arm::Treatment)));
  row.gini_naive = {gini_t, gini(g.degree_sequence(node_in_arm(Arm::Control)))};
  std::vector<std::size_t> organic_degrees;
  for (NodeId u : g.alive_nodes()) {
    if (arms[u.index()] != Arm::Control) continue;
    std::size_t d = 0;
    for (const auto& nb : g.neighbors(u)) d += nb.provenance != Provenance::Algorithmic ? 1 : 0;
    organic_degrees.push_back(d);
  }
  std::sort(organic_degrees.begin(), organic_degrees.end());
  row.gini_adjusted = {gini_t, gini(organic_degrees)};
  return row;
}

/// Simulates one trajectory. Each timestep runs, in order: arrivals (each
/// meeting strangers then friends), recommendations for treated nodes if the
/// window is open, attrition, measurement. Row t = 0 measures the initial
/// graph.
inline Trajectory run_trajectory(const Scenario& s, RunMode mode, std::uint64_t seed, RunOptions opts = {}) {
  validate(s);
  GrowthParams growth = s.growth;
  growth.link = resolve_linkage(s);
  StreamSet rng(seed);
  Graph g = initialize_graph(s.communities, s.init, growth.link, rng.init);
  const auto n_groups = s.communities.size();
  const bool ab = mode == RunMode::AB;
  const auto mediation = mode == RunMode::Unmediated ? MediationMode::OrganicOnly : MediationMode::Full;

  Trajectory traj;
  traj.mode = mode;
  traj.seed = seed;
  traj.rows.reserve(static_cast<std::size_t>(s.horizon) + 1);
  std::vector<Arm>& arms = traj.arms;
  if (ab) {
    for (NodeId u : g.alive_nodes()) arms.push_back(draw_arm(s.ab, g.node(u).group, rng.assignment));
  }

  std::size_t cursor = 0;
  auto record = [&](Timestep t) {
    LedgerSummary sum;
    const auto events = g.ledger();
    for (; cursor < events.size(); ++cursor) {
      const auto& ev = events[cursor];
      switch (ev.kind) {
        case LedgerEvent::Kind::NodeArrival: ++sum.arrivals; break;
        case LedgerEvent::Kind::EdgeAdded: ++sum.added[static_cast<std::size_t>(ev.provenance)]; break;
        case LedgerEvent::Kind::EdgeRemoved:
          (ev.reason == RemovalReason::Rewire ? sum.removed_rewire : sum.removed_departure) += 1;
          break;
        case LedgerEvent::Kind::NodeRemoved: break;
      }
    }
    traj.ledger.push_back(sum);
    traj.rows.push_back(snapshot_metrics(g, t, n_groups, s.clustering));
    if (ab) traj.ab_rows.push_back(ab_arm_metrics(g, arms, t));
  };

  record(0);
  std::vector<NodeId> treated;
  for (Timestep t = 1; t <= s.horizon; ++t) {
    for (int k = 0; k < growth.arrivals_per_step; ++k) {
      auto draft = spawn_node(s.communities, rng.arrival);
      const NodeId id = g.add_node(draft.group, std::move(draft.embedding), t);
      if (ab) arms.push_back(draw_arm(s.ab, g.node(id).group, rng.assignment));
      meet_strangers(g, id, growth, rng.strangers, t);
      meet_friends(g, id, growth, mediation, rng.friends, t);
    }
    if (mode != RunMode::Natural && s.window.contains(t)) {
      treated.assign(g.alive_nodes().begin(), g.alive_nodes().end());
      for (NodeId j : treated) {
        if (ab && arms[j.index()] != Arm::Treatment) continue;
        const auto candidate = recommend(s.recommender, g, j, rng.recommender);
        if (!candidate) continue;
        if (decide(s.behavior, g.node(j), g.node(*candidate), growth.link, rng.behavior)) {
          apply_acceptance(g, j, *candidate, s.behavior, t, rng.behavior);
        }
      }
    }
    apply_attrition(g, s.hazard, t, rng.attrition);
    record(t);
  }
  if (opts.keep_graph) traj.final_graph = std::make_shared<const Graph>(std::move(g));
  return traj;
}

inline Trajectory ab_run(const Scenario& s, const ABScheme& scheme, std::uint64_t seed, RunOptions opts = {}) {
  Scenario copy = s;
  copy.ab = scheme;
  return run_trajectory(copy, RunMode::AB, seed, opts);
}

struct RunRequest {
  const Scenario* scenario = nullptr;
  RunMode mode = RunMode::Natural;
  std::uint64_t seed = 0;
  RunOptions options;
};

/// Runs independent trajectories on up to `jobs` threads; results keep request order.
inline std::vector<Trajectory> run_batch(std::span<const RunRequest> requests, unsigned jobs = 1) {
  std::vector<Trajectory> out(requests.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t k = next++; k < requests.size(); k = next++) {
      if (failed) return;
      try {
        const auto& r = requests[k];
        out[k] = run_trajectory(*r.scenario, r.mode, r.seed, r.options);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(requests.size(), 1))));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < jobs; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

// ---------------------------------------------------------------------------
// Effect estimators

inline double metric_at(const Trajectory& traj, std::string_view metric, Timestep t) { return traj.at(t).get(metric); }

inline double total_effect(const Trajectory& rec, const Trajectory& nat, std::string_view metric, Timestep T) {
  return metric_at(rec, metric, T) - metric_at(nat, metric, T);
}

/// Effect_T - Effect_{t_hi}.
inline double delayed_effect(const Trajectory& rec, const Trajectory& nat, std::string_view metric, Timestep T,
                             Timestep t_hi) {
  if (T < t_hi) throw std::invalid_argument("delayed effect requires T >= t_hi");
  return total_effect(rec, nat, metric, T) - total_effect(rec, nat, metric, t_hi);
}

struct DirectIndirect {
  double direct = kUndefined;
  double indirect = kUndefined;
};

inline DirectIndirect decompose_effects(const Trajectory& rec, const Trajectory& unmediated, const Trajectory& nat,
                                       std::string_view metric, Timestep T) {
  const double direct = metric_at(unmediated, metric, T) - metric_at(nat, metric, T);
  return {direct, total_effect(rec, nat, metric, T) - direct};
}

/// Before/after difference m(T) - m(t_lo) on the intervened trajectory alone.
inline double longitudinal_estimate(const Trajectory& rec, std::string_view metric, Timestep t_lo, Timestep T) {
  if (T < t_lo) throw std::invalid_argument("longitudinal estimate requires T >= t_lo");
  return metric_at(rec, metric, T) - metric_at(rec, metric, t_lo);
}

inline double longitudinal_bias(const Trajectory& rec, const Trajectory& nat, std::string_view metric, Timestep t_lo,
                                Timestep T) {
  return longitudinal_estimate(rec, metric, t_lo, T) - total_effect(rec, nat, metric, T);
}

enum class DelayedClass { Diminishing, Amplifying, Persistent };

constexpr std::string_view to_string(DelayedClass c) noexcept {
  switch (c) {
    case DelayedClass::Diminishing: return "diminishing";
    case DelayedClass::Amplifying: return "amplifying";
    case DelayedClass::Persistent: return "persistent";
  }
  return "unknown";
}

/// Persistent when the delayed-effect interval covers zero; otherwise
/// amplifying if the effect at T is larger in magnitude than at t_hi.
inline DelayedClass classify_delayed(const Band& delayed, double effect_at_t_hi) {
  if (delayed.lo <= 0.0 && 0.0 <= delayed.hi) return DelayedClass::Persistent;
  const double effect_at_T = effect_at_t_hi + delayed.mean;
  return std::abs(effect_at_T) > std::abs(effect_at_t_hi) ? DelayedClass::Amplifying : DelayedClass::Diminishing;
}

enum class ABAdjustment { Naive, Adjusted };

constexpr std::string_view to_string(ABAdjustment a) noexcept { return a == ABAdjustment::Naive ? "naive" : "adjusted"; }

struct ABEstimate {
  double treatment = kUndefined;
  double control = kUndefined;
  double difference = kUndefined;
};

inline constexpr std::array<std::string_view, 3> kABMetrics{"clustering", "gini", "homophily"};

inline ABEstimate ab_estimate(const ABRow& row, std::string_view metric, ABAdjustment adj) {
  const bool naive = adj == ABAdjustment::Naive;
  ArmValues v;
  if (metric == "homophily") {
    v = naive ? row.homophily_naive : row.homophily_adjusted;
  } else if (metric == "clustering") {
    v = naive ? row.clustering_naive : row.clustering_adjusted;
  } else if (metric == "gini") {
    v = naive ? row.gini_naive : row.gini_adjusted;
  } else {
    throw std::out_of_range("unknown A/B metric: " + std::string(metric));
  }
  return {v.treatment, v.control, v.treatment - v.control};
}

inline ABEstimate ab_estimate(const Trajectory& ab, std::string_view metric, ABAdjustment adj, Timestep T) {
  if (T < 0 || static_cast<std::size_t>(T) >= ab.ab_rows.size()) {
    throw std::out_of_range("no A/B rows at timestep " + std::to_string(T));
  }
  return ab_estimate(ab.ab_rows[static_cast<std::size_t>(T)], metric, adj);
}

// ---------------------------------------------------------------------------
// Aggregation across seeds

struct AggregateTrajectory {
  RunMode mode = RunMode::Natural;
  std::vector<std::string> metrics;
  /// bands[metric index][t]
  std::vector<std::vector<Band>> bands;

  const Band& at(std::string_view metric, Timestep t) const {
    const auto it = std::find(metrics.begin(), metrics.end(), metric);
    if (it == metrics.end()) throw std::out_of_range("unknown metric: " + std::string(metric));
    return bands[static_cast<std::size_t>(it - metrics.begin())].at(static_cast<std::size_t>(t));
  }
  double mean(std::string_view metric, Timestep t) const { return at(metric, t).mean; }
};

inline AggregateTrajectory aggregate(std::span<const Trajectory> trajs) {
  if (trajs.empty()) throw std::invalid_argument("aggregate needs at least one trajectory");
  const auto horizon = trajs.front().rows.size();
  for (const auto& tr : trajs) {
    if (tr.rows.size() != horizon || tr.mode != trajs.front().mode) {
      throw std::invalid_argument("aggregate needs trajectories of equal horizon and mode");
    }
  }
  AggregateTrajectory agg;
  agg.mode = trajs.front().mode;
  agg.metrics = metric_names(trajs.front().rows.front().homophily_by_group.size());
  std::vector<double> values(trajs.size());
  for (const auto& m : agg.metrics) {
    auto& series = agg.bands.emplace_back();
    series.reserve(horizon);
    for (std::size_t t = 0; t < horizon; ++t) {
      for (std::size_t k = 0; k < trajs.size(); ++k) values[k] = trajs[k].rows[t].get(m);
      series.push_back(confidence_band(values));
    }
  }
  return agg;
}

/// Seed-paired effect decomposition for one metric at one horizon.
struct EffectRow {
  std::string metric;
  Timestep T = 0;
  Band total, delayed, direct, indirect;
};

/// `rec`, `unmediated` and `nat` are paired by position (same seed). Pass an
/// empty `unmediated` span to skip the direct/indirect split.
inline std::vector<EffectRow> effect_report(std::span<const Trajectory> rec, std::span<const Trajectory> unmediated,
                                            std::span<const Trajectory> nat, const InterventionWindow& window,
                                            std::span<const Timestep> horizons) {
  if (rec.size() != nat.size() || (!unmediated.empty() && unmediated.size() != rec.size()) || rec.empty()) {
    throw std::invalid_argument("effect_report needs equally many seed-paired trajectories");
  }
  for (std::size_t k = 0; k < rec.size(); ++k) {
    if (rec[k].seed != nat[k].seed || (!unmediated.empty() && unmediated[k].seed != rec[k].seed)) {
      throw std::invalid_argument("effect_report trajectories are not seed-paired");
    }
  }
  const auto n = rec.size();
  std::vector<EffectRow> out;
  std::vector<double> total(n), delayed(n), direct(n), indirect(n);
  for (const auto& metric : metric_names(rec.front().rows.front().homophily_by_group.size())) {
    for (Timestep T : horizons) {
      for (std::size_t k = 0; k < n; ++k) {
        total[k] = total_effect(rec[k], nat[k], metric, T);
        delayed[k] = T >= window.hi ? delayed_effect(rec[k], nat[k], metric, T, window.hi) : kUndefined;
        if (unmediated.empty()) {
          direct[k] = indirect[k] = kUndefined;
        } else {
          const auto split = decompose_effects(rec[k], unmediated[k], nat[k], metric, T);
          direct[k] = split.direct;
          indirect[k] = split.indirect;
        }
      }
      out.push_back({metric, T, confidence_band(total), confidence_band(delayed), confidence_band(direct),
                     confidence_band(indirect)});
    }
  }
  return out;
}

}  // namespace netrec
